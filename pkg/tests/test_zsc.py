import json
import math

import numpy as np
import pytest
import requests
from hypothesis import given
from hypothesis import strategies as st

from moraltext.bundled import bundled_text
from moraltext.dimensions import DIMENSIONS, Dimension
from moraltext.errors import (
    MissingDimension,
    NoTokenCoverage,
    ProtocolViolation,
    ServiceUnreachable,
    ZeroVector,
    ZscError,
)
from moraltext.lexicon import merge, parse_mfd, parse_moralstrength
from moraltext.zsc import (
    EmbeddingTable,
    ExternalScorer,
    LabelScores,
    LabelSet,
    build_label_sets,
    dimension_features,
    document_vector,
    score_labels_builtin,
    validate_scores,
)


# ----------------------------------------------------------------- labels

def _merged_fixture():
    return merge(parse_mfd(bundled_text("mfd_sample.dic")),
                 parse_moralstrength(bundled_text("moralstrength_sample.csv")))


def test_build_label_sets_sorted_deduped_star_stripped():
    sets = build_label_sets(_merged_fixture())
    assert set(sets) == set(DIMENSIONS)
    care = sets[Dimension.CARE].labels
    assert list(care) == sorted(care)
    assert len(set(care)) == len(care)
    assert all("*" not in label for label in care)
    assert "safe" in care and "compassion" in care


def test_build_label_sets_cap():
    sets = build_label_sets(_merged_fixture(), max_labels=2)
    for dim in DIMENSIONS:
        assert len(sets[dim].labels) <= 2
        # the cap keeps the sorted head, so the result is still sorted
        assert list(sets[dim].labels) == sorted(sets[dim].labels)


def test_label_set_validation():
    with pytest.raises(ZscError):
        LabelSet(Dimension.CARE, ())
    with pytest.raises(ZscError):
        LabelSet(Dimension.CARE, ("a", "a"))


def test_label_scores_validate_range():
    with pytest.raises(ProtocolViolation):
        LabelScores(Dimension.CARE, (0.5, 1.2))


# -------------------------------------------------------------- embeddings

def test_embedding_table_save_load_round_trip(tmp_path):
    table = EmbeddingTable({"kind": [1.0, 0.25], "cruel": [-0.5, 1e-17]})
    path = tmp_path / "emb.txt"
    table.save(path)
    first_line = path.read_text(encoding="utf-8").splitlines()[0]
    assert first_line == "2 2"
    back = EmbeddingTable.load(path)
    assert len(back) == 2 and back.d == 2
    assert np.array_equal(back["cruel"], table["cruel"])  # repr is exact


def test_embedding_table_load_without_header(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("kind 1.0 0.0\ncruel 0.0 1.0\n", encoding="utf-8")
    table = EmbeddingTable.load(path)
    assert "kind" in table and table.d == 2


def test_embedding_table_rejects_ragged_vectors():
    with pytest.raises(ZscError):
        EmbeddingTable({"a": [1.0], "b": [1.0, 2.0]})
    with pytest.raises(ZscError):
        EmbeddingTable({})


def test_document_vector_is_the_in_vocab_mean():
    table = EmbeddingTable({"a": [1.0, 0.0], "b": [0.0, 1.0]})
    vec = document_vector(["a", "b", "zzz"], table)
    assert np.allclose(vec, [0.5, 0.5])
    with pytest.raises(NoTokenCoverage):
        document_vector(["zzz"], table)


# ----------------------------------------------------------- builtin scores

def _tiny_table():
    return EmbeddingTable({
        "a": [1.0, 0.0],
        "b": [0.0, 1.0],
        "lab_x": [1.0, 0.0],
        "lab_y": [0.0, 1.0],
    })


def test_builtin_scores_known_cosines():
    labels = LabelSet(Dimension.CARE, ("lab_x", "lab_y", "oov"))
    out = score_labels_builtin(["a"], labels, _tiny_table())
    assert out.scores[0] == 1.0                      # cos = 1
    assert out.scores[1] == 0.5                      # cos = 0
    assert out.scores[2] == 0.5                      # out of vocabulary
    out = score_labels_builtin(["a", "b"], labels, _tiny_table())
    expected = (math.cos(math.pi / 4) + 1.0) / 2.0   # 45 degrees to each axis
    assert abs(out.scores[0] - expected) < 1e-12
    assert abs(out.scores[1] - expected) < 1e-12


def test_builtin_scores_are_bitwise_deterministic():
    labels = LabelSet(Dimension.CARE, ("lab_x", "lab_y"))
    a = score_labels_builtin(["a", "b"], labels, _tiny_table())
    b = score_labels_builtin(["a", "b"], labels, _tiny_table())
    assert a.scores == b.scores


def test_builtin_zero_docvec_raises():
    table = EmbeddingTable({"p": [1.0, 0.0], "q": [-1.0, 0.0], "lab": [1.0, 0.0]})
    labels = LabelSet(Dimension.CARE, ("lab",))
    with pytest.raises(ZeroVector):
        score_labels_builtin(["p", "q"], labels, table)


# ----------------------------------------------------------------- contract

def test_validate_scores_accepts_and_coerces():
    assert validate_scores(("a", "b"), [0, 1]) == [0.0, 1.0]


@pytest.mark.parametrize("scores", [
    [0.5],                 # wrong length
    [0.5, 1.5],            # out of range
    [0.5, -0.1],
    [0.5, float("nan")],
    [0.5, float("inf")],
    [0.5, "0.4"],          # non-numeric
    [0.5, True],           # bool is not a score
    [0.5, None],
])
def test_validate_scores_rejects(scores):
    with pytest.raises(ProtocolViolation):
        validate_scores(("a", "b"), scores)


# -------------------------------------------------------------- aggregation

def _full_scores(care_scores=(0.9, 0.1, 0.5, 0.2, 0.8, 0.4)):
    out = []
    for dim in DIMENSIONS:
        scores = care_scores if dim is Dimension.CARE else (0.5,)
        out.append(LabelScores(dim, tuple(scores)))
    return out


def test_dimension_features_top_k_mean():
    features = dimension_features(_full_scores(), k=5)
    assert len(features) == 10
    assert abs(features[0] - (0.9 + 0.8 + 0.5 + 0.4 + 0.2) / 5) < 1e-15
    assert all(f == 0.5 for f in features[1:])


def test_dimension_features_k_larger_than_label_count():
    features = dimension_features(_full_scores((0.2, 0.4)), k=5)
    assert features[0] == pytest.approx(0.3)


def test_dimension_features_k_one_is_max():
    features = dimension_features(_full_scores(), k=1)
    assert features[0] == 0.9


def test_dimension_features_accepts_dict_input():
    scores = {ls.dimension: ls for ls in _full_scores()}
    assert dimension_features(scores, k=5) == dimension_features(_full_scores(), k=5)


def test_dimension_features_requires_all_dimensions():
    with pytest.raises(MissingDimension):
        dimension_features(_full_scores()[:9], k=5)
    with pytest.raises(ValueError):
        dimension_features(_full_scores(), k=0)


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8),
       st.integers(0, 7), st.floats(0.0, 1.0), st.integers(1, 6))
def test_raising_one_label_score_never_lowers_the_feature(scores, idx, bump, k):
    idx = idx % len(scores)
    raised = list(scores)
    raised[idx] = min(1.0, raised[idx] + bump)
    before = dimension_features(_full_scores(tuple(scores)), k=k)[0]
    after = dimension_features(_full_scores(tuple(raised)), k=k)[0]
    assert after >= before - 1e-12


# ------------------------------------------------------------ external client

class FakeResponse:
    def __init__(self, status_code, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text or (json.dumps(payload) if payload is not None else "")

    def json(self):
        if self._payload is None:
            raise ValueError("no body")
        return self._payload


class FakeSession:
    """Scripted stand-in for requests.Session; items may be exceptions."""

    def __init__(self, script, health=None):
        self.script = list(script)
        self.health = health or FakeResponse(200, {"status": "ok"})
        self.posts = []

    def post(self, url, json=None, timeout=None):
        self.posts.append((url, json))
        item = self.script.pop(0)
        if isinstance(item, Exception):
            raise item
        return item

    def get(self, url, timeout=None):
        if isinstance(self.health, Exception):
            raise self.health
        return self.health


LABELS = LabelSet(Dimension.CARE, ("kind", "gentle"))


def _scorer(session, retries=2):
    return ExternalScorer("http://svc:9000/", retries=retries, backoff=0.0,
                          session=session)


def test_external_scorer_happy_path_builds_request():
    session = FakeSession([FakeResponse(200, {"scores": [0.9, 0.2]})])
    out = _scorer(session).score("they were kind", LABELS)
    assert out.scores == (0.9, 0.2)
    url, payload = session.posts[0]
    assert url == "http://svc:9000/score"
    assert payload == {"text": "they were kind",
                       "labels": ["kind", "gentle"], "multi_label": True}


def test_external_scorer_retries_transient_failures():
    session = FakeSession([
        requests.exceptions.ConnectionError("down"),
        FakeResponse(503),
        FakeResponse(200, {"scores": [0.6, 0.4]}),
    ])
    out = _scorer(session, retries=2).score("x", LABELS)
    assert out.scores == (0.6, 0.4)
    assert len(session.posts) == 3


def test_external_scorer_gives_up_after_retries():
    session = FakeSession([FakeResponse(500)] * 3)
    with pytest.raises(ServiceUnreachable):
        _scorer(session, retries=2).score("x", LABELS)
    assert len(session.posts) == 3


def test_external_scorer_timeout_is_retried_then_raised():
    session = FakeSession([requests.exceptions.Timeout("slow")] * 2)
    from moraltext.errors import Timeout as ZscTimeout
    with pytest.raises(ZscTimeout):
        _scorer(session, retries=1).score("x", LABELS)


@pytest.mark.parametrize("response", [
    FakeResponse(400, text="bad request"),
    FakeResponse(200, text="not json"),
    FakeResponse(200, {"result": [0.5, 0.5]}),
    FakeResponse(200, {"scores": "oops"}),
    FakeResponse(200, {"scores": [0.5]}),
    FakeResponse(200, {"scores": [0.5, 1.7]}),
])
def test_external_scorer_contract_violations_do_not_retry(response):
    session = FakeSession([response, FakeResponse(200, {"scores": [0.5, 0.5]})])
    with pytest.raises(ProtocolViolation):
        _scorer(session).score("x", LABELS)
    assert len(session.posts) == 1


def test_external_scorer_health():
    assert _scorer(FakeSession([], health=FakeResponse(200, {"status": "ok"}))).health()
    assert not _scorer(FakeSession([], health=FakeResponse(503))).health()
    down = FakeSession([], health=requests.exceptions.ConnectionError("down"))
    with pytest.raises(ServiceUnreachable):
        _scorer(down).health()
