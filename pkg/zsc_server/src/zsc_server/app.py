"""The HTTP surface.

POST /score  {"text": str, "labels": [str...], "multi_label": true}
             -> {"scores": [float...]} aligned with the request labels
GET  /health -> {"status": "ok"} once the model is loaded

Both endpoints answer 503 until loading finishes (or with "error" status
if it failed); malformed or precondition-violating requests get 400. The
model loads on a background thread so the socket can come up immediately.
"""

import threading
from dataclasses import dataclass

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from zsc_server.backends import build_backend


@dataclass
class Settings:
    model: str
    max_labels: int = 128
    batch_size: int = 16


class ScoreRequest(BaseModel):
    text: str
    labels: list[str]
    multi_label: bool = True


class ModelState:
    def __init__(self):
        self.backend = None
        self.error = None
        self.ready = threading.Event()

    def load(self, builder):
        try:
            self.backend = builder()
        except Exception as exc:
            self.error = f"{type(exc).__name__}: {exc}"
        else:
            self.ready.set()


def create_app(settings, builder=None):
    """Build the application and start loading the model in the background.

    ``builder`` exists for tests: any zero-argument callable returning a
    backend replaces the default model construction.
    """
    if builder is None:
        builder = lambda: build_backend(settings.model, settings.batch_size)
    app = FastAPI(title="zsc-server", version="0.1.0")
    state = ModelState()
    app.state.settings = settings
    app.state.model = state
    threading.Thread(target=state.load, args=(builder,), daemon=True).start()

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request, exc):
        return JSONResponse({"detail": exc.errors()}, status_code=400)

    def _unavailable():
        if state.error is not None:
            return JSONResponse({"status": "error", "detail": state.error},
                                status_code=503)
        return JSONResponse({"status": "loading"}, status_code=503)

    @app.get("/health")
    def health():
        if not state.ready.is_set():
            return _unavailable()
        return {"status": "ok"}

    @app.post("/score")
    def score(request: ScoreRequest):
        if not state.ready.is_set():
            return _unavailable()
        problem = _precondition_problem(request, settings)
        if problem:
            return JSONResponse({"detail": problem}, status_code=400)
        return {"scores": state.backend.score(request.text, request.labels)}

    return app


def _precondition_problem(request, settings):
    if not request.text.strip():
        return "text is empty"
    if not request.labels:
        return "labels are empty"
    if any(not label.strip() for label in request.labels):
        return "blank label"
    if len(request.labels) > settings.max_labels:
        return (f"{len(request.labels)} labels exceed the configured cap "
                f"of {settings.max_labels}")
    if not request.multi_label:
        return "only multi-label scoring is implemented"
    return None
