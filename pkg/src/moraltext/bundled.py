"""Access to the data files shipped inside the package."""

from importlib import resources

BUNDLED_FILES = (
    "mfd_sample.dic",
    "moralstrength_sample.csv",
    "liwc_standin.dic",
    "stopwords_en.txt",
)


def bundled_text(name):
    if name not in BUNDLED_FILES:
        raise KeyError(f"no bundled file named {name!r}")
    return resources.files("moraltext").joinpath("data", name).read_text(encoding="utf-8")


def bundled_path(name):
    """Filesystem path of a bundled file; valid for installed packages."""
    if name not in BUNDLED_FILES:
        raise KeyError(f"no bundled file named {name!r}")
    return resources.files("moraltext").joinpath("data", name)
