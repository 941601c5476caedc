"""HTTP scoring service for zero-shot label probabilities."""

from zsc_server.app import Settings, create_app

__version__ = "0.1.0"
__all__ = ["Settings", "create_app", "__version__"]
