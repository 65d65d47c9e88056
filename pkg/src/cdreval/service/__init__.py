"""FastAPI service wrapping the evaluation engine."""

from .app import app  # noqa: F401
