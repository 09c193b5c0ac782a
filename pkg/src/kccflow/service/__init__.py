"""HTTP service exposing the analysis library."""

from .app import create_app  # noqa: F401
