"""Explicit rate functions for small-time and large-time asymptotics."""

from . import plant, reich

__all__ = ["plant", "reich"]
