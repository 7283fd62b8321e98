"""Shared error types for size guards and enumeration limits."""
from __future__ import annotations


class SizeLimitError(RuntimeError):
    """A computation exceeded a configured size budget; message says which."""


class LimitExceeded(RuntimeError):
    """Coset enumeration or a build aborted at a configured limit."""

    def __init__(self, message: str, limit_name: str, limit_value: int):
        super().__init__(message)
        self.limit_name = limit_name
        self.limit_value = limit_value
