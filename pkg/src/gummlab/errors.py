"""Exception types shared across the workbench."""

from __future__ import annotations


class GummError(Exception):
    """Base class for all workbench errors."""


class InputError(GummError, ValueError):
    """Malformed input: shape, range, signature or parse problems."""


class HypothesisViolated(GummError):
    """A check was asked to run on an instance that fails one of its hypotheses."""

    def __init__(self, clause: str, detail: str = "") -> None:
        self.clause = clause
        self.detail = detail
        msg = f"hypothesis '{clause}' violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotApplicable(GummError):
    """The check does not apply to this input (e.g. non-split extension)."""


class GenerationExhausted(GummError):
    """A generator used its whole budget without producing an instance."""
