"""Exception types.

Every error carries a short machine-readable ``code`` (e.g. ``"invalid-params"``)
and a ``category`` used by the CLI to pick an exit status.
"""

from __future__ import annotations


class FramelabError(Exception):
    code = "error"
    category = "analysis"

    def __init__(self, message: str = ""):
        super().__init__(f"{self.code}: {message}" if message else self.code)
        self.detail = message


# construction-time failures (CLI exit status 3)

class InvalidParams(FramelabError, ValueError):
    code = "invalid-params"
    category = "construction"


class DimensionMismatch(FramelabError, ValueError):
    code = "dimension-mismatch"
    category = "construction"


class InvalidDimension(FramelabError, ValueError):
    code = "invalid-dimension"
    category = "construction"


class InvalidFamily(FramelabError, ValueError):
    code = "invalid-family"
    category = "construction"


class NoValidK(InvalidFamily):
    code = "no-valid-k"


class InvalidMollifier(FramelabError, ValueError):
    code = "invalid-mollifier"
    category = "construction"


class SupportTooWide(FramelabError, ValueError):
    code = "support-too-wide"
    category = "construction"


class InvalidRegion(FramelabError, ValueError):
    code = "invalid-region"
    category = "construction"


# analysis precondition failures (CLI exit status 4)

class ZeroFrequency(FramelabError, ValueError):
    code = "zero-frequency"


class SupportTouchesZero(FramelabError, ValueError):
    code = "support-touches-zero"


class UnboundedSupport(FramelabError, ValueError):
    code = "unbounded-support"


class DegenerateRegion(FramelabError, ValueError):
    code = "degenerate-region"


# configuration (CLI exit status 2)

class ConfigError(FramelabError, ValueError):
    code = "config-parse-error"
    category = "config"
