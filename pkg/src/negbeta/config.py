"""Run-wide defaults, collected in one dataclass so reports can print them."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"environment variable {name} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Settings:
    """Defaults for precision, truncation and search budgets.

    Attributes
    ----------
    prec : int
        Working precision in bits for the approximate backend.
    precision_cap : int
        Largest precision the approximate backend may escalate to before
        giving up on a floor decision.  Overridable with the environment
        variable ``NEGBETA_PRECISION_CAP``.
    max_len : int
        Default truncation length for code enumerations.
    degree : int
        Default degree for power series identities.
    digit_horizon : int
        Default number of digits compared in bisections.
    state_cap : int
        Maximum number of orbit points stored while searching for a period.
    tol : float
        Default bracket width for the exchange-map bisections.
    iteration_cap : int
        Maximum number of bisection steps.
    """

    prec: int = 256
    precision_cap: int = field(default_factory=lambda: _env_int("NEGBETA_PRECISION_CAP", 4096))
    max_len: int = 40
    degree: int = 20
    digit_horizon: int = 60
    state_cap: int = 10**6
    tol: float = 1e-12
    iteration_cap: int = 200

    def header(self) -> dict:
        return asdict(self)


DEFAULTS = Settings()
