"""Problem parameters for the weighted oscillatory integral

    I[f] = int_0^1 f(x) x^alpha (1-x)^beta exp(2ikx) H1_nu(omega x) dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError


@dataclass(frozen=True)
class ProblemParams:
    alpha: float
    beta: float
    nu: float
    k: float
    omega: float

    def __post_init__(self):
        for name in ("alpha", "beta", "nu", "k", "omega"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}", stage="params")
        if not self.alpha - abs(self.nu) > -1:
            raise DomainError("need alpha - |nu| > -1", stage="params")
        if not self.beta > -1:
            raise DomainError("need beta > -1", stage="params")
        if not self.omega > 0:
            raise DomainError("need omega > 0", stage="params")
        if not self.k >= 0:
            raise DomainError("need k >= 0", stage="params")

    @property
    def degenerate(self) -> bool:
        """True on the omega = 2k line, where the recurrence loses its outer terms."""
        return math.isclose(self.omega, 2.0 * self.k, rel_tol=1e-14, abs_tol=0.0)

    @property
    def threshold(self) -> float:
        """Largest index for which forward recursion is stable in practice."""
        return self.k + self.omega / 2.0

    @property
    def tau1(self) -> float:
        return min(self.alpha, self.beta)

    @property
    def tau2(self) -> float:
        return min(self.alpha - abs(self.nu), self.beta)

    def with_(self, **changes) -> "ProblemParams":
        return replace(self, **changes)
