from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ConfigInvalid

FIELDS = ("rho1", "rho2", "mu1", "mu2", "sigma", "gamma_a")


@dataclass(frozen=True)
class FluidParams:
    """Physical constants of the two-fluid system.

    Phase 1 occupies y < 0, phase 2 occupies y > 0; gravity points down.
    Units are never checked, only positivity.
    """

    rho1: float
    rho2: float
    mu1: float
    mu2: float
    sigma: float
    gamma_a: float

    def __post_init__(self):
        bad = []
        for name in FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                bad.append(f"{name}: expected a number, got {value!r}")
            elif not math.isfinite(value) or value <= 0:
                bad.append(f"{name}: must be finite and > 0, got {value!r}")
            else:
                object.__setattr__(self, name, float(value))
        if bad:
            raise ConfigInvalid(bad)

    def jump(self) -> float:
        """Density jump [[rho]] = rho2 - rho1 (upper minus lower)."""
        return self.rho2 - self.rho1

    def is_heavy_on_top(self) -> bool:
        return self.rho2 > self.rho1

    @property
    def rho_sum(self) -> float:
        return self.rho1 + self.rho2

    @property
    def mu_sum(self) -> float:
        return self.mu1 + self.mu2

    def branch_point(self, tau):
        """Least negative Re(lambda) at which a radicand rho_j*lambda + mu_j*tau^2 vanishes."""
        return -min(self.mu1 / self.rho1, self.mu2 / self.rho2) * tau * tau

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> "FluidParams":
        missing = [k for k in FIELDS if k not in data]
        unknown = [k for k in data if k not in FIELDS]
        problems = [f"{k}: missing" for k in missing]
        problems += [f"{k}: unknown key" for k in unknown]
        if problems:
            raise ConfigInvalid(problems)
        return cls(**{k: data[k] for k in FIELDS})
