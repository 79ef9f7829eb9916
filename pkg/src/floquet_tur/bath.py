"""Bath spectral densities with the KMS extension to negative frequency."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, UndefinedSupportError

__all__ = [
    "BathModel",
    "MachineParams",
    "spectral_density",
    "spectral_density_mp",
    "kms_residual",
]


@dataclass(frozen=True)
class BathModel:
    """Lorentzian bath coupled through sigma_x.

    With ``split_at`` set, the spectrum is the split Lorentzian centred at
    ``split_at + delta_shift``: a hot bath only has support strictly above
    ``split_at`` and a cold bath strictly below.  Without it the bath is a
    plain Lorentzian centred at ``delta_shift``.
    """

    role: str
    beta: float
    gamma0: float = 1.0
    Gamma: float = 0.2
    delta_shift: float = 3.0
    split_at: float | None = None

    def __post_init__(self):
        if self.role not in ("hot", "cold"):
            raise DomainError(f"role must be 'hot' or 'cold', got {self.role!r}")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if self.gamma0 < 0:
            raise DomainError("gamma0 must be non-negative")
        if not self.Gamma > 0:
            raise DomainError("Gamma must be positive")

    @property
    def is_split(self):
        return self.split_at is not None

    def __call__(self, omega):
        return spectral_density(self, omega)


def _positive_branch(bath, w):
    if bath.is_split:
        centre = bath.split_at + bath.delta_shift
        if bath.role == "hot":
            support = w > bath.split_at
        else:
            support = w < bath.split_at
    else:
        centre = bath.delta_shift
        support = np.ones_like(w, dtype=bool)
    lorentz = bath.gamma0 * bath.Gamma**2 / ((w - centre) ** 2 + bath.Gamma**2)
    return np.where(support, lorentz, 0.0)


def spectral_density(bath, omega):
    """G(omega) on the whole real line.

    Negative frequencies follow G(-w) = exp(-beta w) G(w) with the bath's
    own inverse temperature.
    """
    omega = np.asarray(omega, dtype=float)
    w = np.abs(omega)
    g = _positive_branch(bath, w)
    g = np.where(omega < 0, g * np.exp(-bath.beta * w), g)
    return g[()]


def spectral_density_mp(bath, omega):
    """Scalar G(omega) as an ``mpmath.mpf`` at the current working precision."""
    omega = mpmath.mpf(omega)
    w = abs(omega)
    if bath.is_split:
        centre = mpmath.mpf(bath.split_at) + bath.delta_shift
        inside = w > bath.split_at if bath.role == "hot" else w < bath.split_at
    else:
        centre = mpmath.mpf(bath.delta_shift)
        inside = True
    if not inside:
        return mpmath.mpf(0)
    G2 = mpmath.mpf(bath.Gamma) ** 2
    g = bath.gamma0 * G2 / ((w - centre) ** 2 + G2)
    return g * mpmath.exp(-mpmath.mpf(bath.beta) * w) if omega < 0 else g


def kms_residual(bath, omega):
    """G(-w) - exp(-beta w) G(w) for w > 0 inside the support."""
    if not omega > 0:
        raise DomainError("kms_residual needs omega > 0")
    g = spectral_density(bath, omega)
    if g == 0:
        raise UndefinedSupportError(f"G({omega}) = 0 for the {bath.role} bath")
    return float(spectral_density(bath, -omega) - np.exp(-bath.beta * omega) * g)


@dataclass(frozen=True)
class MachineParams:
    """Thermodynamic setup shared by the hot and cold baths.

    Defaults are the Lorentzian parameters used for all machines
    (gamma0 = 1, Gamma = 0.2, delta = 3).  ``gamma0_h`` / ``gamma0_c``
    override the shared coupling for one bath, e.g. 0 to decouple it.
    """

    omega0: float
    beta_h: float
    beta_c: float
    gamma0: float = 1.0
    Gamma: float = 0.2
    delta: float = 3.0
    gamma0_h: float | None = None
    gamma0_c: float | None = None

    def _pair(self, **kw):
        g_h = self.gamma0 if self.gamma0_h is None else self.gamma0_h
        g_c = self.gamma0 if self.gamma0_c is None else self.gamma0_c
        kw.update(Gamma=self.Gamma, delta_shift=self.delta)
        return (BathModel("hot", self.beta_h, gamma0=g_h, **kw),
                BathModel("cold", self.beta_c, gamma0=g_c, **kw))

    def split_baths(self):
        """Spectrally separated hot/cold pair used by modulated machines."""
        return self._pair(split_at=self.omega0)

    def plain_baths(self):
        """Plain Lorentzian pair used by the circularly driven machine."""
        return self._pair()

    @property
    def scale(self):
        """Natural current scale gamma0 * omega0."""
        return self.gamma0 * self.omega0
