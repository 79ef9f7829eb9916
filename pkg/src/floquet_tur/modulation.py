"""Periodic frequency modulations of the qubit and their Floquet sidebands.

A modulation omega(t) with period T = 2*pi/Delta dresses the transition
operator of the qubit into a comb of sidebands at omega_bar + q*Delta.  The
weight of sideband q is P_q = |eta(q)|**2 with

    eta(q) = (1/T) int_0^T exp(i Phi(t)) exp(-i q Delta t) dt,
    Phi(t) = int_0^t (omega(s) - omega_bar) ds,

and omega_bar the period average of omega(t).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, TruncationError

__all__ = [
    "ModulationSpec",
    "FloquetSpectrum",
    "omega_of_t",
    "carrier_frequency",
    "phase_integral",
    "floquet_spectrum",
    "sinusoidal_three_mode",
    "DEFAULT_SAMPLES",
    "DEFAULT_WEIGHT_FLOOR",
]

DEFAULT_SAMPLES = 4096
DEFAULT_WEIGHT_FLOOR = 1e-10
_KINDS = ("constant", "sinusoidal", "crab")


@dataclass(frozen=True)
class ModulationSpec:
    """A periodic modulation omega(t) of the qubit splitting.

    Use the :meth:`constant`, :meth:`sinusoidal` and :meth:`crab`
    constructors rather than filling the fields by hand.

    Parameters
    ----------
    kind : {"constant", "sinusoidal", "crab"}
    omega0 : float
        Reference level of the splitting.
    Delta : float
        Modulation angular frequency, ``2*pi/T``.
    lam : float
        Dimensionless amplitude of the sinusoidal modulation.
    mu : float
        Control strength of the CRAB pulse.
    coeffs : tuple of (a_n, b_n)
        CRAB Fourier coefficients for n = 1..N.
    """

    kind: str
    omega0: float
    Delta: float
    lam: float = 0.0
    mu: float = 0.0
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown modulation kind {self.kind!r}")
        if not self.Delta > 0:
            raise DomainError(f"Delta must be positive, got {self.Delta}")
        if self.kind == "sinusoidal" and not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.kind == "crab":
            coeffs = tuple((float(a), float(b)) for a, b in self.coeffs)
            if not coeffs:
                raise DomainError("a CRAB pulse needs at least one harmonic")
            if any(abs(a) > 1.0 or abs(b) > 1.0 for a, b in coeffs):
                raise DomainError("CRAB coefficients must lie in [-1, 1]")
            object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, omega0, Delta=1.0):
        return cls("constant", float(omega0), float(Delta))

    @classmethod
    def sinusoidal(cls, omega0, lam, Delta):
        return cls("sinusoidal", float(omega0), float(Delta), lam=float(lam))

    @classmethod
    def crab(cls, omega0, Delta, mu, coeffs):
        """CRAB pulse; ``coeffs`` is a sequence of (a_n, b_n) pairs or a flat
        array ``[a_1..a_N, b_1..b_N]``."""
        arr = np.asarray(coeffs, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(2, -1).T
        return cls("crab", float(omega0), float(Delta), mu=float(mu),
                   coeffs=tuple(map(tuple, arr)))

    @property
    def period(self):
        return 2.0 * np.pi / self.Delta

    @property
    def N(self):
        return len(self.coeffs)


def _check_time(spec, t):
    t = np.asarray(t, dtype=float)
    slack = 1e-12 * spec.period
    if np.any(t < -slack) or np.any(t > spec.period + slack):
        raise DomainError(f"t must lie in [0, T={spec.period}]")
    return t


def _crab_trig_coefficients(spec):
    """Expand the windowed CRAB series into a plain trigonometric polynomial.

    With the window 1/R(t) = sin^2(pi t / T) = (1 - cos(Delta t))/2 the
    product with the Fourier series is again a Fourier series of degree N+1.
    Returns (A, B) with ``omega(t) - omega0 = sum_k A_k cos(k Delta t) +
    B_k sin(k Delta t)``; ``A_0`` is the shift of the period average.
    """
    n_max = spec.N + 1
    A = np.zeros(n_max + 1)
    B = np.zeros(n_max + 1)
    for n, (a, b) in enumerate(spec.coeffs, start=1):
        A[n] += a / 2
        B[n] += b / 2
        A[n + 1] -= a / 4
        A[n - 1] -= a / 4
        B[n + 1] -= b / 4
        if n > 1:
            B[n - 1] -= b / 4
    scale = spec.mu / (2 * spec.N)
    return scale * A, scale * B


def _crab_window(spec, t):
    return np.sin(np.pi * t / spec.period) ** 2


def omega_of_t(spec, t):
    """Instantaneous splitting omega(t) for 0 <= t <= T (array-aware)."""
    t = _check_time(spec, t)
    if spec.kind == "constant":
        return np.full_like(t, spec.omega0)[()]
    if spec.kind == "sinusoidal":
        return (spec.omega0 + spec.lam * spec.Delta * np.sin(spec.Delta * t))[()]
    n = np.arange(1, spec.N + 1)
    a = np.array([c[0] for c in spec.coeffs])
    b = np.array([c[1] for c in spec.coeffs])
    phase = 2 * np.pi * np.multiply.outer(t, n) / spec.period
    series = np.cos(phase) @ a + np.sin(phase) @ b
    # 1/R(t) vanishes at both ends of the cycle, pinning omega(0) = omega(T) = omega0
    return (spec.omega0 + spec.mu / (2 * spec.N) * _crab_window(spec, t) * series)[()]


def carrier_frequency(spec):
    """Period average omega_bar of omega(t)."""
    if spec.kind == "crab":
        A, _ = _crab_trig_coefficients(spec)
        return spec.omega0 + A[0]
    return spec.omega0


def phase_integral(spec, t):
    """Phi(t) = int_0^t (omega(s) - omega_bar) ds, closed form for every kind."""
    t = _check_time(spec, t)
    if spec.kind == "constant":
        return np.zeros_like(t)[()]
    if spec.kind == "sinusoidal":
        return (spec.lam * (1.0 - np.cos(spec.Delta * t)))[()]
    A, B = _crab_trig_coefficients(spec)
    k = np.arange(1, len(A))
    kt = spec.Delta * np.multiply.outer(t, k)
    phi = (np.sin(kt) @ (A[1:] / k) + (1.0 - np.cos(kt)) @ (B[1:] / k)) / spec.Delta
    return phi[()]


@dataclass(frozen=True, eq=False)
class FloquetSpectrum:
    """Sideband channels (q, omega_q = omega_bar + q*Delta, P_q).

    ``q`` and ``P`` are parallel arrays sorted by ``q``.
    """

    omega_bar: float
    Delta: float
    q: np.ndarray
    P: np.ndarray
    total_weight: float = field(init=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=int)
        P = np.asarray(self.P, dtype=float)
        if q.shape != P.shape or q.ndim != 1:
            raise DomainError("q and P must be parallel 1-d arrays")
        if np.any(P < 0):
            raise DomainError("Floquet weights must be non-negative")
        order = np.argsort(q, kind="stable")
        q, P = q[order], P[order]
        q.setflags(write=False)
        P.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "total_weight", float(P.sum()))

    @property
    def omega_q(self):
        return self.omega_bar + self.q * self.Delta

    @property
    def channels(self):
        return [(int(q), float(w), float(p)) for q, w, p in zip(self.q, self.omega_q, self.P)]

    def __len__(self):
        return len(self.q)

    def __repr__(self):
        return (f"FloquetSpectrum(omega_bar={self.omega_bar!r}, Delta={self.Delta!r}, "
                f"q=[{self.q.min()}..{self.q.max()}], total_weight={self.total_weight!r})")


@lru_cache(maxsize=16)
def _grid_tables(M, K):
    """sin and cos of 2 pi k n / M for n < M, 1 <= k <= K (read-only)."""
    arg = 2 * np.pi * np.outer(np.arange(M), np.arange(1, K + 1)) / M
    s, c = np.sin(arg), np.cos(arg)
    s.setflags(write=False)
    c.setflags(write=False)
    return s, c


def _phase_on_grid(spec, M):
    """Phi(t_n) on t_n = n T / M; uses cached trig tables for CRAB pulses."""
    if spec.kind != "crab":
        return phase_integral(spec, np.arange(M) * (spec.period / M))
    A, B = _crab_trig_coefficients(spec)
    k = np.arange(1, len(A))
    s, c = _grid_tables(M, len(k))
    return (s @ (A[1:] / k) + (B[1:] / k).sum() - c @ (B[1:] / k)) / spec.Delta


def floquet_spectrum(spec, weight_floor=DEFAULT_WEIGHT_FLOOR, samples=DEFAULT_SAMPLES):
    """Floquet decomposition of a modulation.

    ``eta(q)`` is obtained from a uniform-grid DFT of ``exp(i Phi(t))`` over
    one period; the returned channels form the smallest symmetric window
    ``|q| <= Q`` whose weights sum to at least ``1 - weight_floor``.

    Raises
    ------
    TruncationError
        If the target is not reached for ``Q < samples/2``.
    """
    if not 0.0 < weight_floor < 1.0:
        raise DomainError("weight_floor must lie in (0, 1)")
    omega_bar = carrier_frequency(spec)
    if spec.kind == "constant":
        return FloquetSpectrum(omega_bar, spec.Delta, np.array([0]), np.array([1.0]))

    M = int(samples)
    eta = np.fft.fft(np.exp(1j * _phase_on_grid(spec, M))) / M
    P = eta.real**2 + eta.imag**2

    q_cap = M // 2 - 1
    pairs = P[1:q_cap + 1] + P[M - 1:M - q_cap - 1:-1]
    cumulative = P[0] + np.concatenate(([0.0], np.cumsum(pairs)))
    target = 1.0 - weight_floor
    hits = np.nonzero(cumulative >= target)[0]
    if hits.size == 0:
        raise TruncationError(
            f"weight target {target} not reached within |q| <= {q_cap}", float(cumulative[-1]))
    Q = int(hits[0])
    q = np.arange(-Q, Q + 1)
    return FloquetSpectrum(omega_bar, spec.Delta, q, P[q % M])


def sinusoidal_three_mode(omega0, lam, Delta):
    """Small-amplitude sinusoidal spectrum restricted to q = 0, +-1.

    Uses P_0 = 1 - lam**2/2 and P_{+-1} = lam**2/4, which sum to one exactly.
    """
    p1 = lam**2 / 4
    return FloquetSpectrum(float(omega0), float(Delta), np.array([-1, 0, 1]),
                           np.array([p1, 1.0 - 2 * p1, p1]))
