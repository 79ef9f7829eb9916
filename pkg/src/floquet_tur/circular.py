"""Circularly driven qubit machine.

The drive ``g (sigma_+ e^{-i Omega t} + h.c.)`` on a qubit of splitting
``omega0`` is removed by the frame rotation ``P(t) = exp(-i Omega t (sigma_z + 1)/2)``,
leaving the constant Floquet Hamiltonian

    H_F = ((omega0 - Omega)/2) sigma_z + g sigma_x - Omega/2.

The Floquet states |phi_j(t)> = P(t)|phi_j> make sigma_x a sum of the two
harmonics e^{+-i Omega t}; their weights S_kj^{+-1} fix the secular rates.
Basis vectors are ordered (excited, ground).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fcs import (COLD, HOT, RateTerms, cumulants_from_terms, numeric_cumulants_from_terms,
                  _E00, _E01, _E10, _E11)

__all__ = [
    "CircularFloquet",
    "floquet_diagonalize",
    "floquet_hamiltonian",
    "sigma_x_harmonics",
    "circular_terms",
    "circular_tilted_generator",
    "circular_cumulants",
]


@dataclass(frozen=True)
class CircularFloquet:
    """Floquet data of the circularly driven qubit.

    ``S_kj_p`` / ``S_kj_m`` are the coefficients of e^{+i Omega t} / e^{-i Omega t}
    in <phi_k(t)| sigma_x |phi_j(t)>.  State 1 has the lower quasi-energy.
    """

    omega0: float
    Omega: float
    g: float
    Delta_det: float
    Omega_R: float
    eps1: float
    eps2: float
    S11: float
    S22: float
    S12p: float
    S12m: float
    S21p: float
    S21m: float
    vectors: np.ndarray

    @property
    def completeness(self):
        """S12p^2 + S21p^2 + 2 S11^2, equal to one for an orthonormal basis."""
        return self.S12p**2 + self.S21p**2 + 2 * self.S11**2


def floquet_hamiltonian(omega0, Omega, g):
    det = omega0 - Omega
    return np.array([[det / 2 - Omega / 2, g], [g, -det / 2 - Omega / 2]])


def _fix_phase(v):
    # real symmetric problem: only the overall sign is free
    k = np.flatnonzero(np.abs(v) > 1e-300)[0]
    return v if v[k] > 0 else -v


def sigma_x_harmonics(vectors):
    """Coefficients of e^{+i Omega t} and e^{-i Omega t} in <phi_k(t)|sigma_x|phi_j(t)>.

    With |phi_j(t)> = (x_j e^{-i Omega t}, y_j):
    <phi_k(t)|sigma_x|phi_j(t)> = conj(x_k) y_j e^{+i Omega t} + conj(y_k) x_j e^{-i Omega t}.
    ``vectors`` holds the eigenvectors as columns.
    """
    x, y = vectors[0], vectors[1]
    plus = np.conj(x)[:, None] * y[None, :]
    minus = np.conj(y)[:, None] * x[None, :]
    return plus, minus


def floquet_diagonalize(omega0, Omega, g):
    """Quasi-energies and sigma_x harmonics of the circularly driven qubit."""
    if not Omega > 0:
        raise DomainError("Omega must be positive")
    if g < 0:
        raise DomainError("g must be non-negative")
    evals, vecs = np.linalg.eigh(floquet_hamiltonian(omega0, Omega, g))
    vecs = np.column_stack([_fix_phase(vecs[:, j]) for j in range(2)])
    plus, minus = sigma_x_harmonics(vecs)
    det = omega0 - Omega
    return CircularFloquet(
        omega0=float(omega0), Omega=float(Omega), g=float(g), Delta_det=float(det),
        Omega_R=float(np.hypot(det, 2 * g)), eps1=float(evals[0]), eps2=float(evals[1]),
        S11=float(plus[0, 0]), S22=float(plus[1, 1]),
        S12p=float(plus[0, 1]), S12m=float(minus[0, 1]),
        S21p=float(plus[1, 0]), S21m=float(minus[1, 0]),
        vectors=vecs,
    )


def circular_terms(cf, hot, cold):
    """Secular rate terms of the circular machine.

    Column 0 is the lower Floquet state.  Every term is ``G_j(y) e^{-i y chi_j}``,
    i.e. it hands the energy ``y`` to bath j.  The diagonal entries hold the
    state-preserving Omega quanta weighted by |S11|^2 and |S22|^2.
    """
    if hot.is_split or cold.is_split:
        raise DomainError("the circular machine uses plain Lorentzian baths")
    W, R = cf.Omega, cf.Omega_R
    s12, s21 = cf.S12p**2, cf.S21p**2
    s11, s22 = cf.S11**2, cf.S22**2
    entries, rates, energies, baths = [], [], [], []
    layout = [
        (_E10, s12, W - R), (_E10, s21, -W - R),
        (_E01, s12, R - W), (_E01, s21, W + R),
        (_E00, s11, W), (_E00, s11, -W),
        (_E11, s22, W), (_E11, s22, -W),
    ]
    for b, bath in ((HOT, hot), (COLD, cold)):
        for entry, weight, y in layout:
            entries.append(entry)
            rates.append(weight * float(bath(y)))
            energies.append(-y)
            baths.append(b)
    return RateTerms.from_lists(entries, rates, energies, baths)


def circular_tilted_generator(cf, hot, cold, chi_h=0.0, chi_c=0.0):
    """L(chi) of the circular machine."""
    return circular_terms(cf, hot, cold).generator(chi_h, chi_c)


def circular_cumulants(cf, hot, cold, method="numeric", step=None):
    """Steady-state cumulants of the circular machine.

    ``method="numeric"`` differentiates the dominant eigenvalue by finite
    differences; ``"exact"`` uses implicit differentiation of the
    characteristic polynomial.
    """
    terms = circular_terms(cf, hot, cold)
    if method == "numeric":
        return numeric_cumulants_from_terms(terms, hot.beta, cold.beta, step)
    if method == "exact":
        return cumulants_from_terms(terms, hot.beta, cold.beta)
    raise DomainError(f"unknown method {method!r}")
