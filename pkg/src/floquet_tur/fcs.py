"""Full counting statistics of the two-level machine.

The counting-field master equation for the populations reads
``d/dt rho(chi) = L(chi) rho(chi)`` with a 2x2 tilted generator.  Every
entry of ``L`` is a constant plus a sum of jump terms
``rate * exp(i chi_j * (-energy))`` where ``energy`` is the energy handed
*into the system* by bath ``j``.  Writing ``s_j = i chi_j`` the dominant
eigenvalue ``lambda(s)`` is the scaled cumulant generating function of the
energies drawn from the baths; its first and second derivatives at ``s = 0``
give mean currents and their (co)variances.

Index conventions of the modulated machine:
column 0 empties through emission processes (it is the upper level) and
column 1 through absorption processes.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .bath import spectral_density_mp
from .errors import BranchTrackingError, DegenerateSteadyStateError, DomainError

__all__ = [
    "HOT",
    "COLD",
    "RateTerms",
    "TiltedGenerator",
    "CumulantSet",
    "modulated_terms",
    "tilted_generator",
    "dominant_eigenvalue",
    "eigenvalue_path",
    "scgf",
    "steady_state_ratio",
    "cumulants_analytic",
    "cumulants_from_terms",
    "cumulants_numeric",
    "numeric_cumulants_from_terms",
    "cumulants_sinusoidal_closed_form",
]

# digits used whenever an extended-precision evaluation is requested
MP_DIGITS = 50
# dimensionless finite-difference tilt; the roundoff of lambda(s) comes from
# cancellation inside det L(s) and scales like 1/h**2, so smaller is worse
DEFAULT_STEP = 3e-3

HOT, COLD = 0, 1
# flat index of (row, col) entries
_E00, _E01, _E10, _E11 = 0, 1, 2, 3


@dataclass(frozen=True)
class TiltedGenerator:
    """Entries of L(chi) at counting fields (chi_h, chi_c).

    ``det`` carries an accurately evaluated determinant when the generator
    was built from :class:`RateTerms`; it is recomputed otherwise.
    """

    l00: complex
    l01: complex
    l10: complex
    l11: complex
    chi_h: complex = 0.0
    chi_c: complex = 0.0
    det: complex | None = None

    def matrix(self):
        return np.array([[self.l00, self.l01], [self.l10, self.l11]], dtype=complex)

    @property
    def column_sums(self):
        return self.l00 + self.l10, self.l01 + self.l11


@dataclass(frozen=True, eq=False)
class RateTerms:
    """Tilted generator in jump-term form.

    Entry ``e`` (flattened row-major) equals
    ``value0[e] + sum_k rate_k * expm1(energy_k * s[bath_k])`` over the
    terms with ``entry_k == e``, where ``s = i*chi``.  Off-diagonal terms
    move population; diagonal terms are state-preserving jumps.
    """

    value0: np.ndarray
    entry: np.ndarray
    rate: np.ndarray
    energy: np.ndarray
    bath: np.ndarray

    @classmethod
    def from_lists(cls, entry, rate, energy, bath):
        entry = np.asarray(entry, dtype=int)
        rate = np.asarray(rate, dtype=float)
        energy = np.asarray(energy, dtype=float)
        bath = np.asarray(bath, dtype=int)
        keep = rate > 0
        entry, rate, energy, bath = entry[keep], rate[keep], energy[keep], bath[keep]
        value0 = np.zeros(4)
        off10 = rate[entry == _E10].sum()
        off01 = rate[entry == _E01].sum()
        # escape rates equal the outgoing off-diagonal sums exactly
        value0[_E10], value0[_E00] = off10, -off10
        value0[_E01], value0[_E11] = off01, -off01
        return cls(value0, entry, rate, energy, bath)

    def __len__(self):
        return len(self.rate)

    def deviations(self, s_h, s_c):
        """Per-entry ``L(s) - L(0)``, accurate for small tilts."""
        s = np.array([s_h, s_c], dtype=complex)
        contrib = self.rate * np.expm1(self.energy * s[self.bath])
        out = np.zeros(4, dtype=complex)
        np.add.at(out, self.entry, contrib)
        return out

    def generator(self, chi_h=0.0, chi_c=0.0):
        d = self.deviations(1j * chi_h, 1j * chi_c)
        v = self.value0
        l = v + d
        # v00*v11 - v01*v10 vanishes identically, so keep only the deviation part
        det = (-v[_E10] * (d[_E11] + d[_E01]) - v[_E01] * (d[_E00] + d[_E10])
               + d[_E00] * d[_E11] - d[_E01] * d[_E10])
        return TiltedGenerator(l[0], l[1], l[2], l[3], chi_h, chi_c, det)

    def derivative(self, entry, n_h=0, n_c=0):
        """d^(n_h+n_c) L_entry / ds_h^n_h ds_c^n_c at s = 0."""
        sel = self.entry == entry
        if n_h and n_c:
            return 0.0
        if n_h == 0 and n_c == 0:
            return self.value0[entry]
        b, n = (HOT, n_h) if n_h else (COLD, n_c)
        sel &= self.bath == b
        return float(np.sum(self.rate[sel] * self.energy[sel] ** n))

    @property
    def energy_scale(self):
        return float(np.max(np.abs(self.energy))) if len(self) else 1.0


def modulated_terms(spectrum, hot, cold):
    """Jump terms of a modulated qubit coupled to ``hot`` and ``cold``.

    For each sideband q and bath j the emission term has rate
    ``P_q G_j(omega_q)`` and the absorption term ``P_q G_j(-omega_q)``;
    ``omega_q`` may have either sign because G is defined on the whole line.
    """
    if len(spectrum) == 0:
        raise DomainError("empty Floquet spectrum")
    w = spectrum.omega_q
    P = spectrum.P
    entries, rates, energies, baths = [], [], [], []
    for b, bath in ((HOT, hot), (COLD, cold)):
        entries += [np.full(w.shape, _E10), np.full(w.shape, _E01)]
        rates += [P * bath(w), P * bath(-w)]
        energies += [-w, w]
        baths += [np.full(w.shape, b)] * 2
    return RateTerms.from_lists(np.concatenate(entries), np.concatenate(rates),
                                np.concatenate(energies), np.concatenate(baths))


def tilted_generator(spectrum, hot, cold, chi_h=0.0, chi_c=0.0):
    """L(chi) for the modulated machine."""
    return modulated_terms(spectrum, hot, cold).generator(chi_h, chi_c)


def dominant_eigenvalue(gen, previous=None):
    """Branch of the eigenvalue of ``gen`` that vanishes at chi = 0.

    Without ``previous`` the principal square root is used, which selects
    the right branch near chi = 0 and for every real tilt ``s = i chi``.
    With ``previous`` (a value at a nearby chi) the branch closest to it is
    returned.
    """
    tr = gen.l00 + gen.l11
    det = gen.det if gen.det is not None else gen.l00 * gen.l11 - gen.l01 * gen.l10
    root = np.sqrt(complex((gen.l00 - gen.l11) ** 2 + 4 * gen.l01 * gen.l10))
    plus, minus = (tr + root) / 2, (tr - root) / 2
    # recover the small root from the product of the roots to avoid cancellation
    if abs(plus) < abs(minus):
        plus = det / minus
    elif plus != 0:
        minus = det / plus
    if previous is None:
        return complex(plus)
    d_plus, d_minus = abs(plus - previous), abs(minus - previous)
    if plus != minus and abs(d_plus - d_minus) <= 1e-12 * max(abs(plus), abs(minus)):
        raise BranchTrackingError("ambiguous eigenvalue continuation", (gen.chi_h, gen.chi_c))
    return complex(plus if d_plus <= d_minus else minus)


def eigenvalue_path(terms, chi_h, chi_c):
    """Dominant eigenvalue tracked continuously along a path of counting fields.

    The path must start at (or next to) chi = 0.
    """
    chi_h = np.broadcast_to(np.asarray(chi_h, dtype=complex), np.shape(chi_c) or np.shape(chi_h))
    chi_c = np.broadcast_to(np.asarray(chi_c, dtype=complex), chi_h.shape)
    out = np.empty(chi_h.shape, dtype=complex)
    prev = None
    for k, (ch, cc) in enumerate(zip(chi_h, chi_c)):
        prev = dominant_eigenvalue(terms.generator(ch, cc), prev)
        out[k] = prev
    return out


def scgf(terms, s_h, s_c):
    """lambda(s) at real tilts s_j = i chi_j."""
    return dominant_eigenvalue(terms.generator(-1j * s_h, -1j * s_c)).real


def steady_state_ratio(spectrum, hot, cold):
    """Population ratio w = p_upper / p_lower = l11 / l00 at chi = 0."""
    gen = tilted_generator(spectrum, hot, cold)
    l00, l11 = gen.l00.real, gen.l11.real
    if l00 == 0:
        raise DegenerateSteadyStateError("no emission channel: l00 = 0")
    return l11 / l00


@dataclass(frozen=True)
class CumulantSet:
    """Steady-state current statistics; positive currents enter the system.

    ``mixed_hc`` is the mixed second derivative of the cumulant generating
    function, i.e. <J_h J_c> in the moment notation.  ``cov_hc`` follows
    Cov(J_h, J_c) = <J_h J_c> - <J_h><J_c> and ``var_P`` is assembled from
    it as var_h + var_c + 2 cov_hc.
    """

    J_h: float
    J_c: float
    P: float
    var_h: float
    var_c: float
    cov_hc: float
    var_P: float
    S_dot: float
    mixed_hc: float

    @classmethod
    def assemble(cls, J_h, J_c, var_h, var_c, mixed_hc, beta_h, beta_c, exact=False):
        """Build the set from the SCGF derivatives.

        With ``exact=True`` the inputs are kept as given (e.g. ``mpmath.mpf``)
        instead of being cast to float.
        """
        cast = (lambda x: x) if exact else float
        J_h, J_c, var_h, var_c, mixed_hc = map(cast, (J_h, J_c, var_h, var_c, mixed_hc))
        cov = mixed_hc - J_h * J_c
        return cls(J_h=J_h, J_c=J_c, P=-J_h - J_c, var_h=var_h, var_c=var_c,
                   cov_hc=cov, var_P=var_h + var_c + 2 * cov,
                   S_dot=-beta_h * J_h - beta_c * J_c, mixed_hc=mixed_hc)

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    def to_float(self):
        return CumulantSet(**{k: float(v) for k, v in self.as_dict().items()})


def _channel_rates(spectrum, hot, cold):
    w = spectrum.omega_q
    P = spectrum.P
    emit = np.stack([P * hot(w), P * cold(w)])
    absorb = np.stack([P * hot(-w), P * cold(-w)])
    return w, emit, absorb


def cumulants_analytic(spectrum, hot, cold, precision=None):
    """Closed-form cumulants of the modulated machine.

    Sums run over signed sideband frequencies with
    ``w = sum P G(-omega_q) / sum P G(omega_q)``:

        J_j   = sum_q omega_q (A_qj - w E_qj) / (1 + w)
        var_j = sum_q omega_q^2 (A_qj + w E_qj) / (1 + w)
                - 2 [J_j^2 + (sum_q omega_q A_qj)(sum_q omega_q E_qj)] / K
        <J_h J_c> = -[(sum omega A_h)(sum omega E_c) + (sum omega A_c)(sum omega E_h)
                      + 2 J_h J_c] / K

    with emission rates ``E_qj = P_q G_j(omega_q)``, absorption rates
    ``A_qj = P_q G_j(-omega_q)`` and total rate ``K = sum (E + A)``.

    ``precision`` (decimal digits) switches to mpmath arithmetic and returns
    a set of ``mpf`` values.  Ratios such as var/J**2 are ~1e10 or larger
    near the crossover, so differences of them need it.
    """
    if precision is not None:
        return _cumulants_analytic_mp(spectrum, hot, cold, int(precision))
    w, emit, absorb = _channel_rates(spectrum, hot, cold)
    a, b = emit.sum(), absorb.sum()
    if a == 0:
        raise DegenerateSteadyStateError("no emission channel: l00 = 0")
    ratio = b / a
    K = a + b
    J = (absorb - ratio * emit) @ w / (1 + ratio)
    first_abs = absorb @ w
    first_emit = emit @ w
    var = ((absorb + ratio * emit) @ w**2 / (1 + ratio)
           - 2 * (J**2 + first_abs * first_emit) / K)
    mixed = -(first_abs[HOT] * first_emit[COLD] + first_abs[COLD] * first_emit[HOT]
              + 2 * J[HOT] * J[COLD]) / K
    return CumulantSet.assemble(J[HOT], J[COLD], var[HOT], var[COLD], mixed, hot.beta, cold.beta)


def _cumulants_analytic_mp(spectrum, hot, cold, dps):
    with mpmath.workdps(dps):
        w = [spectrum.omega_bar + int(q) * mpmath.mpf(spectrum.Delta) for q in spectrum.q]
        P = [mpmath.mpf(float(p)) for p in spectrum.P]
        emit = [[p * spectral_density_mp(b, x) for p, x in zip(P, w)] for b in (hot, cold)]
        absorb = [[p * spectral_density_mp(b, -x) for p, x in zip(P, w)] for b in (hot, cold)]
        a = mpmath.fsum(emit[0] + emit[1])
        b = mpmath.fsum(absorb[0] + absorb[1])
        if a == 0:
            raise DegenerateSteadyStateError("no emission channel: l00 = 0")
        ratio, K = b / a, a + b

        def dot(x, n=1):
            return mpmath.fsum(r * om**n for r, om in zip(x, w))

        J = [(dot(absorb[j]) - ratio * dot(emit[j])) / (1 + ratio) for j in (HOT, COLD)]
        var = [(dot(absorb[j], 2) + ratio * dot(emit[j], 2)) / (1 + ratio)
               - 2 * (J[j] ** 2 + dot(absorb[j]) * dot(emit[j])) / K for j in (HOT, COLD)]
        mixed = -(dot(absorb[HOT]) * dot(emit[COLD]) + dot(absorb[COLD]) * dot(emit[HOT])
                  + 2 * J[HOT] * J[COLD]) / K
        return CumulantSet.assemble(J[HOT], J[COLD], var[HOT], var[COLD], mixed,
                                    mpmath.mpf(hot.beta), mpmath.mpf(cold.beta), exact=True)


def cumulants_from_terms(terms, beta_h, beta_c):
    """Exact first and second derivatives of lambda(s) by implicit differentiation.

    Works for any generator in :class:`RateTerms` form, including
    s-dependent diagonals.  With F(lam, s) = det(lam - L(s)) = 0:
    lam_i = -F_i / F_lam and
    lam_ij = -(F_ij + F_lam,i lam_j + F_lam,j lam_i + 2 lam_i lam_j) / F_lam.
    """
    d = terms.derivative
    d0, u, v, d1 = (terms.value0[e] for e in range(4))
    F_lam = -(d0 + d1)
    if F_lam == 0:
        raise DegenerateSteadyStateError("generator vanishes at chi = 0")
    grad = {}
    for i, key in ((HOT, "h"), (COLD, "c")):
        nh, nc = (1, 0) if i == HOT else (0, 1)
        d0_i, u_i, v_i, d1_i = (d(e, nh, nc) for e in range(4))
        F_i = d0_i * d1 + d1_i * d0 - u_i * v - u * v_i
        grad[key] = (-F_i / F_lam, (d0_i, u_i, v_i, d1_i))

    def second(ki, kj, nh, nc):
        lam_i, (d0_i, u_i, v_i, d1_i) = grad[ki]
        lam_j, (d0_j, u_j, v_j, d1_j) = grad[kj]
        d0_ij, u_ij, v_ij, d1_ij = (d(e, nh, nc) for e in range(4))
        F_ij = (d0_ij * d1 + d1_ij * d0 + d0_i * d1_j + d1_i * d0_j
                - u_ij * v - u_i * v_j - u_j * v_i - u * v_ij)
        F_lam_i = -(d0_i + d1_i)
        F_lam_j = -(d0_j + d1_j)
        return -(F_ij + F_lam_i * lam_j + F_lam_j * lam_i + 2 * lam_i * lam_j) / F_lam

    var_h = second("h", "h", 2, 0)
    var_c = second("c", "c", 0, 2)
    mixed = second("h", "c", 1, 1)
    return CumulantSet.assemble(grad["h"][0], grad["c"][0], var_h, var_c, mixed, beta_h, beta_c)


def _richardson(f, h):
    return (4 * f(h / 2) - f(h)) / 3


def numeric_cumulants_from_terms(terms, beta_h, beta_c, step=None):
    """Cumulants by central finite differences of lambda(s).

    The default step is ``DEFAULT_STEP`` divided by the largest energy
    quantum.  One Richardson halving is applied to every stencil; the mixed
    derivative uses the four-point cross stencil.
    """
    h0 = DEFAULT_STEP / terms.energy_scale if step is None else float(step)
    if not h0 > 0:
        raise DomainError("finite-difference step must be positive")

    def lam(sh, sc):
        return scgf(terms, sh, sc)

    lam0 = lam(0.0, 0.0)

    def first(axis):
        def f(h):
            e = (h, 0.0) if axis == HOT else (0.0, h)
            return (lam(*e) - lam(-e[0], -e[1])) / (2 * h)
        return _richardson(f, h0)

    def second(axis):
        def f(h):
            e = (h, 0.0) if axis == HOT else (0.0, h)
            return (lam(*e) - 2 * lam0 + lam(-e[0], -e[1])) / h**2
        return _richardson(f, h0)

    def mixed(h):
        return (lam(h, h) - lam(h, -h) - lam(-h, h) + lam(-h, -h)) / (4 * h**2)

    return CumulantSet.assemble(first(HOT), first(COLD), second(HOT), second(COLD),
                                _richardson(mixed, h0), beta_h, beta_c)


def cumulants_numeric(spectrum, hot, cold, step=None):
    """Finite-difference counterpart of :func:`cumulants_analytic`."""
    return numeric_cumulants_from_terms(modulated_terms(spectrum, hot, cold),
                                        hot.beta, cold.beta, step)


def cumulants_sinusoidal_closed_form(omega0, lam, Delta, hot, cold):
    """Explicit three-sideband formulas for weak sinusoidal driving.

    Only the sidebands omega0 +- Delta carry current: the hot bath couples
    at omega0 + Delta, the cold bath at omega0 - Delta, each with weight
    lam**2/4.
    """
    wp, wm = omega0 + Delta, omega0 - Delta
    gh, gc = hot(wp), cold(wm)
    eh, ec = np.exp(-hot.beta * wp), np.exp(-cold.beta * wm)
    p = lam**2 / 4
    den = gh * (1 + eh) + gc * (1 + ec)
    bracket = ec - eh
    J_h = -p * wp * gh * gc * bracket / den
    # cold current flows opposite to the hot one: J_c = -(omega0 - Delta)/(omega0 + Delta) J_h
    J_c = p * wm * gh * gc * bracket / den
    var_h = (p * wp**2 * gh * (2 * eh * gh + gc * (ec + eh)) / den
             - 2 * p * (eh * wp**2 * gh**2 + J_h**2 / p**2) / den)
    var_c = (p * wm**2 * gc * (2 * ec * gc + gh * (ec + eh)) / den
             - 2 * p * (ec * wm**2 * gc**2 + J_c**2 / p**2) / den)
    mixed = -p * (wp * wm * gh * gc * (eh + ec) + 2 * J_h * J_c / p**2) / den
    return CumulantSet.assemble(J_h, J_c, var_h, var_c, mixed, hot.beta, cold.beta)
