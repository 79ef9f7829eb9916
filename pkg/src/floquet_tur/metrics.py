"""Figures of merit built on a :class:`~floquet_tur.fcs.CumulantSet`.

All functions accept float or mpmath-valued cumulant sets.  mpmath sets are
processed at ``fcs.MP_DIGITS`` digits and the results are returned as floats.
"""
from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass

import mpmath

from .errors import NotApplicableError, OrderingError
from .fcs import MP_DIGITS

__all__ = [
    "REGIMES",
    "DEAD_ZONE",
    "MachineReport",
    "delta_critical",
    "carnot_bounds",
    "classify_regime",
    "tur_ratios",
    "efficiency_fluctuation_ratios",
    "relative_fluctuation_gap",
    "machine_report",
]

REGIMES = ("engine", "refrigerator", "accelerator", "other")
# currents below DEAD_ZONE * gamma0 * omega0 count as zero
DEAD_ZONE = 1e-12
NAN = float("nan")


def _precision(c):
    return mpmath.workdps(MP_DIGITS) if isinstance(c.J_h, mpmath.mpf) else nullcontext()


def _floor(scale, rel_floor):
    return 0.0 if scale is None else rel_floor * abs(scale)


def delta_critical(omega0, beta_h, beta_c):
    """Modulation frequency omega0 (T_h - T_c)/(T_h + T_c) where all currents vanish."""
    if not beta_h < beta_c:
        raise OrderingError(f"need beta_h < beta_c, got {beta_h} >= {beta_c}")
    T_h, T_c = 1.0 / beta_h, 1.0 / beta_c
    return omega0 * (T_h - T_c) / (T_h + T_c)


def carnot_bounds(beta_h, beta_c):
    """(eta_C^2, eta_R^2) with eta_C = 1 - beta_h/beta_c and eta_R = (1 - eta_C)/eta_C."""
    if not beta_h < beta_c:
        raise OrderingError(f"need beta_h < beta_c, got {beta_h} >= {beta_c}")
    eta_C = 1.0 - beta_h / beta_c
    return eta_C**2, ((1.0 - eta_C) / eta_C) ** 2


def classify_regime(c, scale=None, rel_floor=DEAD_ZONE):
    """engine / refrigerator / accelerator / other from the signs of J_h, J_c, P.

    ``scale`` is the natural current scale gamma0*omega0; currents smaller
    than ``rel_floor * scale`` are zero and push the point into "other".
    """
    floor = _floor(scale, rel_floor)
    signs = []
    for x in (c.J_h, c.J_c, c.P):
        x = float(x)
        signs.append(0 if abs(x) <= floor else (1 if x > 0 else -1))
    return {
        (1, -1, -1): "engine",
        (-1, 1, 1): "refrigerator",
        (1, -1, 1): "accelerator",
    }.get(tuple(signs), "other")


def tur_ratios(c, scale=None, rel_floor=DEAD_ZONE):
    """(R_h, R_c, R_P) with R = S_dot var / mean^2.

    A component whose mean is zero (or inside the dead zone when ``scale``
    is given) is NaN; the other components are unaffected.
    """
    floor = _floor(scale, rel_floor)
    out = []
    with _precision(c):
        for mean, var in ((c.J_h, c.var_h), (c.J_c, c.var_c), (c.P, c.var_P)):
            if mean == 0 or abs(float(mean)) <= floor:
                out.append(NAN)
            else:
                out.append(float(c.S_dot * var / mean**2))
    return tuple(out)


def efficiency_fluctuation_ratios(c, regime, beta_h, beta_c):
    """eta^(2), <eta>^2 and the Carnot-type bounds for an engine or refrigerator.

    engine: eta2 = var_P / var_h, <eta>^2 = P^2 / J_h^2.
    refrigerator: eta2 = var_c / var_P, <eta>^2 = J_c^2 / P^2.
    """
    eta_C_sq, eta_R_sq = carnot_bounds(beta_h, beta_c)
    with _precision(c):
        if regime == "engine":
            eta2, mean_sq = c.var_P / c.var_h, c.P**2 / c.J_h**2
        elif regime == "refrigerator":
            eta2, mean_sq = c.var_c / c.var_P, c.J_c**2 / c.P**2
        else:
            raise NotApplicableError(f"no efficiency for regime {regime!r}")
        # the gap matters near the crossover, where both sides approach 1
        gap = float(eta2 - mean_sq)
    return dict(eta2=float(eta2), eta_mean_sq=float(mean_sq), eta_C_sq=eta_C_sq,
                eta_R_sq=eta_R_sq, eta_gap=gap)


def relative_fluctuation_gap(c, omega0=None, Delta=None):
    """D = var_P/P^2 - var_h/J_h^2, its three-sideband value and D * S_dot.

    Returns ``(D, D_analytic, D_S_dot)``.  ``D_analytic = (omega0^2/Delta^2 - 1)/2``
    is NaN unless both ``omega0`` and ``Delta`` are given; D is NaN when a
    current vanishes.
    """
    D_an = NAN if omega0 is None or Delta is None else 0.5 * (omega0**2 / Delta**2 - 1.0)
    if c.P == 0 or c.J_h == 0:
        return NAN, D_an, NAN
    with _precision(c):
        D = c.var_P / c.P**2 - c.var_h / c.J_h**2
        return float(D), D_an, float(D * c.S_dot)


@dataclass(frozen=True)
class MachineReport:
    regime: str
    R_h: float
    R_c: float
    R_P: float
    eta2: float
    eta_mean_sq: float
    eta_C_sq: float
    eta_R_sq: float
    eta_gap: float
    D: float
    D_analytic: float
    D_times_Sdot: float

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @property
    def engine_lower_bound_ok(self):
        """eta2 >= <eta>^2 (engine); None outside the engine regime."""
        return None if self.regime != "engine" else self.eta_gap >= 0

    @property
    def refrigerator_upper_bound_ok(self):
        """eta2 <= eta_R^2 (refrigerator); None outside the refrigerator regime."""
        return None if self.regime != "refrigerator" else self.eta2 <= self.eta_R_sq


def machine_report(c, beta_h, beta_c, scale=None, omega0=None, Delta=None,
                   rel_floor=DEAD_ZONE):
    """Regime, TUR ratios, efficiency ratios and fluctuation gap in one record."""
    regime = classify_regime(c, scale, rel_floor)
    R_h, R_c, R_P = tur_ratios(c, scale, rel_floor)
    eta_C_sq, eta_R_sq = carnot_bounds(beta_h, beta_c) if beta_h < beta_c else (NAN, NAN)
    eta2 = eta_mean_sq = eta_gap = NAN
    if regime in ("engine", "refrigerator"):
        eff = efficiency_fluctuation_ratios(c, regime, beta_h, beta_c)
        eta2, eta_mean_sq, eta_gap = eff["eta2"], eff["eta_mean_sq"], eff["eta_gap"]
    if regime == "other":
        D, D_an, D_S = NAN, relative_fluctuation_gap(c, omega0, Delta)[1], NAN
    else:
        D, D_an, D_S = relative_fluctuation_gap(c, omega0, Delta)
    return MachineReport(regime, R_h, R_c, R_P, eta2, eta_mean_sq, eta_C_sq, eta_R_sq,
                         eta_gap, D, D_an, D_S)
