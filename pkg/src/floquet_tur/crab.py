"""CRAB pulse optimization of the TUR ratio.

Coefficients (a_n, b_n) live in the box [-1, 1]^{2N}.  Each restart runs a
bounded Nelder-Mead search from a uniform random start; the best restart
wins, ties going to the lower restart index.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, FloquetTURError, NoFeasiblePulseError
from .fcs import cumulants_analytic
from .metrics import DEAD_ZONE, machine_report, tur_ratios
from .modulation import ModulationSpec, floquet_spectrum

__all__ = [
    "TARGETS",
    "OptimizationConfig",
    "OptimizedPulse",
    "crab_spec",
    "evaluate_objective",
    "optimize_pulse",
    "replay_pulse",
    "with_delta",
]

TARGETS = ("R_h", "R_c", "R_P")


@dataclass(frozen=True)
class OptimizationConfig:
    """Settings of one CRAB optimization at fixed Delta.

    ``delta_index`` only seeds the random streams, so that every point of a
    Delta grid gets its own streams.
    """

    target: str = "R_h"
    Delta: float = 2.0
    N: int = 10
    mu: float = 1.0
    max_iters: int = 2000
    restarts: int = 8
    seed: int = 0
    penalty_large: float = 1e9
    delta_index: int = 0
    simplex_scale: float = 0.3
    xatol: float = 1e-6
    fatol: float = 1e-8

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"target must be one of {TARGETS}, got {self.target!r}")
        if not self.Delta > 0:
            raise DomainError("Delta must be positive")
        if self.N < 1 or self.restarts < 1 or self.max_iters < 1:
            raise DomainError("N, restarts and max_iters must be at least 1")
        if not 0 < self.simplex_scale <= 1:
            raise DomainError("simplex_scale must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class OptimizedPulse:
    coeffs: np.ndarray          # shape (N, 2): rows (a_n, b_n)
    objective_value: float
    cumulants: object
    report: object
    iterations_used: int
    restart_index: int
    Delta: float
    seed: int
    n_evals: int = 0
    history: tuple = field(default=(), repr=False)

    def flat(self):
        """Coefficients as [a_1..a_N, b_1..b_N]."""
        return np.concatenate([self.coeffs[:, 0], self.coeffs[:, 1]])


def crab_spec(coeffs, config, params):
    return ModulationSpec.crab(params.omega0, config.Delta, config.mu, coeffs)


def _target_index(config):
    return TARGETS.index(config.target)


def _evaluate(x, config, params, baths):
    """(objective, cumulants); the cumulants are None for penalized pulses."""
    x = np.clip(x, -1.0, 1.0)
    try:
        spectrum = floquet_spectrum(crab_spec(x, config, params))
        c = cumulants_analytic(spectrum, *baths)
    except FloquetTURError:
        return config.penalty_large, None
    R = tur_ratios(c, params.scale, DEAD_ZONE)[_target_index(config)]
    if not np.isfinite(R):
        return config.penalty_large, None
    return R, c


def evaluate_objective(coeffs, config, params):
    """Target TUR ratio of a CRAB pulse, or ``config.penalty_large`` when the
    target current is inside the dead zone or the spectrum cannot be truncated.

    ``coeffs`` is a flat array [a_1..a_N, b_1..b_N] or N (a_n, b_n) pairs.
    """
    x = _flatten(coeffs, config.N)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("CRAB coefficients must lie in [-1, 1]")
    return _evaluate(x, config, params, params.split_baths())[0]


def _flatten(coeffs, N):
    x = np.asarray(coeffs, dtype=float)
    if x.ndim == 2:
        x = np.concatenate([x[:, 0], x[:, 1]])
    if x.shape != (2 * N,):
        raise DomainError(f"expected {2 * N} coefficients, got shape {x.shape}")
    return x


def _initial_simplex(x0, scale):
    n = len(x0)
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        # step inward when the outward step would leave the box
        step = scale if x0[i] + scale <= 1.0 else -scale
        simplex[i + 1, i] += step
    return simplex


def _restart(config, params, restart):
    rng = np.random.default_rng([config.seed, restart, config.delta_index])
    x0 = rng.uniform(-1.0, 1.0, 2 * config.N)
    baths = params.split_baths()
    history = []

    def f(x):
        return _evaluate(x, config, params, baths)[0]

    def record(intermediate_result):
        history.append(float(intermediate_result.fun))

    history.append(f(x0))
    res = minimize(f, x0, method="Nelder-Mead", bounds=[(-1.0, 1.0)] * len(x0),
                   callback=record,
                   options=dict(maxiter=config.max_iters, xatol=config.xatol,
                                fatol=config.fatol,
                                initial_simplex=_initial_simplex(x0, config.simplex_scale)))
    x = np.clip(res.x, -1.0, 1.0)
    value, c = _evaluate(x, config, params, baths)
    return dict(x=x, value=value, cumulants=c, nit=int(res.nit), nfev=int(res.nfev),
                history=tuple(history), restart=restart)


def _pulse(best, config, params):
    c = best["cumulants"]
    report = machine_report(c, params.beta_h, params.beta_c, params.scale)
    return OptimizedPulse(
        coeffs=np.column_stack([best["x"][:config.N], best["x"][config.N:]]),
        objective_value=float(best["value"]), cumulants=c, report=report,
        iterations_used=best["nit"], restart_index=best["restart"],
        Delta=config.Delta, seed=config.seed, n_evals=best["nfev"], history=best["history"])


def optimize_pulse(config, params, workers=1):
    """Multistart bounded Nelder-Mead minimization of the target TUR ratio.

    Deterministic for a given config: restart r draws its start from
    ``default_rng([seed, r, delta_index])``.

    Raises
    ------
    NoFeasiblePulseError
        If every restart ends on a penalized pulse.
    """
    restarts = range(config.restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_restart, [config] * len(restarts), [params] * len(restarts),
                                 restarts))
    else:
        runs = [_restart(config, params, r) for r in restarts]
    feasible = [r for r in runs if r["cumulants"] is not None]
    if not feasible:
        raise NoFeasiblePulseError(
            f"all {config.restarts} restarts penalized at Delta={config.Delta}")
    # min() keeps the first of equal values, i.e. the lowest restart index
    best = min(feasible, key=lambda r: r["value"])
    return _pulse(best, config, params)


def replay_pulse(coeffs, config, params, restart_index=0):
    """Re-evaluate an archived pulse without optimizing."""
    x = _flatten(coeffs, config.N)
    value, c = _evaluate(x, config, params, params.split_baths())
    if c is None:
        raise NoFeasiblePulseError(f"archived pulse is penalized at Delta={config.Delta}")
    return _pulse(dict(x=x, value=value, cumulants=c, nit=0, nfev=1, history=(),
                       restart=restart_index), config, params)


def with_delta(config, Delta, delta_index):
    return replace(config, Delta=float(Delta), delta_index=int(delta_index))
