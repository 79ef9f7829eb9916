"""Gillespie simulation of the chi = 0 rate equation with per-bath energy counters.

Used as an independent check of the counting-statistics cumulants.  Mean
currents come from the long-time energy per unit time; (co)variances from
batch means of the accumulated energies.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .circular import CircularFloquet, circular_terms
from .errors import AbsorbingStateError, DomainError
from .fcs import COLD, HOT, RateTerms, modulated_terms, _E00, _E01, _E10, _E11
from .modulation import FloquetSpectrum

__all__ = [
    "JumpChannel",
    "SampledCumulants",
    "build_channels",
    "channels_from_terms",
    "generator_from_channels",
    "simulate_counting",
    "compare_with_analytic",
    "Z_PASS",
]

Z_PASS = 4.0
_CHUNK = 1 << 20
_STATES = ("lower", "upper")
_ENTRY_MOVES = {_E00: (0, 0), _E10: (0, 1), _E01: (1, 0), _E11: (1, 1)}


@dataclass(frozen=True)
class JumpChannel:
    """One jump process; ``quantum`` is the energy handed to ``bath`` per jump.

    States are 0 and 1 in the column order of the tilted generator.
    """

    from_state: int
    to_state: int
    bath: int
    quantum: float
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise DomainError("channel rate must be non-negative")


def channels_from_terms(terms: RateTerms):
    out = []
    for e, r, en, b in zip(terms.entry, terms.rate, terms.energy, terms.bath):
        src, dst = _ENTRY_MOVES[int(e)]
        out.append(JumpChannel(src, dst, int(b), float(-en), float(r)))
    return out


def build_channels(machine, hot, cold):
    """Jump channels of a modulated (FloquetSpectrum) or circular machine.

    Channels with zero rate are dropped, so e.g. the q = 0 sideband at
    exactly omega0 contributes nothing with split baths.
    """
    if isinstance(machine, FloquetSpectrum):
        return channels_from_terms(modulated_terms(machine, hot, cold))
    if isinstance(machine, CircularFloquet):
        return channels_from_terms(circular_terms(machine, hot, cold))
    raise DomainError(f"cannot build channels for {type(machine).__name__}")


def generator_from_channels(channels):
    """The chi = 0 generator rebuilt from channels (2x2 real matrix)."""
    L = np.zeros((2, 2))
    for ch in channels:
        if ch.from_state != ch.to_state:
            L[ch.to_state, ch.from_state] += ch.rate
            L[ch.from_state, ch.from_state] -= ch.rate
    return L


@dataclass(frozen=True)
class SampledCumulants:
    J_h: float
    J_c: float
    var_h: float
    var_c: float
    cov_hc: float
    stderr: dict
    n_jumps: int
    seed: int
    total_time: float
    n_batches: int
    batches: dict = field(default_factory=dict, repr=False)


@njit(cache=True)
def _run_chunk(state, u, cum, offsets, counts, to_state, bath, gain, n_skip,
               batch_len, batch_start, batch_E, batch_T):
    """Advance the trajectory by len(u)//2 jumps.

    ``cum`` holds per-state cumulative rates (flattened by ``offsets``).
    Returns the new state and the global jump counter.
    """
    n = u.shape[0] // 2
    jump = batch_start
    for k in range(n):
        start = offsets[state]
        m = counts[state]
        total = cum[start + m - 1]
        dt = -np.log(1.0 - u[2 * k]) / total
        target = u[2 * k + 1] * total
        # linear search; a state has only a handful of channels
        j = 0
        while j < m - 1 and cum[start + j] <= target:
            j += 1
        idx = start + j
        if jump >= n_skip:
            b = (jump - n_skip) // batch_len
            if b < batch_T.shape[0]:
                batch_T[b] += dt
                batch_E[b, bath[idx]] += gain[idx]
        state = to_state[idx]
        jump += 1
    return state, jump


def _tables(channels):
    by_state = [[c for c in channels if c.from_state == s and c.rate > 0] for s in (0, 1)]
    for s, chans in enumerate(by_state):
        if not chans:
            raise AbsorbingStateError(f"state {_STATES[s]} has zero escape rate")
    flat = by_state[0] + by_state[1]
    cum = np.concatenate([np.cumsum([c.rate for c in chans]) for chans in by_state])
    offsets = np.array([0, len(by_state[0])], dtype=np.int64)
    counts = np.array([len(by_state[0]), len(by_state[1])], dtype=np.int64)
    to_state = np.array([c.to_state for c in flat], dtype=np.int64)
    bath = np.array([c.bath for c in flat], dtype=np.int64)
    # counters track energy entering the system
    gain = np.array([-c.quantum for c in flat])
    return cum, offsets, counts, to_state, bath, gain


def simulate_counting(channels, n_jumps, burn_in=1000, seed=0, n_batches=50, stream=0):
    """Single-trajectory estimate of currents and their (co)variances.

    Uniforms come from ``numpy.random.default_rng([seed, stream])`` (PCG64).
    After ``burn_in`` jumps the trajectory is cut into ``n_batches`` batches
    of ``n_jumps // n_batches`` jumps.  With batch energies E_b and durations
    T_b, J = sum E / sum T and var = B/(B-1) sum (E_b - J T_b)^2 / sum T.
    """
    if n_batches < 2:
        raise DomainError("need at least two batches")
    if n_jumps < n_batches:
        raise DomainError("n_jumps must be at least n_batches")
    cum, offsets, counts, to_state, bath, gain = _tables(channels)
    batch_len = n_jumps // n_batches
    total = burn_in + batch_len * n_batches
    batch_E = np.zeros((n_batches, 2))
    batch_T = np.zeros(n_batches)
    rng = np.random.default_rng([seed, stream])
    state, done = 0, 0
    while done < total:
        m = min(_CHUNK, total - done)
        u = rng.random(2 * m)
        state, done = _run_chunk(state, u, cum, offsets, counts, to_state, bath, gain,
                                 burn_in, batch_len, done, batch_E, batch_T)
    return _batch_estimates(batch_E, batch_T, n_batches * batch_len, seed)


def _batch_estimates(E, T, n_jumps, seed):
    B = len(T)
    T_tot = T.sum()
    J = E.sum(axis=0) / T_tot
    r = E - np.outer(T, J)
    scale = B / ((B - 1) * T_tot)
    var = (r**2).sum(axis=0) * scale
    cov = float((r[:, HOT] * r[:, COLD]).sum() * scale)
    stderr = {
        "J_h": float(np.sqrt(var[HOT] / T_tot)),
        "J_c": float(np.sqrt(var[COLD] / T_tot)),
        "var_h": float(var[HOT] * np.sqrt(2.0 / (B - 1))),
        "var_c": float(var[COLD] * np.sqrt(2.0 / (B - 1))),
        "cov_hc": float(np.sqrt((var[HOT] * var[COLD] + cov**2) / (B - 1))),
    }
    return SampledCumulants(float(J[HOT]), float(J[COLD]), float(var[HOT]), float(var[COLD]),
                            cov, stderr, int(n_jumps), seed, float(T_tot), B,
                            batches=dict(E=E, T=T))


def compare_with_analytic(sampled, analytic, keys=("J_h", "J_c", "var_h", "var_c", "cov_hc"),
                          atol=0.0):
    """z = (sampled - analytic) / stderr for each requested entry.

    The sampled covariance estimates the mixed second cumulant, so it is
    compared against ``analytic.mixed_hc``.  A zero stderr (e.g. a counter
    that never fluctuates) gives z = 0 when the values agree to ``atol``
    and +-inf otherwise; ``atol`` is a float or a dict keyed like ``keys``.
    """
    ref = {"J_h": analytic.J_h, "J_c": analytic.J_c, "var_h": analytic.var_h,
           "var_c": analytic.var_c, "cov_hc": analytic.mixed_hc}
    out = {}
    for k in keys:
        diff = getattr(sampled, k) - float(ref[k])
        err = sampled.stderr[k]
        tol = atol.get(k, 0.0) if isinstance(atol, dict) else atol
        if err > 0:
            out[k] = diff / err
        else:
            out[k] = 0.0 if abs(diff) <= tol else float(np.copysign(np.inf, diff))
    return out
