import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from floquet_tur.bath import MachineParams
from floquet_tur.circular import (circular_cumulants, circular_terms, circular_tilted_generator,
                                  floquet_diagonalize, floquet_hamiltonian)
from floquet_tur.errors import DomainError

from conftest import CIRCULAR

OM, BH, BC, G = (CIRCULAR[k] for k in ("omega0", "beta_h", "beta_c", "g"))
HOT, COLD = MachineParams(OM, BH, BC).plain_baths()
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.diag([1.0, -1.0])


def harmonics_by_fft(cf, M=64):
    """Fourier coefficients of <phi_k(t)|sigma_x|phi_j(t)> from explicit time samples."""
    W = cf.Omega
    t = np.arange(M) * (2 * np.pi / W) / M
    series = np.empty((M, 2, 2), dtype=complex)
    for n, tn in enumerate(t):
        P = expm(-1j * W * tn * (SZ + np.eye(2)) / 2)
        phi = P @ cf.vectors
        series[n] = phi.conj().T @ SX @ phi
    c = np.fft.fft(series, axis=0) / M
    # fft applies e^{-2 pi i m n / M}: e^{+i W t} lands in bin +1, e^{-i W t} in bin -1
    return c[1], c[-1], c


def test_rabi_frequency():
    cf = floquet_diagonalize(25.0, 20.0, 0.02)
    assert cf.Omega_R == pytest.approx(np.sqrt(25 + 0.0016), rel=1e-14)
    assert cf.Omega_R == pytest.approx(5.00016, abs=1e-5)


@pytest.mark.parametrize("W, g", [(20.0, 0.02), (7.0, 1.3), (30.0, 0.5)])
def test_harmonics_against_fft(W, g):
    cf = floquet_diagonalize(OM, W, g)
    plus, minus, c = harmonics_by_fft(cf)
    assert np.allclose([cf.S11, cf.S22, cf.S12p, cf.S21p], [plus[0, 0], plus[1, 1], plus[0, 1],
                                                            plus[1, 0]], atol=1e-13)
    assert np.allclose([cf.S12m, cf.S21m], [minus[0, 1], minus[1, 0]], atol=1e-13)
    # only the two harmonics +-1 are present
    rest = np.delete(c, [1, len(c) - 1], axis=0)
    assert np.max(np.abs(rest)) < 1e-13


def test_undriven_limit():
    cf = floquet_diagonalize(OM, 20.0, 0.0)
    assert cf.S11 == cf.S22 == 0.0
    assert sorted([abs(cf.S12p), abs(cf.S21p)]) == [0.0, 1.0]
    assert cf.Omega_R == pytest.approx(abs(cf.Delta_det))
    terms = circular_terms(cf, HOT, COLD)
    # zero-rate terms are dropped, so no state-preserving Omega quanta remain
    assert not np.isin(terms.entry, [0, 3]).any()


@settings(max_examples=50, deadline=None)
@given(st.floats(1, 50), st.floats(0.05, 60), st.floats(0, 5))
def test_spectrum_properties(omega0, W, g):
    cf = floquet_diagonalize(omega0, W, g)
    ref = np.linalg.eigvalsh(floquet_hamiltonian(omega0, W, g))
    assert cf.eps2 - cf.eps1 == pytest.approx(ref[1] - ref[0], abs=1e-12 * max(1, omega0))
    assert cf.eps2 - cf.eps1 == pytest.approx(cf.Omega_R, abs=1e-12 * max(1, omega0))
    assert cf.Omega_R >= abs(cf.Delta_det) and cf.Omega_R >= 2 * g
    assert cf.completeness == pytest.approx(1.0, abs=1e-12)
    # |S22| = |S11|, so the shorthand equals the explicit sum over one harmonic
    explicit = cf.S11**2 + cf.S22**2 + cf.S12p**2 + cf.S21p**2
    assert explicit == pytest.approx(cf.completeness, abs=1e-12)


@pytest.mark.parametrize("W", [2.0, 20.0, 23.9])
def test_trace_preservation(W):
    g = circular_tilted_generator(floquet_diagonalize(OM, W, G), HOT, COLD)
    assert max(map(abs, g.column_sums)) <= 1e-14 * abs(g.l00)


def test_equilibrium_undriven():
    hot, cold = MachineParams(OM, 0.03, 0.03).plain_baths()
    c = circular_cumulants(floquet_diagonalize(OM, 20.0, 0.0), hot, cold)
    assert abs(c.J_h) < 1e-12 and abs(c.J_c) < 1e-12 and abs(c.P) < 1e-12


def test_numeric_matches_exact():
    cf = floquet_diagonalize(OM, 20.0, G)
    a = circular_cumulants(cf, HOT, COLD, method="exact")
    n = circular_cumulants(cf, HOT, COLD, method="numeric")
    for k in ("J_h", "J_c", "var_h", "var_c", "mixed_hc"):
        assert getattr(n, k) == pytest.approx(getattr(a, k), rel=1e-6)


def test_accelerator_and_asymmetry():
    c = circular_cumulants(floquet_diagonalize(OM, 20.0, G), HOT, COLD, method="exact")
    assert c.J_h > 0 and c.J_c < 0 and c.P > 0
    rh, rc = c.var_h / c.J_h**2, c.var_c / c.J_c**2
    # unequal noise-to-signal ratios, unlike the sinusoidal machine; the gap
    # is about 2.3e-4 relative here, far above roundoff
    assert abs(rh - rc) / rh > 1e-4


def test_domain_errors():
    with pytest.raises(DomainError):
        floquet_diagonalize(OM, 0.0, G)
    with pytest.raises(DomainError):
        floquet_diagonalize(OM, 20.0, -1.0)
    split = MachineParams(OM, BH, BC).split_baths()
    with pytest.raises(DomainError):
        circular_terms(floquet_diagonalize(OM, 20.0, G), *split)
    with pytest.raises(DomainError):
        circular_cumulants(floquet_diagonalize(OM, 20.0, G), HOT, COLD, method="bogus")
