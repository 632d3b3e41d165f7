import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtcwt_fht import ParameterError, ShapeError
from dtcwt_fht.dualtree import verify_proposition1
from dtcwt_fht.dualtree2d import (
    THETAS,
    DtCoeffs2D,
    _combine,
    _complex_from_factors,
    _level_factors,
    _uncombine,
    amp_phase2d,
    amp_phase_synthesize2d,
    analyze2d,
    complex_directional_wavelet,
    directional_wavelet,
    from_amp_phase2d,
    orientation,
    pairing_multiplier2d,
    synthesize2d,
    verify_proposition2,
)
from dtcwt_fht.hilbert import direction_vector, directional_hilbert_multiplier, fractional_hilbert
from dtcwt_fht.spectral import frequency_grid2, radial_window
from dtcwt_fht.splines import build_system

from conftest import rel_err


@pytest.fixture(scope="module")
def sys64():
    return build_system((8.0, 0.0), 64, 2)


@pytest.fixture(scope="module")
def sys_fine():
    return build_system((8.0, 0.0), 64, 1)


def test_orientation_table():
    assert [orientation(ell) for ell in range(1, 7)] == [0.0, 0.0, np.pi / 2, np.pi / 2, np.pi / 4, 3 * np.pi / 4]
    with pytest.raises(ParameterError):
        orientation(7)


def test_zero_image(sys64):
    c = analyze2d(np.zeros((64, 64)), sys64)
    assert all(not lv.any() for lv in c.levels)
    assert [lv.shape for lv in c.levels] == [(6, 32, 32), (6, 16, 16)]
    assert all(r.shape == (16, 16) for r in c.residues.values())


@pytest.mark.parametrize("shape", [(64, 32), (32, 32), (64,)])
def test_shape_errors(sys64, shape):
    with pytest.raises(ShapeError):
        analyze2d(np.zeros(shape), sys64)


def test_constant_in_y_has_no_vertical_bands(sys64, rng):
    g = rng.standard_normal(64)
    img = np.tile(g, (64, 1))
    c = analyze2d(img, sys64)
    for lv in c.levels:
        e = (np.abs(lv) ** 2).sum(axis=(1, 2))
        assert e[2] + e[3] < 1e-24 * (e[0] + e[1])
        assert e[4] + e[5] < 1e-24 * (e[0] + e[1])


@pytest.mark.parametrize("level", [1, 2])
def test_plane_wave_band_separation(level):
    n = 128
    system = build_system((8.0, 0.0), n, 3)
    k = int(0.35 * n) >> (level - 1)
    y, x = np.mgrid[0:n, 0:n]
    c = analyze2d(np.cos(2 * np.pi * k * (x + y) / n), system)
    e = (np.abs(c.levels[level - 1]) ** 2).sum(axis=(1, 2))
    assert 10 * np.log10(e[4] / max(e[5], 1e-300)) >= 20


@pytest.mark.parametrize("alpha,levels", [(4.0, 1), (4.0, 3), (8.0, 2), (8.0, 3)])
def test_perfect_reconstruction(alpha, levels, rng):
    s = build_system((alpha, 0.0), 64, levels)
    f = rng.standard_normal((64, 64))
    assert rel_err(synthesize2d(analyze2d(f, s), s), f) < 1e-9


def test_zero_coefficients_give_zero(sys64):
    c = analyze2d(np.zeros((64, 64)), sys64)
    assert not synthesize2d(c, sys64).any()


def test_linearity(sys64, rng):
    c = analyze2d(rng.standard_normal((64, 64)), sys64)
    assert np.allclose(synthesize2d(3 * c, sys64), 3 * synthesize2d(c, sys64), atol=1e-12)


def test_inconsistent_container(sys64):
    with pytest.raises(ShapeError):
        DtCoeffs2D([np.zeros((6, 16, 16))], {t: np.zeros((8, 8)) for t in ("aa", "ab", "ba", "bb")},
                   8.0, 0.0, "bspline", 64)


@given(st.integers(0, 2**32 - 1))
def test_mixing_is_exactly_inverted_and_energy_preserving(seed):
    rng = np.random.default_rng(seed)
    d = {p: rng.standard_normal((4, 4)) for p in range(1, 13)}
    back = _uncombine(_combine(d))
    assert max(np.abs(back[p] - d[p]).max() for p in d) < 1e-14
    bands = 4 * _combine(d)
    hh = sum(np.sum(d[p] ** 2) for p in (3, 6, 9, 12))
    assert np.sum(np.abs(bands[4]) ** 2) + np.sum(np.abs(bands[5]) ** 2) == pytest.approx(hh, rel=1e-12)


@pytest.mark.parametrize("c,mag,tau", [(1 + 0j, 1.0, 0.0), ((1 + 1j) / np.sqrt(2), 1.0, 0.25)])
def test_amp_phase2d_examples(c, mag, tau):
    coeffs = DtCoeffs2D([np.full((6, 4, 4), c)], {t: np.zeros((4, 4)) for t in ("aa", "ab", "ba", "bb")},
                        2.0, 0.0, "bspline", 8)
    amap = amp_phase2d(coeffs)
    assert np.allclose(amap.magnitude[0], mag)
    assert np.allclose(amap.shift[0], tau)


def test_amp_phase2d_round_trip(sys64, rng):
    c = analyze2d(rng.standard_normal((64, 64)), sys64)
    rebuilt = from_amp_phase2d(amp_phase2d(c))
    for a, b in zip(rebuilt, c.levels):
        assert np.abs(a - b).max() < 1e-15 * max(1.0, np.abs(b).max()) * 4


def _spectral_energy(system, ell):
    psi = complex_directional_wavelet(system, ell)
    energy = np.abs(np.fft.fft2(psi)) ** 2
    wy, wx = frequency_grid2(psi.shape[0], 0.125)
    return energy, wy, wx


@pytest.mark.parametrize("ell", range(1, 7))
def test_one_sided_spectrum(sys_fine, ell):
    energy, wy, wx = _spectral_energy(sys_fine, ell)
    c, s = direction_vector(THETAS[ell])
    wrong = energy[c * wx + s * wy < 0].sum()
    assert wrong < 1e-10 * energy.sum()


@pytest.mark.parametrize("ell", range(1, 7))
def test_dominant_orientation(sys_fine, ell):
    energy, wy, wx = _spectral_energy(sys_fine, ell)
    theta = THETAS[ell]
    offset = np.angle(np.exp(1j * (np.arctan2(wy, wx) - theta)))
    mean = theta + (energy * offset).sum() / energy.sum()
    assert abs(np.degrees(mean - theta)) < 5


@pytest.mark.parametrize("ell", range(1, 7))
def test_directional_wavelet(sys_fine, ell):
    psi = complex_directional_wavelet(sys_fine, ell)
    assert np.abs(directional_wavelet(sys_fine, ell, 0.0) - psi.real).max() < 1e-15
    assert np.abs(directional_wavelet(sys_fine, ell, -0.5) - psi.imag).max() < 1e-7 * np.abs(psi.imag).max()
    ref = np.linalg.norm(psi.real)
    for tau in (0.2, 0.5, 0.9):
        assert np.linalg.norm(directional_wavelet(sys_fine, ell, tau)) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("ell", range(1, 7))
def test_pairing_multiplier_is_directional_hilbert_on_support(sys64, ell):
    p = pairing_multiplier2d(sys64, ell, 64)
    d = directional_hilbert_multiplier(64, THETAS[ell])
    # compare where the real part of the band carries energy, away from the Nyquist lines
    real_part = np.fft.ifft2(_complex_from_factors(ell, _level_factors(sys64, 1, 64))).real
    energy = np.abs(np.fft.fft2(real_part))
    mask = energy > 1e-12 * energy.max()
    mask[32, :] = mask[:, 32] = False
    assert np.array_equal(p[mask], d[mask])


def test_amp_phase_synthesis_zero_map_is_residue_only(sys64, rng):
    c = analyze2d(rng.standard_normal((64, 64)), sys64)
    zeroed = 0 * c
    zeroed.residues = c.residues
    out = amp_phase_synthesize2d(amp_phase2d(zeroed), c.residues, sys64)
    assert np.abs(out - synthesize2d(zeroed, sys64)).max() < 1e-13


@pytest.mark.parametrize("ell", [1, 5, 6])
def test_amp_phase_synthesis_single_coefficient(sys64, ell):
    c = analyze2d(np.zeros((64, 64)), sys64)
    c.levels[1][ell - 1, 3, 5] = 0.7 * np.exp(1j * np.pi * 0.4)
    out = amp_phase_synthesize2d(amp_phase2d(c), c.residues, sys64)
    assert np.abs(out - synthesize2d(c, sys64)).max() < 1e-13


def test_amp_phase_synthesis_matches_synthesize(sys64, rng):
    c = analyze2d(rng.standard_normal((64, 64)), sys64)
    out = amp_phase_synthesize2d(amp_phase2d(c), c.residues, sys64)
    assert rel_err(out, synthesize2d(c, sys64)) < 1e-10


def test_proposition2_tau_zero_discriminates():
    res = verify_proposition2(0.4 * np.pi, np.pi / 4, 0.0, 256)
    assert res.max_error_cos < 1e-13
    assert res.max_error_sin > 0.1


@pytest.mark.parametrize("theta", [0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])
def test_proposition2_cosine_reading(theta):
    assert verify_proposition2(0.4 * np.pi, theta, 0.25, 256).max_error_cos < 1e-8


def test_proposition2_theta_zero_is_rowwise_1d():
    n, omega, tau = 256, 0.4 * np.pi, 0.25
    res = verify_proposition2(omega, 0.0, tau, n)
    window = radial_window(n, omega / 2)
    x = np.arange(n)
    carrier = np.cos(res.omega * x)
    rows = np.stack([fractional_hilbert(row * carrier, tau) for row in window])
    assert np.abs(res.lhs - rows).max() < 1e-9
    # each row is itself an instance of the 1D identity
    assert np.abs(rows - window * np.cos(res.omega * x + np.pi * tau)).max() < 1e-9
    assert verify_proposition1(0.2 * np.pi, 0.5 * np.pi, tau, 1024).max_error < 1e-9


def test_proposition2_rejects_wide_window():
    with pytest.raises(ParameterError):
        verify_proposition2(0.2 * np.pi, np.pi / 4, 0.25, 256, radius=0.3 * np.pi)
