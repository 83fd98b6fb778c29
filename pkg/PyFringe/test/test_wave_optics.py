"""
Test the far-field diffraction models
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from PyFringe.bloch_qubits import QubitParams
from PyFringe.exceptions import (DegenerateSourceError, DomainError,
                                 GeometryError, UnsupportedModelError)
from PyFringe.test.reference_values import EPOCH100_PARAMS
from PyFringe.wave_optics import (AngleGrid, CoherenceParams, Pattern,
                                  SlitGeometry, alpha, basis_pattern, beta,
                                  coherent_intensity, double_slit_amplitude,
                                  fringe_peak, grating_factor, n_slit_intensity,
                                  per_slit_amplitudes,
                                  scalar_intensity_at, scalar_pattern,
                                  sinc_envelope, source_scalar_intensity,
                                  visibility)


def test_default_geometry(geom):
    """
    Tests the default steering geometry and its fringe period
    """
    assert (geom.a, geom.d, geom.n_slits, geom.wavelength) == (2., 12.5, 2, 1.)
    assert_allclose(geom.fringe_period, 0.08)
    assert_allclose(alpha(geom, 0.04), 1.5703, atol=2e-4)


@pytest.mark.parametrize('kwargs, field', [
    ({'a': 13., 'd': 12.5, 'n_slits': 2, 'wavelength': 1.}, 'a'),
    ({'a': 2., 'd': -1., 'n_slits': 2, 'wavelength': 1.}, 'd'),
    ({'a': 2., 'd': 12.5, 'n_slits': 0, 'wavelength': 1.}, 'n_slits'),
    ({'a': 2., 'd': 12.5, 'n_slits': 2, 'wavelength': 0.}, 'lambda'),
])
def test_geometry_rejected(kwargs, field):
    """
    Tests that invalid geometries name the offending field
    """
    with pytest.raises(GeometryError) as err:
        SlitGeometry(**kwargs)
    assert err.value.field == field


def test_single_slit_may_be_wide():
    """
    Tests that a single slit is not limited by the slit separation
    """
    assert SlitGeometry(20., 12.5, 1, 1.).n_slits == 1


def test_angle_grid_rejected():
    """
    Tests that non-increasing grids and grazing angles are rejected
    """
    with pytest.raises(GeometryError):
        AngleGrid([0., 0., 0.1])
    with pytest.raises(GeometryError):
        AngleGrid([0., np.pi / 2])
    with pytest.raises(GeometryError):
        AngleGrid.uniform(0.1, -0.1, 11)


def test_default_grid(grid):
    """
    Tests the default detection grid
    """
    assert len(grid) == 2001
    assert grid.contains(0.04) and not grid.contains(0.2)


def test_sinc_envelope_zeros():
    """
    Tests that the envelope vanishes at nonzero multiples of pi
    """
    m = np.arange(1, 6)
    assert_allclose(sinc_envelope(m * np.pi), 0., atol=1e-12)
    assert_allclose(sinc_envelope(-m * np.pi), 0., atol=1e-12)


def test_removable_singularities():
    """
    Tests the continuity at beta = 0 and alpha = k pi
    """
    assert sinc_envelope(0.) == 1.
    assert_allclose(sinc_envelope(1e-9), 1., atol=1e-8)
    for k in range(-3, 4):
        assert_allclose(grating_factor(2, k * np.pi), 1., atol=1e-8)
        assert_allclose(grating_factor(2, k * np.pi + 1e-9), 1., atol=1e-8)
        assert_allclose(grating_factor(5, k * np.pi + 1e-9), 1., atol=1e-8)
    assert_allclose(grating_factor(2, 0., 'unnormalized'), 4., atol=1e-12)


def test_grating_factor_double_slit(rng):
    """
    Tests that the two-slit grating factor is cos^2(alpha)
    """
    a = rng.uniform(-20, 20, 1000)
    assert_allclose(grating_factor(2, a), np.cos(a)**2, rtol=0, atol=1e-12)


def test_grating_factor_single_slit(rng):
    """
    Tests that one slit has no interference
    """
    assert_allclose(grating_factor(1, rng.uniform(-5, 5, 50)), 1., atol=1e-12)


def test_grating_factor_unknown_mode():
    """
    Tests that an unknown grating mode is rejected
    """
    with pytest.raises(UnsupportedModelError):
        grating_factor(2, 0.3, 'cosine')


def test_double_slit_amplitude(geom, grid):
    """
    Tests that the squared two-slit field is four times the normalized intensity
    """
    assert_allclose(double_slit_amplitude(geom, grid.theta)**2,
                    4 * n_slit_intensity(geom, grid.theta), rtol=1e-12, atol=1e-14)


def test_visibility():
    """
    Tests the visibility of equal, unequal and vanishing sources
    """
    assert visibility(0.5, 0.5).v == 1.
    assert visibility(0.7, 0.).v == 0.
    assert_allclose(visibility(1., 2.).v, 0.8)
    with pytest.raises(DegenerateSourceError):
        visibility(0., 0.)
    with pytest.raises(DomainError):
        CoherenceParams(1.2)


def test_coherent_intensity():
    """
    Tests the two-source interference law
    """
    assert_allclose(coherent_intensity(0.5, 0.5, 0.), 1.)
    assert_allclose(coherent_intensity(0.5, 0.5, np.pi), 0., atol=1e-16)
    # No fringes without coherence
    assert_allclose(coherent_intensity(0.5, 0.5, [0., 1., 2.], CoherenceParams(0.)), 0.5)


def test_basis_pattern_channel_closure(geom, grid, rng):
    """
    Tests that the four channels add up to the interference term at every angle
    """
    for x in rng.uniform(-np.pi, np.pi, size=(10, 4)):
        params = QubitParams(*x)
        pattern = basis_pattern(geom, params, grid)
        phi_rel = params.phi2 - params.phi1
        expected = (2 * np.cos(phi_rel / 2)**2 * sinc_envelope(beta(geom, grid.theta))
                    * grating_factor(2, alpha(geom, grid.theta)))
        assert pattern.labels == ['i00', 'i01', 'i10', 'i11']
        assert_allclose(pattern.channels.sum(axis=0), expected, rtol=0, atol=1e-12)


def test_basis_pattern_dark_at_opposite_phase(geom, grid):
    """
    Tests that opposite source phases extinguish every channel
    """
    pattern = basis_pattern(geom, QubitParams(1.6708, 0., 1.6708, np.pi), grid)
    assert_allclose(pattern.channels, 0., atol=1e-12)


def test_scalar_pattern_parity(geom):
    """
    Tests that the pattern of in-phase sources is even in theta
    """
    grid = AngleGrid([-0.05, -0.02, 0.02, 0.05])
    values = scalar_pattern(geom, QubitParams(1.2, 0.4, 2.1, 0.4), grid).channels[0]
    assert_allclose(values, values[::-1], rtol=1e-12)


def test_basis_pattern_parity(geom):
    """
    Tests that the basis-resolved pattern of in-phase sources is even in theta
    """
    grid = AngleGrid([-0.05, -0.02, 0.02, 0.05])
    for mode in ('textbook', 'unnormalized'):
        channels = basis_pattern(geom, QubitParams(1.2, 0.4, 2.1, 0.4), grid, mode).channels
        assert_allclose(channels, channels[:, ::-1], rtol=1e-12)


def test_scalar_pattern_below_envelope(geom, grid, rng):
    """
    Tests that the steered pattern never exceeds the single-slit envelope
    """
    for x in rng.uniform(-np.pi, np.pi, size=(10, 4)):
        params = QubitParams(*x)
        values = scalar_pattern(geom, params, grid).channels[0]
        bound = 2 * source_scalar_intensity(params) * sinc_envelope(beta(geom, grid.theta))
        assert np.all(values <= bound + 1e-12)


def test_scalar_pattern_needs_double_slit(grid):
    """
    Tests that the steering model is only defined for two slits
    """
    with pytest.raises(UnsupportedModelError):
        scalar_pattern(SlitGeometry(2., 12.5, 3, 1.), QubitParams(1., 0., 1., 0.), grid)


def test_in_phase_maximum_on_axis(geom, grid):
    """
    Tests that sources in phase put the central maximum at theta = 0
    """
    pattern = scalar_pattern(geom, QubitParams(1.6708, 0., 1.6708, 0.), grid)
    assert abs(grid.theta[np.argmax(pattern.channels[0])]) < 1e-9
    assert abs(fringe_peak(pattern, 0., geom.fringe_period / 2)) < 1e-6


def test_trained_pattern_peak(geom, grid):
    """
    Tests that the trained angles put a maximum next to 0.04 rad
    """
    pattern = scalar_pattern(geom, EPOCH100_PARAMS, grid)
    assert abs(fringe_peak(pattern, 0.04, geom.fringe_period / 2) - 0.04) < 1e-3


def test_fringe_peak_refinement():
    """
    Tests that the parabolic refinement recovers an off-grid vertex
    """
    grid = AngleGrid(np.linspace(-0.01, 0.01, 201))
    pattern = Pattern(grid, 1. - (grid.theta - 0.00123)**2, ['intensity'])
    assert_allclose(fringe_peak(pattern, 0., 0.005), 0.00123, atol=1e-9)


def test_fringe_peak_window():
    """
    Tests the window edge warning and the minimum window size
    """
    grid = AngleGrid(np.linspace(-0.01, 0.01, 201))
    pattern = Pattern(grid, 1. + grid.theta, ['intensity'])
    with pytest.warns(UserWarning):
        assert_allclose(fringe_peak(pattern, 0., 0.00255), 0.0025, atol=1e-12)
    with pytest.raises(DomainError):
        fringe_peak(pattern, 0., 1e-5)


def test_scalar_intensity_at_matches_pattern(geom, grid):
    """
    Tests that the pointwise model and the sampled pattern agree
    """
    params = QubitParams(0.9, -0.3, 2.2, 1.4)
    pattern = scalar_pattern(geom, params, grid)
    assert_allclose(scalar_intensity_at(geom, params, grid.theta[1234]), pattern.channels[0, 1234], rtol=1e-12)


def test_per_slit_amplitudes():
    """
    Tests that each slit carries the |1> amplitude of its qubit
    """
    i1, i2 = per_slit_amplitudes(QubitParams(np.pi, 0.3, np.pi / 2, -1.))
    assert_allclose((i1, i2), (1., np.sqrt(0.5)), atol=1e-15)
    assert_allclose(visibility(i1, i2).v, 2 * np.sqrt(0.5) / 1.5)


def test_n_slit_principal_maximum():
    """
    Tests that N in-phase slits peak on axis with the normalized grating factor
    """
    geom = SlitGeometry(2., 12.5, 5, 1.)
    assert_allclose(n_slit_intensity(geom, 0.), 1., atol=1e-12)
    assert_allclose(n_slit_intensity(geom, 0., 'unnormalized'), 25., atol=1e-12)
    # The next principal maximum sits at d sin(theta) = lambda
    theta1 = np.arcsin(1 / 12.5)
    assert_allclose(n_slit_intensity(geom, theta1), sinc_envelope(beta(geom, theta1)), rtol=1e-8)
