"""
    PyFringe: A software package to steer the interference fringes of a
    double-slit aperture illuminated by two Bloch-parameterized qubits.

    This program is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published by
    the Free Software Foundation, either version 3 of the License, or
    (at your option) any later version.

    This program is distributed in the hope that it will be useful,
    but WITHOUT ANY WARRANTY; without even the implied warranty of
    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
    GNU General Public License for more details.

    You should have received a copy of the GNU General Public License
    along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""

import warnings

import numpy as np
import pandas as pd
from scipy.special import diric

from PyFringe.bloch_qubits import (basis_labels, intensities, relative_phase,
                                   two_qubit_state)
from PyFringe.config import config_experiment, config_geometry
from PyFringe.exceptions import (DegenerateSourceError, DomainError,
                                 GeometryError, UnsupportedModelError)

grating_modes = ('textbook', 'unnormalized')


class SlitGeometry:
    '''
    A class for the fixed aperture configuration.

    Parameters
    ----------
    a : float
        The slit width.
    d : float
        The slit separation (center to center).
    n_slits : int
        The number of identical slits N.
    wavelength : float
        The wavelength of the illumination, in the same length unit as a and d.

    Notes
    -----
    The slits must not overlap, so a <= d whenever there is more than one slit.
    '''
    def __init__(self, a, d, n_slits, wavelength):
        for field, value in (('a', a), ('d', d), ('lambda', wavelength)):
            if not np.isfinite(value) or value <= 0:
                raise GeometryError(field, f'must be a positive length, got {value}')
        if int(n_slits) != n_slits or n_slits < 1:
            raise GeometryError('n_slits', f'must be a positive integer, got {n_slits}')
        if n_slits >= 2 and a > d:
            raise GeometryError('a', f'slit width {a} exceeds the slit separation {d}')

        self.a = float(a)
        self.d = float(d)
        self.n_slits = int(n_slits)
        self.wavelength = float(wavelength)

    @classmethod
    def default(cls):
        '''
        Returns the default steering geometry (lambda=1, d=12.5, a=2, N=2).
        '''
        return cls(config_geometry['a']['def'], config_geometry['d']['def'],
                   config_geometry['n_slits']['def'], config_geometry['lambda']['def'])

    @property
    def fringe_period(self):
        '''
        The small-angle fringe period lambda/d in radians.
        '''
        return self.wavelength / self.d

    def to_dict(self):
        return {'a': self.a, 'd': self.d, 'n_slits': self.n_slits, 'lambda': self.wavelength}

    def __eq__(self, other):
        return isinstance(other, SlitGeometry) and self.to_dict() == other.to_dict()

    def __str__(self):
        output = '<SlitGeometry object \n'
        output += 'a = %3.4f \n'%self.a
        output += 'd = %3.4f \n'%self.d
        output += 'N = %d \n'%self.n_slits
        output += 'lambda = %3.4f '%self.wavelength
        output += '>'
        return output


class AngleGrid:
    '''
    A strictly increasing set of detection angles (radians), each with |theta| < pi/2.
    '''
    def __init__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim != 1 or theta.size == 0:
            raise GeometryError('grid', 'must be a non-empty one-dimensional array of angles')
        if not np.all(np.isfinite(theta)) or np.any(np.abs(theta) >= np.pi / 2):
            raise GeometryError('grid', 'angles must be finite with |theta| < pi/2')
        if np.any(np.diff(theta) <= 0):
            raise GeometryError('grid', 'angles must be strictly increasing')
        self.theta = theta

    @classmethod
    def uniform(cls, grid_min=None, grid_max=None, count=None):
        '''
        Returns `count` uniform samples over [grid_min, grid_max]; by default
        2001 samples over [-0.1, 0.1] rad.
        '''
        grid_min = config_experiment['grid_min']['def'] if grid_min is None else grid_min
        grid_max = config_experiment['grid_max']['def'] if grid_max is None else grid_max
        count = config_experiment['grid_count']['def'] if count is None else count
        if grid_max <= grid_min:
            raise GeometryError('grid_max', f'must be larger than grid_min ({grid_min})')
        return cls(np.linspace(grid_min, grid_max, int(count)))

    def __len__(self):
        return self.theta.size

    def contains(self, angle):
        return self.theta[0] <= angle <= self.theta[-1]


class CoherenceParams:
    '''
    The fringe visibility v in [0, 1].
    '''
    def __init__(self, v):
        if not 0 <= v <= 1:
            raise DomainError(f'visibility must be in [0, 1], got {v}')
        self.v = float(v)


class Pattern:
    '''
    Sampled far-field intensity: one channel for the scalar model, four channels
    (|00>, |01>, |10>, |11>) for the basis-resolved model.
    '''
    def __init__(self, grid, channels, labels):
        channels = np.atleast_2d(np.asarray(channels, dtype=float))
        if channels.shape[0] not in (1, 4) or channels.shape[0] != len(labels):
            raise DomainError(f'a pattern has 1 or 4 labelled channels, got {channels.shape[0]}')
        if channels.shape[1] != len(grid):
            raise DomainError('every channel must have one value per grid angle')
        if not np.all(np.isfinite(channels)) or np.any(channels < 0):
            raise DomainError('pattern intensities must be finite and nonnegative')
        self.grid = grid
        self.channels = channels
        self.labels = list(labels)

    def to_dataframe(self):
        '''
        Returns the pattern as `~pandas.DataFrame` with a theta column and one
        column per channel.
        '''
        data = {'theta': self.grid.theta}
        data.update({label: channel for label, channel in zip(self.labels, self.channels)})
        return pd.DataFrame(data)

    @classmethod
    def from_dataframe(cls, df):
        labels = [c for c in df.columns if c != 'theta']
        return cls(AngleGrid(df['theta'].to_numpy()), df[labels].to_numpy().T, labels)


def beta(geom, theta):
    '''
    Returns the single-slit phase parameter pi a sin(theta) / lambda.
    '''
    return np.pi * geom.a * np.sin(theta) / geom.wavelength


def alpha(geom, theta):
    '''
    Returns the slit-to-slit phase parameter pi d sin(theta) / lambda.
    '''
    return np.pi * geom.d * np.sin(theta) / geom.wavelength


def sinc_envelope(beta):
    '''
    Returns the single-slit envelope (sin(beta)/beta)^2, equal to 1 at beta=0.
    '''
    # numpy's sinc is normalized: sinc(x) = sin(pi x)/(pi x)
    return np.sinc(np.asarray(beta) / np.pi)**2


def grating_factor(n_slits, alpha, mode='textbook'):
    '''
    Returns the N-slit interference factor.

    Parameters
    ----------
    n_slits : int
        The number of slits N >= 1.
    alpha : float or array_like
        The slit-to-slit phase parameter.
    mode : str
        'textbook' returns [sin(N alpha) / (N sin alpha)]^2, normalized to 1 at
        alpha = k pi. 'unnormalized' returns [sin(N alpha) / alpha]^2 with the
        limit N^2 at alpha = 0.
    '''
    if n_slits < 1:
        raise GeometryError('n_slits', f'must be a positive integer, got {n_slits}')
    alpha = np.asarray(alpha, dtype=float)
    if mode == 'textbook':
        # diric(x, n) = sin(n x/2) / (n sin(x/2)), with the limits at x = 2k pi
        return diric(2 * alpha, n_slits)**2
    elif mode == 'unnormalized':
        return (n_slits * np.sinc(n_slits * alpha / np.pi))**2
    raise UnsupportedModelError(f'unknown grating mode {mode!r}, use one of {grating_modes}')


def visibility(i1, i2):
    '''
    Returns the fringe visibility 2 i1 i2 / (i1^2 + i2^2) of two per-slit amplitudes.
    '''
    if i1 == 0 and i2 == 0:
        raise DegenerateSourceError('both per-slit amplitudes are zero')
    return CoherenceParams(2 * i1 * i2 / (i1**2 + i2**2))


def coherent_intensity(i1, i2, phi_rel, coherence=None):
    '''
    Returns the two-source intensity (i1^2 + i2^2) [1 + v cos(phi_rel)].

    Parameters
    ----------
    i1, i2 : float
        Per-slit amplitude magnitudes.
    phi_rel : float or array_like
        The relative phase between the two sources.
    coherence : `CoherenceParams`, optional
        The visibility; when omitted it is the visibility implied by i1 and i2.
    '''
    if i1 < 0 or i2 < 0:
        raise DomainError('per-slit amplitudes must be nonnegative')
    if coherence is None:
        coherence = visibility(i1, i2)
    elif i1 == 0 and i2 == 0:
        raise DegenerateSourceError('both per-slit amplitudes are zero')
    return (i1**2 + i2**2) * (1 + coherence.v * np.cos(phi_rel))


def per_slit_amplitudes(params):
    '''
    Returns the field amplitude magnitudes launched through slit 1 and slit 2,
    the |1> amplitude magnitudes sin(theta_j / 2) of the two qubits.
    '''
    return abs(np.sin(params.theta1 / 2)), abs(np.sin(params.theta2 / 2))


def source_scalar_intensity(params):
    '''
    Returns sin^2(theta1/2) + sin^2(theta2/2), the summed intensity of the two sources.
    '''
    return np.sin(params.theta1 / 2)**2 + np.sin(params.theta2 / 2)**2


def single_slit_amplitude(geom, theta):
    '''
    Returns the far-field amplitude sin(beta)/beta of one slit with unit illumination.
    '''
    return np.sinc(beta(geom, theta) / np.pi)


def double_slit_amplitude(geom, theta):
    '''
    Returns the field 2 cos(alpha) sin(beta)/beta of two identical in-phase slits.
    '''
    return 2 * np.cos(alpha(geom, theta)) * single_slit_amplitude(geom, theta)


def n_slit_intensity(geom, theta, mode='textbook'):
    '''
    Returns the classical N-slit intensity sinc^2(beta) times the grating factor.
    '''
    return sinc_envelope(beta(geom, theta)) * grating_factor(geom.n_slits, alpha(geom, theta), mode)


def _check_two_slits(geom):
    if geom.n_slits != 2:
        raise UnsupportedModelError(f'the scalar steering model needs a double slit, got N={geom.n_slits}')


def scalar_intensity_at(geom, params, theta):
    '''
    Returns 2 I_src cos^2(phi'/2 + alpha(theta)) sinc^2(beta(theta)) for a double
    slit, where I_src is `source_scalar_intensity` and phi' = phi2 - phi1.
    '''
    _check_two_slits(geom)
    phi_rel = relative_phase(params.phi1, params.phi2)
    return (2 * source_scalar_intensity(params)
            * np.cos(phi_rel / 2 + alpha(geom, theta))**2
            * sinc_envelope(beta(geom, theta)))


def scalar_pattern(geom, params, grid):
    '''
    Returns the one-channel steering pattern on the grid. This is the
    differentiable forward model used for training.
    '''
    values = scalar_intensity_at(geom, params, grid.theta)
    return Pattern(grid, values[np.newaxis, :], ['intensity'])


def basis_pattern(geom, params, grid, mode='textbook'):
    '''
    Returns the four-channel pattern 2 i_mn cos^2(phi'/2) sinc^2(beta) G_N(alpha),
    one channel per basis state mn.
    '''
    iv = intensities(two_qubit_state(params)).to_array()
    phi_rel = relative_phase(params.phi1, params.phi2)
    common = (2 * np.cos(phi_rel / 2)**2
              * sinc_envelope(beta(geom, grid.theta))
              * grating_factor(geom.n_slits, alpha(geom, grid.theta), mode))
    return Pattern(grid, np.outer(iv, common), ['i' + label for label in basis_labels])


def fringe_peak(pattern, window_center, window_halfwidth):
    '''
    Returns the angle of the channel-0 maximum inside
    [window_center - window_halfwidth, window_center + window_halfwidth].

    The discrete argmax (ties broken toward the window center) is refined with a
    parabola through it and its two neighbours.
    '''
    theta = pattern.grid.theta
    inside = np.flatnonzero(np.abs(theta - window_center) <= window_halfwidth)
    if inside.size < 3:
        raise DomainError(f'the peak window {window_center} +/- {window_halfwidth} '
                          f'holds {inside.size} grid samples, at least 3 are needed')

    values = pattern.channels[0, inside]
    candidates = inside[values == values.max()]
    best = candidates[np.argmin(np.abs(theta[candidates] - window_center))]

    if best == inside[0] or best == inside[-1]:
        warnings.warn('Warning [fringe_peak]: The maximum lies on the window edge.')
        return float(theta[best])

    x = theta[best - 1:best + 2] - theta[best]
    y = pattern.channels[0, best - 1:best + 2]
    c2, c1, _ = np.polyfit(x, y, 2)
    if c2 >= 0:
        return float(theta[best])
    vertex = -c1 / (2 * c2)
    return float(theta[best] + np.clip(vertex, x[0], x[2]))
