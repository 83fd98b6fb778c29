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

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from PyFringe.bloch_qubits import QubitParams, canonical_phase, relative_phase
from PyFringe.config import config_experiment, config_source
from PyFringe.exceptions import DomainError, PyFringeError
from PyFringe.optimizer import AdamConfig, train
from PyFringe.wave_optics import (AngleGrid, SlitGeometry, alpha, fringe_peak,
                                  scalar_pattern)

log = logging.getLogger(__name__)

# Acceptance band for the trained phase difference around the optimal lattice
DELTA_PHI_TOLERANCE = 0.15


def default_init():
    '''
    Returns the default initial angles (1.6708, 0.1, 1.6708, -0.1).
    '''
    return QubitParams(*(config_source[key]['def'] for key in ('theta1', 'phi1', 'theta2', 'phi2')))


class SteeringSpec:
    '''
    A class for the configuration of a fringe-steering experiment.

    Parameters
    ----------
    geom : `SlitGeometry`
        The aperture.
    theta_target : float
        The detection angle where the maximum should land, |theta_target| < pi/2
        and inside the grid.
    init : `QubitParams`
        The initial Bloch angles.
    adam : `AdamConfig`
        The optimizer configuration.
    grid : `AngleGrid`
        The angles where the final pattern is evaluated.
    peak_tolerance : float
        The largest accepted distance between the found peak and the target.
    '''
    def __init__(self, geom=None, theta_target=None, init=None, adam=None, grid=None,
                 peak_tolerance=None):
        self.geom = SlitGeometry.default() if geom is None else geom
        if theta_target is None:
            theta_target = config_experiment['theta_target']['def']
        self.theta_target = float(theta_target)
        self.init = default_init() if init is None else init
        self.adam = AdamConfig() if adam is None else adam
        self.grid = AngleGrid.uniform() if grid is None else grid
        if peak_tolerance is None:
            peak_tolerance = config_experiment['peak_tolerance']['def']
        self.peak_tolerance = peak_tolerance

        if not abs(self.theta_target) < np.pi / 2:
            raise DomainError(f'theta_target must satisfy |theta| < pi/2, got {self.theta_target}')
        if not self.grid.contains(self.theta_target):
            raise DomainError(f'theta_target {self.theta_target} lies outside the angle grid')
        if not self.peak_tolerance > 0:
            raise DomainError(f'peak_tolerance must be positive, got {self.peak_tolerance}')

    def with_target(self, theta_target):
        '''
        Returns a copy of the spec aimed at another target angle.
        '''
        return SteeringSpec(self.geom, theta_target, self.init, self.adam, self.grid,
                            self.peak_tolerance)


class SteeringResult:
    '''
    The outcome of a steering run: the training history, the final pattern, the
    refined peak angle, the canonical phase difference phi2 - phi1 and whether the
    peak landed within tolerance of the target.
    '''
    def __init__(self, spec, history, final_pattern, peak_angle, delta_phi):
        self.spec = spec
        self.history = history
        self.final_pattern = final_pattern
        self.peak_angle = float(peak_angle)
        self.delta_phi = float(delta_phi)
        self.success = bool(abs(self.peak_angle - spec.theta_target) <= spec.peak_tolerance)

    @property
    def final_params(self):
        return self.history.final_params

    def peak_intensity(self):
        index = np.argmin(np.abs(self.final_pattern.grid.theta - self.peak_angle))
        return float(self.final_pattern.channels[0, index])

    def to_dict(self):
        error = phase_error(self.delta_phi, self.spec.geom, self.spec.theta_target)
        return {'theta_target': self.spec.theta_target,
                'geometry': self.spec.geom.to_dict(),
                'optimizer': self.spec.adam.to_dict(),
                'initial_params': self.spec.init._asdict(),
                'final_params': self.final_params._asdict(),
                'epochs': len(self.history),
                'converged': self.history.converged,
                'final_loss': float(self.history.losses()[-1]) if len(self.history) else None,
                'delta_phi': self.delta_phi,
                'optimal_delta_phi': analytic_optimal_phase(self.spec.geom, self.spec.theta_target)[0],
                'phase_error': error,
                'phase_within_tolerance': error <= DELTA_PHI_TOLERANCE,
                'peak_angle': self.peak_angle,
                'success': self.success}

    def __str__(self):
        output = '<SteeringResult \n'
        output += 'target = %3.4f rad \n'%self.spec.theta_target
        output += 'peak = %3.4f rad \n'%self.peak_angle
        output += 'delta_phi = %3.4f rad \n'%self.delta_phi
        output += 'success = %s '%self.success
        output += '>'
        return output


def analytic_optimal_phase(geom, theta_target, k_range=2):
    '''
    Returns the phase difference that puts a maximum on theta_target.

    Returns
    -------
    (float, list)
        phi* = -2 alpha(theta_target) mapped into (-pi, pi], and the lattice
        phi* + 2 pi k for |k| <= k_range, all of which give the same maximum.
    '''
    if geom.n_slits != 2:
        raise DomainError(f'the optimal phase is defined for a double slit, got N={geom.n_slits}')
    phi_star = float(canonical_phase(-2 * alpha(geom, theta_target)))
    return phi_star, [phi_star + 2 * np.pi * k for k in range(-k_range, k_range + 1)]


def phase_error(delta_phi, geom, theta_target):
    '''
    Returns the distance of delta_phi to the nearest member of the optimal lattice.
    '''
    phi_star, _ = analytic_optimal_phase(geom, theta_target)
    return float(abs(canonical_phase(delta_phi - phi_star)))


def run_steering(spec):
    '''
    Trains the source for `spec`, evaluates the final pattern and locates the
    peak within half a fringe period of the target.
    '''
    history = train(spec.adam, spec.geom, spec.init, spec.theta_target)
    params = history.final_params
    pattern = scalar_pattern(spec.geom, params, spec.grid)
    peak = fringe_peak(pattern, spec.theta_target, spec.geom.fringe_period / 2)
    delta_phi = canonical_phase(relative_phase(params.phi1, params.phi2))

    result = SteeringResult(spec, history, pattern, peak, delta_phi)
    log.info('target %.4f rad: peak %.5f rad, delta_phi %.4f rad, success=%s',
             spec.theta_target, result.peak_angle, result.delta_phi, result.success)
    return result


def sweep_targets(spec, targets, n_jobs=1, progress=False):
    '''
    Runs `run_steering` independently for every target.

    Returns
    -------
    list
        One entry per target in the same order: a `SteeringResult`, or the
        exception raised by that run.
    '''
    def run_one(target):
        try:
            return run_steering(spec.with_target(target))
        except PyFringeError as err:
            warnings.warn(f'Warning [sweep_targets]: target {target} failed: {err}')
            return err

    with ThreadPoolExecutor(max_workers=max(1, int(n_jobs))) as executor:
        results = executor.map(run_one, targets)
        if progress:
            results = tqdm(results, total=len(targets), desc='Steering sweep')
        return list(results)
