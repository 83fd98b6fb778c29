'''
Analytic gradients of the steering loss with respect to the four Bloch angles,
and a central finite-difference oracle to check them.

With S = sin^2(theta1/2) + sin^2(theta2/2), chi = (phi2 - phi1)/2 + alpha(theta_target)
and G = sinc^2(beta(theta_target)), the loss is L = -2 G S cos^2(chi).
'''

from typing import NamedTuple

import numpy as np
import pandas as pd

from PyFringe.bloch_qubits import QubitParams
from PyFringe.config import gradcheck_rtol, gradcheck_step
from PyFringe.exceptions import DomainError
from PyFringe.wave_optics import (alpha, beta, scalar_intensity_at,
                                  sinc_envelope, source_scalar_intensity)

__all__ = ['QubitParams', 'Gradient4', 'loss', 'grad_loss', 'finite_diff_grad',
           'random_params', 'gradient_check', 'gradient_check_passed', 'steering_phase']

# Points closer than this to a stationary factor are left out of the gradient check
EXCLUSION_BAND = 1e-4


class Gradient4(NamedTuple):
    '''
    Partial derivatives of a scalar objective with respect to (theta1, phi1, theta2, phi2).
    '''
    d_theta1: float
    d_phi1: float
    d_theta2: float
    d_phi2: float

    def to_array(self):
        return np.array(self, dtype=float)

    def norm(self):
        return float(np.linalg.norm(self.to_array()))


def steering_phase(params, geom, theta_target):
    '''
    Returns chi = (phi2 - phi1)/2 + alpha(theta_target).
    '''
    return (params.phi2 - params.phi1) / 2 + alpha(geom, theta_target)


def loss(params, geom, theta_target):
    '''
    Returns the steering loss, minus the scalar intensity at theta_target.
    '''
    return -float(scalar_intensity_at(geom, params, theta_target))


def grad_loss(params, geom, theta_target):
    '''
    Returns the closed-form gradient of `loss`.

    The phase partials are computed once and used with opposite signs, so
    d_phi1 == -d_phi2 holds exactly.
    '''
    loss(params, geom, theta_target)  # validates the geometry
    envelope = sinc_envelope(beta(geom, theta_target))
    chi = steering_phase(params, geom, theta_target)
    cos2 = np.cos(chi)**2

    d_theta1 = -2 * envelope * cos2 * np.sin(params.theta1 / 2) * np.cos(params.theta1 / 2)
    d_theta2 = -2 * envelope * cos2 * np.sin(params.theta2 / 2) * np.cos(params.theta2 / 2)
    # dL/dchi = 4 G S cos(chi) sin(chi); dchi/dphi2 = +1/2
    d_phi2 = 2 * envelope * source_scalar_intensity(params) * np.cos(chi) * np.sin(chi)

    return Gradient4(float(d_theta1), float(-d_phi2), float(d_theta2), float(d_phi2))


def finite_diff_grad(objective, params, h=gradcheck_step):
    '''
    Returns the central-difference gradient (f(x+h) - f(x-h)) / 2h of `objective`
    at `params`, one coordinate at a time.
    '''
    if not h > 0:
        raise DomainError(f'finite-difference step must be positive, got {h}')
    x = params.to_array()
    grad = np.empty(4)
    for i, step in enumerate(np.eye(4) * h):
        grad[i] = (objective(QubitParams.from_array(x + step))
                   - objective(QubitParams.from_array(x - step))) / (2 * h)
    return Gradient4(*(float(g) for g in grad))


def random_params(n_points, seed):
    '''
    Returns `n_points` reproducible random parameter points, theta uniform in
    [0, pi] and phi uniform in [-pi, pi].
    '''
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0, np.pi, size=(n_points, 2))
    phis = rng.uniform(-np.pi, np.pi, size=(n_points, 2))
    return [QubitParams(float(t[0]), float(p[0]), float(t[1]), float(p[1]))
            for t, p in zip(thetas, phis)]


def _excluded(params, geom, theta_target):
    chi = steering_phase(params, geom, theta_target)
    return bool(abs(np.cos(chi)) < EXCLUSION_BAND
                or abs(np.sin(chi)) < EXCLUSION_BAND
                or abs(np.sin(params.theta1)) < EXCLUSION_BAND
                or abs(np.sin(params.theta2)) < EXCLUSION_BAND)


def gradient_check(geom, theta_target, points, h=gradcheck_step):
    '''
    Compares `grad_loss` with `finite_diff_grad` at every point.

    Returns
    -------
    `~pandas.DataFrame`
        One row per point with the angles, the worst relative error over the four
        coordinates, |analytic - numeric| / (1e-12 + |numeric|), and an 'excluded'
        flag for points near a stationary factor.
    '''
    def objective(p):
        return loss(p, geom, theta_target)

    rows = []
    for p in points:
        analytic = grad_loss(p, geom, theta_target).to_array()
        numeric = finite_diff_grad(objective, p, h).to_array()
        rel_error = np.max(np.abs(analytic - numeric) / (1e-12 + np.abs(numeric)))
        rows.append({**p._asdict(),
                     'rel_error': float(rel_error),
                     'excluded': _excluded(p, geom, theta_target)})
    return pd.DataFrame(rows, columns=list(QubitParams._fields) + ['rel_error', 'excluded'])


def gradient_check_passed(report, rtol=gradcheck_rtol):
    '''
    Returns the maximum relative error over the non-excluded points and whether
    it is within `rtol`.
    '''
    kept = report.loc[~report['excluded'], 'rel_error']
    max_error = float(kept.max()) if len(kept) else 0.
    return max_error, max_error <= rtol
