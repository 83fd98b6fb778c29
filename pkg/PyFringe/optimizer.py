'''
Adaptive-moment gradient descent on the four Bloch angles and the epoch loop
that trains the source qubits against the steering loss.
'''

import logging
from typing import NamedTuple

import numpy as np
import pandas as pd

from PyFringe.bloch_qubits import IntensityVector, QubitParams, intensities, two_qubit_state
from PyFringe.config import config_optimizer
from PyFringe.diff_engine import grad_loss, loss
from PyFringe.exceptions import DomainError, TrainingDivergedError

log = logging.getLogger(__name__)

history_columns = ['epoch', 'loss', 'theta1', 'phi1', 'theta2', 'phi2', 'i00', 'i01', 'i10', 'i11']

# Plateau rule: |loss_k - loss_(k-1)| <= PLATEAU_TOL for PLATEAU_EPOCHS consecutive epochs
PLATEAU_TOL = 1e-9
PLATEAU_EPOCHS = 10


class AdamConfig:
    '''
    Hyperparameters of the optimizer.

    Parameters
    ----------
    learning_rate : float
        The step size eta > 0.
    beta1, beta2 : float
        Decay rates of the first and second moment estimates, in [0, 1).
    epsilon : float
        Small positive constant added to the denominator.
    max_epochs : int
        Maximum number of training epochs (0 performs no training).
    method : str
        'adam' (default) or 'sgd' for the plain update params - eta * grad.
    '''
    def __init__(self, learning_rate=None, beta1=None, beta2=None, epsilon=None,
                 max_epochs=None, method=None):
        def default(value, key):
            return config_optimizer[key]['def'] if value is None else value

        self.learning_rate = float(default(learning_rate, 'learning_rate'))
        self.beta1 = float(default(beta1, 'beta1'))
        self.beta2 = float(default(beta2, 'beta2'))
        self.epsilon = float(default(epsilon, 'epsilon'))
        self.max_epochs = default(max_epochs, 'max_epochs')
        self.method = default(method, 'method')

        if not self.learning_rate > 0:
            raise DomainError(f'learning_rate must be positive, got {self.learning_rate}')
        for name in ('beta1', 'beta2'):
            if not 0 <= getattr(self, name) < 1:
                raise DomainError(f'{name} must be in [0, 1), got {getattr(self, name)}')
        if not self.epsilon > 0:
            raise DomainError(f'epsilon must be positive, got {self.epsilon}')
        if int(self.max_epochs) != self.max_epochs or self.max_epochs < 0:
            raise DomainError(f'max_epochs must be a nonnegative integer, got {self.max_epochs}')
        self.max_epochs = int(self.max_epochs)
        if self.method not in config_optimizer['method']['choices']:
            raise DomainError(f'unknown optimizer method {self.method!r}')

    def to_dict(self):
        return {'method': self.method, 'learning_rate': self.learning_rate,
                'beta1': self.beta1, 'beta2': self.beta2,
                'epsilon': self.epsilon, 'max_epochs': self.max_epochs}


class AdamState(NamedTuple):
    '''
    First (m) and second (v) moment estimates and the step counter t.
    '''
    m: np.ndarray
    v: np.ndarray
    t: int

    @classmethod
    def fresh(cls):
        return cls(np.zeros(4), np.zeros(4), 0)


class TrainingRecord(NamedTuple):
    '''
    One row of the training history: the loss and the angles at the start of the epoch.
    '''
    epoch: int
    loss: float
    params: QubitParams
    intensities: IntensityVector

    def to_row(self):
        return [self.epoch, self.loss, *self.params, *self.intensities]


class TrainingHistory:
    '''
    The ordered training records, whether the plateau rule stopped the run, and
    the parameters after the last update.
    '''
    def __init__(self, records, converged, final_params):
        epochs = [r.epoch for r in records]
        if epochs != list(range(1, len(records) + 1)):
            raise DomainError('training epochs must start at 1 and increase by 1')
        self.records = list(records)
        self.converged = bool(converged)
        self.final_params = final_params

    def __len__(self):
        return len(self.records)

    def losses(self):
        return np.array([r.loss for r in self.records])

    def best_loss(self):
        return float(self.losses().min()) if self.records else np.nan

    def to_dataframe(self):
        '''
        Returns the history as `~pandas.DataFrame` with the columns
        epoch, loss, theta1, phi1, theta2, phi2, i00, i01, i10, i11.
        '''
        return pd.DataFrame([r.to_row() for r in self.records], columns=history_columns)


def adam_step(state, config, params, grad):
    '''
    Applies one bias-corrected adaptive-moment update.

    Returns
    -------
    (`AdamState`, `QubitParams`)
        The new optimizer state and the updated parameters.
    '''
    g = grad.to_array()
    if not np.all(np.isfinite(g)):
        raise TrainingDivergedError(f'non-finite gradient {g} at step {state.t + 1}')

    t = state.t + 1
    m = config.beta1 * state.m + (1 - config.beta1) * g
    v = config.beta2 * state.v + (1 - config.beta2) * g * g
    m_hat = m / (1 - config.beta1**t)
    v_hat = v / (1 - config.beta2**t)
    x = params.to_array() - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
    return AdamState(m, v, t), QubitParams(*(float(p) for p in x))


def sgd_step(state, config, params, grad):
    '''
    Applies the plain gradient-descent update params - eta * grad. The state only
    counts steps.
    '''
    g = grad.to_array()
    if not np.all(np.isfinite(g)):
        raise TrainingDivergedError(f'non-finite gradient {g} at step {state.t + 1}')
    x = params.to_array() - config.learning_rate * g
    return AdamState(state.m, state.v, state.t + 1), QubitParams(*(float(p) for p in x))


step_methods = {'adam': adam_step, 'sgd': sgd_step}


def train(config, geom, init, theta_target):
    '''
    Trains the source angles so that an interference maximum lands on theta_target.

    Every epoch records the loss at the current parameters, computes the analytic
    gradient and applies one optimizer step. The run stops after max_epochs or
    once the loss has changed by at most 1e-9 for 10 consecutive epochs.

    Raises
    ------
    TrainingDivergedError
        If the loss or gradient becomes non-finite; the records collected so far
        are attached as ``history``.
    '''
    step = step_methods[config.method]
    state = AdamState.fresh()
    params = init
    records = []
    flat_epochs = 0
    converged = False

    for epoch in range(1, config.max_epochs + 1):
        current = loss(params, geom, theta_target)
        if not np.isfinite(current):
            raise TrainingDivergedError(f'non-finite loss at epoch {epoch}',
                                        TrainingHistory(records, False, params))
        records.append(TrainingRecord(epoch, current, params, intensities(two_qubit_state(params))))
        log.debug('epoch %d loss %.8f params %s', epoch, current, tuple(params))

        if epoch > 1 and abs(current - records[-2].loss) <= PLATEAU_TOL:
            flat_epochs += 1
        else:
            flat_epochs = 0
        if flat_epochs >= PLATEAU_EPOCHS:
            converged = True
            break

        try:
            state, params = step(state, config, params, grad_loss(params, geom, theta_target))
        except TrainingDivergedError as err:
            raise TrainingDivergedError(str(err), TrainingHistory(records, False, params)) from err

    history = TrainingHistory(records, converged, params)
    log.info('training stopped after %d epochs (converged=%s), best loss %.8f',
             len(history), converged, history.best_loss())
    return history
