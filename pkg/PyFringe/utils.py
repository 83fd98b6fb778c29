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

import datetime
import json
import logging
import os
import tempfile
from copy import deepcopy
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

from PyFringe.bloch_qubits import QubitParams
from PyFringe.config import config_dict
from PyFringe.exceptions import ConfigError, DomainError, GeometryError
from PyFringe.optimizer import AdamConfig
from PyFringe.steering import SteeringSpec
from PyFringe.wave_optics import (AngleGrid, Pattern, SlitGeometry, beta,
                                  n_slit_intensity, sinc_envelope)
from PyFringe.version import version

log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

# Command line and config spellings of the intensity models and grating modes
model_aliases = {'eq27': 'scalar', 'eq18': 'basis'}
grating_aliases = {'textbook': 'textbook', 'paper-literal': 'unnormalized'}


############################################################
# Run configuration

def _parse_value(key, entry, raw):
    '''
    Converts a raw value for the dotted key and checks it against its table entry.
    '''
    try:
        value = entry['type'](raw)
    except (TypeError, ValueError):
        raise ConfigError(key, f'cannot read {raw!r} as {entry["type"].__name__}')
    if entry['type'] is float and not np.isfinite(value):
        raise ConfigError(key, f'must be finite, got {raw!r}')
    if 'choices' in entry and value not in entry['choices']:
        raise ConfigError(key, f'must be one of {entry["choices"]}, got {value!r}')
    if 'min' in entry:
        if value < entry['min'] or (entry.get('min_open') and value == entry['min']):
            bound = '>' if entry.get('min_open') else '>='
            raise ConfigError(key, f'must be {bound} {entry["min"]}, got {value}')
    if 'max' in entry:
        if value > entry['max'] or (entry.get('max_open') and value == entry['max']):
            bound = '<' if entry.get('max_open') else '<='
            raise ConfigError(key, f'must be {bound} {entry["max"]}, got {value}')
    return value


def parse_config_text(text):
    '''
    Parses flat ``section.key = value`` lines into a {dotted key: raw string} dict.
    Blank lines and text after ``#`` are ignored.
    '''
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f'line {number}', f'expected "section.key = value", got {line!r}')
        key, raw = (part.strip() for part in line.split('=', 1))
        values[key] = raw
    return values


class RunConfig:
    '''
    A class to hold a validated run configuration.

    Parameters
    ----------
    values : dict
        Dotted keys (e.g., 'geometry.d') to raw values. Missing keys take the
        defaults of `PyFringe.config.config_dict`; unknown keys are rejected.
    '''
    def __init__(self, values=None):
        self.values = {f'{section}.{key}': entry['def']
                       for section, table in config_dict.items() for key, entry in table.items()}
        for key, raw in (values or {}).items():
            self.set(key, raw)

    @classmethod
    def from_file(cls, path=None, overrides=None):
        '''
        Loads a config file (if given) and applies the overrides on top of it.
        '''
        values = {}
        if path is not None:
            values.update(parse_config_text(Path(path).read_text(encoding='utf8')))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        config = cls(values)
        config.validate()
        return config

    def set(self, key, raw):
        section, _, name = key.partition('.')
        if section not in config_dict or name not in config_dict[section]:
            raise ConfigError(key, 'unknown configuration key')
        self.values[key] = _parse_value(key, config_dict[section][name], raw)

    def __getitem__(self, key):
        return self.values[key]

    def geometry(self):
        try:
            return SlitGeometry(self['geometry.a'], self['geometry.d'],
                                self['geometry.n_slits'], self['geometry.lambda'])
        except GeometryError as err:
            raise ConfigError(f'geometry.{err.field}', str(err))

    def source_params(self):
        return QubitParams(self['source.theta1'], self['source.phi1'],
                           self['source.theta2'], self['source.phi2'])

    def adam(self):
        try:
            return AdamConfig(self['optimizer.learning_rate'], self['optimizer.beta1'],
                              self['optimizer.beta2'], self['optimizer.epsilon'],
                              self['optimizer.max_epochs'], self['optimizer.method'])
        except DomainError as err:
            raise ConfigError('optimizer', str(err))

    def grid(self):
        grid_min, grid_max = self['experiment.grid_min'], self['experiment.grid_max']
        for key, value in (('experiment.grid_min', grid_min), ('experiment.grid_max', grid_max)):
            if not abs(value) < np.pi / 2:
                raise ConfigError(key, f'detection angles need |theta| < pi/2, got {value}')
        if grid_max <= grid_min:
            raise ConfigError('experiment.grid_max', f'must be larger than grid_min ({grid_min})')
        return AngleGrid.uniform(grid_min, grid_max, self['experiment.grid_count'])

    def steering_spec(self):
        grid = self.grid()
        target = self['experiment.theta_target']
        if not grid.contains(target):
            raise ConfigError('experiment.theta_target',
                              f'{target} lies outside the grid [{grid.theta[0]}, {grid.theta[-1]}]')
        return SteeringSpec(self.geometry(), target, self.source_params(), self.adam(), grid,
                            self['experiment.peak_tolerance'])

    @property
    def model(self):
        return model_aliases[self['experiment.model']]

    @property
    def grating(self):
        return grating_aliases[self['experiment.grating']]

    @property
    def output_dir(self):
        return Path(self['output.directory'])

    @property
    def formats(self):
        formats = {f.strip() for f in self['output.formats'].split(',') if f.strip()}
        unknown = formats - {'csv', 'json', 'svg'}
        if unknown:
            raise ConfigError('output.formats', f'unknown formats {sorted(unknown)}')
        return formats

    def validate(self):
        '''
        Builds every domain object once so that invariant violations surface at load time.
        '''
        self.geometry()
        self.adam()
        self.steering_spec()
        self.formats
        return self

    def to_dict(self):
        return deepcopy(self.values)


############################################################
# Files

def atomic_write(path, writer, mode='w'):
    '''
    Writes a file through a temporary file in the same directory, then renames it.
    `writer` receives the open file object.
    '''
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, mode, **({'newline': ''} if 'b' not in mode else {})) as f:
            writer(f)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    log.info('written %s', path)
    return path


def write_dataframe_csv(df, path):
    return atomic_write(path, lambda f: df.to_csv(f, index=False, float_format=FLOAT_FORMAT))


def read_dataframe_csv(path):
    return pd.read_csv(path, float_precision='round_trip')


def write_pattern_csv(pattern, path):
    '''
    Writes a pattern as CSV: a theta column followed by one column per channel.
    '''
    return write_dataframe_csv(pattern.to_dataframe(), path)


def read_pattern_csv(path):
    return Pattern.from_dataframe(read_dataframe_csv(path))


def write_history_csv(history, path):
    return write_dataframe_csv(history.to_dataframe(), path)


def write_layer_csv(layer, path):
    '''
    Writes an intensity layer: a first line 'layer,<k>,<side>' and then the
    matrix rows.
    '''
    def writer(f):
        f.write(f'layer,{layer.layer_index},{layer.side}\n')
        pd.DataFrame(layer.entries).to_csv(f, header=False, index=False, float_format=FLOAT_FORMAT)
    return atomic_write(path, writer)


def read_layer_csv(path):
    '''
    Returns (k, entries) from a file written by `write_layer_csv`.
    '''
    with open(path, encoding='utf8') as f:
        _, k, side = f.readline().strip().split(',')
        entries = pd.read_csv(f, header=None, float_precision='round_trip').to_numpy()
    if entries.shape != (int(side), int(side)):
        raise DomainError(f'{path}: expected a {side}x{side} matrix, got {entries.shape}')
    return int(k), entries


def to_json(payload, stamp=True):
    '''
    Returns the payload as json, with the creation date and the PyFringe version
    when `stamp` is set.
    '''
    payload = dict(payload)
    if stamp:
        payload.update({'date_created': datetime.datetime.now(datetime.timezone.utc).strftime('%Y-%m-%dT%H:%M:%S')})
        payload.update({'version': version})
    return json.dumps(payload, indent=' ')


def write_json(payload, path, stamp=True):
    return atomic_write(path, lambda f: f.write(to_json(payload, stamp)))


############################################################
# Plots

def plot_pattern(pattern, theta_target=None):
    '''
    Plots every channel of a pattern against the detection angle.
    '''
    palete = sns.color_palette('deep')
    fig, axis = plt.subplots(figsize=(6.5, 4.5), tight_layout=True)
    for i, (label, channel) in enumerate(zip(pattern.labels, pattern.channels)):
        axis.plot(pattern.grid.theta, channel, '-', color=palete[i], linewidth=1., label=label)
    if theta_target is not None:
        axis.axvline(theta_target, linestyle='--', linewidth=0.8, color=palete[3], label='target')
    axis.set_xlabel('Detection angle [rad]')
    axis.set_ylabel('Intensity')
    axis.set_ylim(bottom=0)
    axis.minorticks_on()
    axis.legend(loc='upper right')
    return fig, axis


def plot_loss_curve(history):
    '''
    Plots the loss of every training epoch and the best-so-far loss.
    '''
    palete = sns.color_palette('deep')
    df = history.to_dataframe()
    fig, axis = plt.subplots(figsize=(5.5, 4.5), tight_layout=True)
    if len(df):
        axis.plot(df['epoch'], df['loss'], '-', color=palete[0], label='loss')
        axis.plot(df['epoch'], df['loss'].cummin(), '--', color=palete[2], label='best so far')
        axis.legend(loc='upper right')
    axis.set_xlabel('Epoch')
    axis.set_ylabel('Loss')
    axis.minorticks_on()
    return fig, axis


def plot_steering_comparison(result):
    '''
    Plots the classical pattern of equal in-phase sources next to the steered
    pattern, both normalized, with the single-slit envelope and the target.
    '''
    palete = sns.color_palette('colorblind')
    geom = result.spec.geom
    theta = result.final_pattern.grid.theta
    classical = n_slit_intensity(geom, theta)
    steered = result.final_pattern.channels[0]

    fig, axis = plt.subplots(figsize=(6.5, 4.5), tight_layout=True)
    axis.plot(theta, sinc_envelope(beta(geom, theta)), ':', color='k', linewidth=0.8, label='envelope')
    axis.plot(theta, classical / classical.max(), '-', color=palete[0], linewidth=1., label='classical')
    if steered.max() > 0:
        axis.plot(theta, steered / steered.max(), '-', color=palete[1], linewidth=1., label='steered')
    axis.axvline(result.spec.theta_target, linestyle='--', linewidth=0.8, color=palete[3], label='target')
    axis.set_xlabel('Detection angle [rad]')
    axis.set_ylabel('Normalized intensity')
    axis.set_title(f'Target {result.spec.theta_target:.4f} rad | '
                   f'peak {result.peak_angle:.4f} rad | $\\Delta\\phi$ = {result.delta_phi:.4f} rad',
                   fontsize=10)
    axis.legend(loc='upper right')
    return fig, axis


def save_figure(fig, path):
    '''
    Saves a figure as svg (no date in the metadata) and closes it.
    '''
    try:
        return atomic_write(path, lambda f: fig.savefig(f, format='svg', metadata={'Date': None}))
    finally:
        plt.close(fig)
