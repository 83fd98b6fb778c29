'''
When PyFringe is installed in an enviroment,
with this script you can directly call the package as an excecutable.
$ python3 -m pip install ./
$ pyfringe steer --target 0.04 --out results

Exit codes: 0 ok, 1 gradient check failed, 2 invalid configuration,
3 file error, 4 target not reached, 5 training diverged.
'''
import functools
import logging
import sys

import click
import numpy as np
import pandas as pd
import pytest

from PyFringe.bloch_qubits import intensities, two_qubit_state
from PyFringe.config import config_experiment, layer_bytes_cap, layer_side_cap
from PyFringe.diff_engine import (gradient_check, gradient_check_passed,
                                  random_params)
from PyFringe.exceptions import (ConfigError, DomainError,
                                 TrainingDivergedError)
from PyFringe.intensity_layers import build_layers
from PyFringe.steering import run_steering, sweep_targets
from PyFringe.utils import (RunConfig, plot_loss_curve, plot_pattern,
                            plot_steering_comparison, save_figure,
                            write_dataframe_csv, write_history_csv, write_json,
                            write_layer_csv, write_pattern_csv)
from PyFringe.version import version as _version
from PyFringe.wave_optics import basis_pattern, scalar_pattern

log = logging.getLogger(__name__)

EXIT_OK, EXIT_GRADCHECK, EXIT_CONFIG, EXIT_IO, EXIT_NOT_REACHED, EXIT_DIVERGED = 0, 1, 2, 3, 4, 5


def exit_codes(func):
    '''
    Maps the PyFringe exceptions raised by a command onto its exit code.
    '''
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            code = func(*args, **kwargs)
        except TrainingDivergedError as err:
            click.echo(f'Error: training diverged: {err}', err=True)
            code = EXIT_DIVERGED
        except (ConfigError, DomainError) as err:
            click.echo(f'Error: invalid configuration: {err}', err=True)
            code = EXIT_CONFIG
        except OSError as err:
            click.echo(f'Error: could not write the output: {err}', err=True)
            code = EXIT_IO
        sys.exit(code or EXIT_OK)
    return wrapper


def run_options(func):
    '''
    The options shared by the commands that read a run configuration.
    '''
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                     help='Run configuration file (section.key = value lines).'),
        click.option('--model', type=click.Choice(config_experiment['model']['choices']),
                     help='Intensity model: eq27 (scalar, steering) or eq18 (basis-resolved).'),
        click.option('--grating', type=click.Choice(config_experiment['grating']['choices']),
                     help='N-slit grating factor of the basis model.'),
        click.option('--target', type=float, help='Target detection angle [rad].'),
        click.option('--epochs', type=int, help='Maximum number of training epochs.'),
        click.option('--out', type=click.Path(file_okay=False), help='Output directory.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_config(config_path, model=None, grating=None, target=None, epochs=None, out=None):
    overrides = {'experiment.model': model,
                 'experiment.grating': grating,
                 'experiment.theta_target': target,
                 'optimizer.max_epochs': epochs,
                 'output.directory': out}
    try:
        return RunConfig.from_file(config_path, overrides)
    except FileNotFoundError as err:
        raise ConfigError('--config', f'cannot read {err.filename}')


@click.group()
@click.option('-v', '--verbose', count=True, help='Increase the logging verbosity (-v, -vv).')
def main(verbose):
    logging.basicConfig(level=max(logging.DEBUG, logging.WARNING - 10 * verbose),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


@main.command('simulate')
@run_options
@exit_codes
def simulate(config_path, **flags):
    """Write the far-field pattern of the configured source."""
    config = load_config(config_path, **flags)
    geom, grid = config.geometry(), config.grid()

    if config['source.mode'] == 'train':
        params = run_steering(config.steering_spec()).final_params
    else:
        params = config.source_params()

    if config.model == 'scalar':
        pattern = scalar_pattern(geom, params, grid)
    else:
        pattern = basis_pattern(geom, params, grid, config.grating)

    out = config.output_dir
    if 'csv' in config.formats:
        write_pattern_csv(pattern, out / 'pattern.csv')
    if 'svg' in config.formats:
        fig, _ = plot_pattern(pattern)
        save_figure(fig, out / 'pattern.svg')
    click.echo(f'Pattern ({config.model} model, {len(grid)} angles) written to {out}')
    return EXIT_OK


@main.command('steer')
@run_options
@exit_codes
def steer(config_path, **flags):
    """Train the source angles to place a maximum on the target."""
    config = load_config(config_path, **flags)
    spec = config.steering_spec()
    out = config.output_dir

    try:
        result = run_steering(spec)
    except TrainingDivergedError as err:
        if err.history is not None:
            write_history_csv(err.history, out / 'history.csv')
        raise

    if 'csv' in config.formats:
        write_history_csv(result.history, out / 'history.csv')
        write_pattern_csv(result.final_pattern, out / 'pattern.csv')
    if 'json' in config.formats:
        write_json(result.to_dict(), out / 'result.json')
    if 'svg' in config.formats:
        fig, _ = plot_loss_curve(result.history)
        save_figure(fig, out / 'loss.svg')
        fig, _ = plot_steering_comparison(result)
        save_figure(fig, out / 'steering.svg')

    click.echo(str(result))
    return EXIT_OK if result.success else EXIT_NOT_REACHED


@main.command('gradcheck')
@run_options
@click.option('--n-points', type=click.IntRange(min=1), default=100, show_default=True,
              help='Number of random parameter points.')
@click.option('--seed', type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True,
              help='Seed of the random parameter points.')
@exit_codes
def gradcheck(config_path, n_points, seed, **flags):
    """Compare the analytic gradient with central finite differences."""
    config = load_config(config_path, **flags)
    geom, target = config.geometry(), config['experiment.theta_target']

    report = gradient_check(geom, target, random_params(n_points, seed))
    max_error, passed = gradient_check_passed(report)
    kept = report.loc[~report['excluded']]
    worst = kept.loc[kept['rel_error'].idxmax()] if len(kept) else None
    summary = {'n_points': n_points,
               'seed': seed,
               'n_excluded': int(report['excluded'].sum()),
               'max_rel_error': max_error,
               'worst_point': None if worst is None else {k: float(worst[k])
                                                          for k in ('theta1', 'phi1', 'theta2', 'phi2')},
               'passed': passed}

    out = config.output_dir
    write_dataframe_csv(report, out / 'gradcheck.csv')
    write_json(summary, out / 'gradcheck.json', stamp=False)
    click.echo(f'Maximum relative error {max_error:.3e} over {len(kept)} points: '
               f'{"passed" if passed else "failed"}')
    return EXIT_OK if passed else EXIT_GRADCHECK


@main.command('layers')
@run_options
@click.option('--k', 'k', type=click.IntRange(min=1), default=2, show_default=True,
              help='Number of intensity layers.')
@click.option('--max-side', type=click.IntRange(min=4), default=layer_side_cap, show_default=True,
              help='Largest side length allowed for a layer.')
@click.option('--max-bytes', type=click.IntRange(min=1024), default=layer_bytes_cap, show_default=True,
              help='Largest memory footprint allowed for a layer [bytes].')
@exit_codes
def layers(config_path, k, max_side, max_bytes, **flags):
    """Write the layered intensity matrices of the configured source."""
    config = load_config(config_path, **flags)
    iv = intensities(two_qubit_state(config.source_params()))

    out = config.output_dir
    for layer in build_layers(iv, iv, k, max_side, max_bytes):
        write_layer_csv(layer, out / f'layer_{layer.layer_index}.csv')
    click.echo(f'{k} intensity layers written to {out}')
    return EXIT_OK


@main.command('sweep')
@run_options
@click.option('--targets', type=str, default=None,
              help='Comma separated target angles [rad]; default 11 angles over [-0.05, 0.05].')
@click.option('--jobs', type=click.IntRange(min=1), default=1, show_default=True,
              help='Number of runs executed in parallel.')
@exit_codes
def sweep(config_path, targets, jobs, **flags):
    """Run the steering experiment for many targets."""
    config = load_config(config_path, **flags)
    if targets is None:
        target_list = list(np.linspace(-0.05, 0.05, 11))
    else:
        try:
            target_list = [float(t) for t in targets.split(',') if t.strip()]
        except ValueError:
            raise ConfigError('--targets', f'cannot read {targets!r} as a list of angles')

    results = sweep_targets(config.steering_spec(), target_list, n_jobs=jobs, progress=True)
    rows = []
    for target, result in zip(target_list, results):
        if isinstance(result, Exception):
            rows.append({'target': target, 'success': False, 'peak_angle': np.nan,
                         'delta_phi': np.nan, 'final_loss': np.nan, 'error': str(result)})
        else:
            losses = result.history.losses()
            rows.append({'target': target, 'success': result.success,
                         'peak_angle': result.peak_angle, 'delta_phi': result.delta_phi,
                         'final_loss': losses[-1] if len(losses) else np.nan, 'error': ''})

    summary = pd.DataFrame(rows, columns=['target', 'success', 'peak_angle', 'delta_phi',
                                          'final_loss', 'error'])
    write_dataframe_csv(summary, config.output_dir / 'sweep.csv')
    n_success = int(summary['success'].sum())
    click.echo(f'{n_success} of {len(target_list)} targets reached')
    return EXIT_OK if n_success == len(target_list) else EXIT_NOT_REACHED


@main.command('help')
@click.pass_context
def help(ctx):
    """Print this help message."""
    click.echo(main.get_help(ctx.parent))


@main.command('version')
def version():
    """Print PyFringe's version number."""
    print(f'PyFringe installed version is: {_version}')


@main.command('test')
def main_test():
    """Test PyFringe."""
    pytest.main(['-W', 'ignore', '--pyargs', 'PyFringe'])


if __name__ == '__main__':
    main()
