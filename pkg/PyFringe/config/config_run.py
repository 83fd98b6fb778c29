'''
Configuration for the runs

Every entry of a section gives the default ('def'), the python type used to
parse the value from a config file, optional bounds ('min', 'max', inclusive
unless 'min_open'/'max_open' is set) and the unit.
Lengths are in units of the wavelength unless stated otherwise.
'''

############################################################
# Slit geometry (default steering geometry: lambda=1, d=12.5, a=2, N=2)

config_geometry = {
    'a': {'def': 2., 'type': float, 'min': 0., 'min_open': True, 'unit': '[length]'},
    'd': {'def': 12.5, 'type': float, 'min': 0., 'min_open': True, 'unit': '[length]'},
    'n_slits': {'def': 2, 'type': int, 'min': 1, 'unit': ''},
    'lambda': {'def': 1., 'type': float, 'min': 0., 'min_open': True, 'unit': '[length]'},
}

############################################################
# Source qubits (initial Bloch angles of the first training epoch)

config_source = {
    'mode': {'def': 'fixed', 'type': str, 'choices': ['fixed', 'train'], 'unit': ''},
    'theta1': {'def': 1.6708, 'type': float, 'unit': '[rad]'},
    'phi1': {'def': 0.1, 'type': float, 'unit': '[rad]'},
    'theta2': {'def': 1.6708, 'type': float, 'unit': '[rad]'},
    'phi2': {'def': -0.1, 'type': float, 'unit': '[rad]'},
}

############################################################
# Optimizer

config_optimizer = {
    'method': {'def': 'adam', 'type': str, 'choices': ['adam', 'sgd'], 'unit': ''},
    'learning_rate': {'def': 0.05, 'type': float, 'min': 0., 'min_open': True, 'unit': ''},
    'beta1': {'def': 0.9, 'type': float, 'min': 0., 'max': 1., 'max_open': True, 'unit': ''},
    'beta2': {'def': 0.999, 'type': float, 'min': 0., 'max': 1., 'max_open': True, 'unit': ''},
    'epsilon': {'def': 1e-8, 'type': float, 'min': 0., 'min_open': True, 'unit': ''},
    'max_epochs': {'def': 200, 'type': int, 'min': 0, 'unit': ''},
}

############################################################
# Experiment (detection grid and steering target)

config_experiment = {
    'theta_target': {'def': 0.04, 'type': float, 'unit': '[rad]'},
    'grid_min': {'def': -0.1, 'type': float, 'unit': '[rad]'},
    'grid_max': {'def': 0.1, 'type': float, 'unit': '[rad]'},
    'grid_count': {'def': 2001, 'type': int, 'min': 3, 'unit': ''},
    'peak_tolerance': {'def': 1e-3, 'type': float, 'min': 0., 'min_open': True, 'unit': '[rad]'},
    'model': {'def': 'eq27', 'type': str, 'choices': ['eq27', 'eq18'], 'unit': ''},
    'grating': {'def': 'textbook', 'type': str, 'choices': ['textbook', 'paper-literal'], 'unit': ''},
}

############################################################
# Output

config_output = {
    'directory': {'def': 'pyfringe_output', 'type': str, 'unit': ''},
    'formats': {'def': 'csv,json,svg', 'type': str, 'unit': ''},
}

config_dict = {'geometry': config_geometry,
               'source': config_source,
               'optimizer': config_optimizer,
               'experiment': config_experiment,
               'output': config_output}

# Largest side length allowed for an intensity layer matrix
layer_side_cap = 65536

# Largest memory footprint of one layer matrix, in bytes of float64 entries
layer_bytes_cap = 2**31

# Finite-difference step and the acceptance threshold of the gradient check
gradcheck_step = 1e-6
gradcheck_rtol = 1e-6
