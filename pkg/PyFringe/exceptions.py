'''
Exceptions raised by PyFringe.

The library only raises; the command line interface maps these onto exit codes.
'''


class PyFringeError(Exception):
    '''
    Base class for all the PyFringe errors.
    '''


class DomainError(PyFringeError, ValueError):
    '''
    An input lies outside the domain of the operation (non-finite angles,
    non-Hermitian operators, empty peak windows, ...).
    '''


class GeometryError(DomainError):
    '''
    Invalid slit geometry or angle grid. ``field`` names the offending parameter.
    '''

    def __init__(self, field, message):
        self.field = field
        super().__init__(f'{field}: {message}')


class DegenerateSourceError(DomainError):
    '''
    Both per-slit amplitudes are zero, so the visibility is undefined.
    '''


class UnsupportedModelError(DomainError):
    '''
    The requested intensity model does not apply to the given geometry.
    '''


class ResourceLimitError(DomainError):
    '''
    An intensity layer would exceed the configured side-length cap.
    '''


class ConfigError(PyFringeError, ValueError):
    '''
    A run configuration could not be parsed or validated. ``key`` is the dotted key.
    '''

    def __init__(self, key, message):
        self.key = key
        super().__init__(f'{key}: {message}')


class TrainingDivergedError(PyFringeError, RuntimeError):
    '''
    The loss or its gradient became non-finite during training.

    The records collected before the failure are kept in ``history``.
    '''

    def __init__(self, message, history=None):
        self.history = history
        super().__init__(message)
