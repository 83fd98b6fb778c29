'''
Layered intensity matrices of the two-qubit source.

The first layer is the outer product of two basis-intensity vectors; every
further layer is the Kronecker square of the previous one, so the side length
squares from layer to layer (4, 16, 256, 65536, ...).
'''

import numpy as np

from PyFringe.config import layer_bytes_cap, layer_side_cap
from PyFringe.exceptions import DomainError, ResourceLimitError


class IntensityMatrix:
    '''
    A nonnegative intensity matrix and its layer index k (starting at 1).
    '''
    def __init__(self, entries, layer_index):
        entries = np.asarray(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f'an intensity matrix must be square, got shape {entries.shape}')
        if np.any(entries < 0):
            raise DomainError('intensity matrix entries must be nonnegative')
        if layer_index < 1:
            raise DomainError(f'layer index starts at 1, got {layer_index}')
        self.entries = entries
        self.layer_index = int(layer_index)

    @property
    def side(self):
        return self.entries.shape[0]

    def total(self):
        return float(self.entries.sum())

    def __str__(self):
        return f'<IntensityMatrix layer={self.layer_index} side={self.side} sum={self.total():.12f}>'


def layer_side(k):
    '''
    Returns the side length of layer k: 4 for k=1, squared at every next layer.
    '''
    if k < 1:
        raise DomainError(f'layer index starts at 1, got {k}')
    return 4**(2**(k - 1))


def _format_bytes(n_bytes):
    return f'{n_bytes / 2**30:.1f} GiB' if n_bytes >= 2**30 else f'{n_bytes / 2**20:.1f} MiB'


def _check_cap(k, side, max_side, max_bytes):
    if side > max_side:
        raise ResourceLimitError(f'layer {k} has side {side}, above the cap of {max_side}')
    n_bytes = side**2 * np.dtype(float).itemsize
    if n_bytes > max_bytes:
        raise ResourceLimitError(f'layer {k} ({side}x{side}) needs {_format_bytes(n_bytes)}, '
                                 f'above the memory cap of {_format_bytes(max_bytes)}')


def layer1(iv1, iv2):
    '''
    Returns the first layer, entry (r, c) = iv1[r] iv2[c].
    '''
    return IntensityMatrix(np.outer(iv1.to_array(), iv2.to_array()), 1)


def next_layer(m, max_side=layer_side_cap, max_bytes=layer_bytes_cap):
    '''
    Returns the Kronecker square m (x) m as the next layer.
    '''
    k, side = m.layer_index + 1, m.side**2
    _check_cap(k, side, max_side, max_bytes)
    try:
        entries = np.kron(m.entries, m.entries)
    except MemoryError:
        raise ResourceLimitError(f'layer {k} ({side}x{side}) does not fit in memory')
    return IntensityMatrix(entries, k)


def build_layers(iv1, iv2, k, max_side=layer_side_cap, max_bytes=layer_bytes_cap):
    '''
    Returns the layers 1..k built from the two intensity vectors.

    Both caps are checked for layer k before anything is allocated.
    '''
    _check_cap(k, layer_side(k), max_side, max_bytes)
    layers = [layer1(iv1, iv2)]
    for _ in range(k - 1):
        layers.append(next_layer(layers[-1], max_side, max_bytes))
    return layers
