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

from typing import NamedTuple

import numpy as np

from PyFringe.exceptions import DomainError

HERMITIAN_ATOL = 1e-12
IMAG_RESIDUE_ATOL = 1e-10

basis_labels = ['00', '01', '10', '11']


class BlochAngles(NamedTuple):
    '''
    Polar (theta) and azimuthal (phi) angles of a pure qubit state, in radians.

    The optimizer stores unconstrained reals; use `canonical_angles` to report
    theta in [0, pi] and phi in (-pi, pi].
    '''
    theta: float
    phi: float


class QubitState(NamedTuple):
    '''
    Amplitudes of |0> and |1>. Built from Bloch angles, amp0 is real and nonnegative.
    '''
    amp0: complex
    amp1: complex

    def to_array(self):
        return np.array([self.amp0, self.amp1], dtype=complex)


class TwoQubitState(NamedTuple):
    '''
    Amplitudes of the two-qubit basis states |00>, |01>, |10>, |11>.
    '''
    c00: complex
    c01: complex
    c10: complex
    c11: complex

    def to_array(self):
        return np.array(self, dtype=complex)

    def __str__(self):
        terms = [f'({complex(c):.4f})|{label}>' for c, label in zip(self, basis_labels)]
        return '<TwoQubitState ' + ' + '.join(terms) + '>'


class IntensityVector(NamedTuple):
    '''
    Probabilities (intensities) of the four basis states; they sum to one.
    '''
    i00: float
    i01: float
    i10: float
    i11: float

    def to_array(self):
        return np.array(self, dtype=float)


class QubitParams(NamedTuple):
    '''
    The four trainable Bloch angles of the two source qubits, in radians.
    These are unconstrained reals; nothing is wrapped during training.
    '''
    theta1: float
    phi1: float
    theta2: float
    phi2: float

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (4,):
            raise DomainError(f'expected 4 Bloch angles, got shape {values.shape}')
        _check_finite('Bloch angles', *values)
        return cls(*(float(x) for x in values))

    def to_array(self):
        return np.array(self, dtype=float)

    def qubit1(self):
        return BlochAngles(self.theta1, self.phi1)

    def qubit2(self):
        return BlochAngles(self.theta2, self.phi2)


def _check_finite(name, *values):
    if not np.all(np.isfinite(values)):
        raise DomainError(f'{name} must be finite, got {values}')


def canonical_phase(phi):
    '''
    Maps an angle (or array of angles) into (-pi, pi].
    '''
    return np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)


def canonical_angles(angles):
    '''
    Returns the Bloch angles of the same point on the sphere with theta in [0, pi]
    and phi in (-pi, pi].

    A polar angle beyond pi is folded back (theta -> 2pi - theta), which moves the
    point to the opposite meridian (phi -> phi + pi).
    '''
    _check_finite('Bloch angles', *angles)
    theta = float(np.mod(angles.theta, 2 * np.pi))
    phi = float(angles.phi)
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi = phi + np.pi
    return BlochAngles(theta, float(canonical_phase(phi)))


def bloch_to_state(angles):
    '''
    Returns the qubit state cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>.

    Parameters
    ----------
    angles : `BlochAngles`
        The polar and azimuthal angles in radians.

    Returns
    -------
    `QubitState`
    '''
    _check_finite('Bloch angles', *angles)
    theta, phi = angles
    return QubitState(complex(np.cos(theta / 2)),
                      complex(np.exp(1j * phi) * np.sin(theta / 2)))


def tensor_product(q1, q2):
    '''
    Returns the product state |q1> (x) |q2> over |00>, |01>, |10>, |11>.
    '''
    c = np.kron(q1.to_array(), q2.to_array())
    return TwoQubitState(*(complex(x) for x in c))


def intensities(state):
    '''
    Returns the basis-state intensities |c_mn|^2 of a two-qubit state.
    '''
    return IntensityVector(*(float(x) for x in np.abs(state.to_array())**2))


def two_qubit_state(params):
    '''
    Returns the product state of the two source qubits described by `QubitParams`.
    '''
    return tensor_product(bloch_to_state(params.qubit1()), bloch_to_state(params.qubit2()))


def relative_phase(phi1, phi2):
    '''
    Returns the unwrapped relative phase phi2 - phi1. See `canonical_phase` to
    map it into (-pi, pi].
    '''
    _check_finite('phases', phi1, phi2)
    return phi2 - phi1


def diagonal_hamiltonian(weights):
    '''
    Returns the 4x4 diagonal operator with the given energies of |00>, |01>, |10>, |11>.
    '''
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (4,):
        raise DomainError(f'a two-qubit Hamiltonian needs 4 diagonal weights, got shape {weights.shape}')
    return np.diag(weights).astype(complex)


def energy_expectation(state, h):
    '''
    Returns the real expectation value <psi|H|psi>.

    Parameters
    ----------
    state : `TwoQubitState`
        A unit-norm two-qubit state.
    h : array_like
        A 4x4 Hermitian operator.

    Raises
    ------
    DomainError
        If h is not 4x4 Hermitian within 1e-12, or if the expectation value keeps
        an imaginary part larger than 1e-10.
    '''
    h = np.asarray(h, dtype=complex)
    if h.shape != (4, 4):
        raise DomainError(f'the operator must be 4x4, got shape {h.shape}')
    if not np.allclose(h, h.conj().T, rtol=0, atol=HERMITIAN_ATOL):
        raise DomainError('the operator is not Hermitian')

    psi = state.to_array()
    energy = np.vdot(psi, h @ psi)
    if abs(energy.imag) > IMAG_RESIDUE_ATOL:
        raise DomainError(f'expectation value has an imaginary residue of {energy.imag:.3e}')
    return float(energy.real)


def energy_loss(params, h):
    '''
    The generic energy loss <psi(theta1, phi1, theta2, phi2)|H|psi(...)> evaluated
    directly from the four Bloch angles.
    '''
    return energy_expectation(two_qubit_state(params), h)
