"""Exact thermal states of the spin-1/2 models and their negativity.

Everything here works on dense matrices in the computational basis,
where the XX-with-field Hamiltonians are real symmetric; density
matrices and their partial transposes are then real symmetric too and
a symmetric eigensolver applies throughout.

E_N sums the absolute values of the negative eigenvalues of the
partially transposed state and E_l = log2(1 + E_N).  See the module
docstring of :mod:`thermaneg.gaussian` for how this scale relates to
the one used on the oscillator side.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpinThermalState",
    "SpinModel",
    "thermal_state",
    "partial_transpose",
    "negativity",
]

# Below this an eigenvalue of the partial transpose counts as negative;
# chosen above dense-solver noise at dimension 2^12.
NEGATIVE_EIGENVALUE_CUTOFF = -1e-12
# Eigenstates within this of the minimum energy belong to the ground
# space when forming the T = 0 state.
_GROUND_ATOL = 1e-10


@dataclass(frozen=True)
class SpinThermalState:
    """Normalized Gibbs state of a spin model at one temperature."""

    rho: np.ndarray
    temperature: float
    n: int


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


class SpinModel:
    """One spin Hamiltonian with its eigendecomposition cached.

    The diagonalization is done once; Gibbs states at any temperature
    are then two matrix products away.  The most recent density matrix
    is kept so that sweeps evaluating many partitions at the same
    temperature do not rebuild it per partition.  Safe for concurrent
    use; the cache is guarded by a lock.
    """

    def __init__(self, hamiltonian):
        self.n = hamiltonian.n
        self._evals, self._evecs = np.linalg.eigh(np.asarray(hamiltonian.entries))
        self._last = None
        self._lock = threading.Lock()

    def _weights(self, temperature: float) -> np.ndarray:
        if temperature < 0.0:
            raise ValueError(f"temperature must be nonnegative, got {temperature}")
        shifted = self._evals - self._evals[0]
        if temperature == 0.0:
            w = (shifted <= _GROUND_ATOL).astype(float)
        else:
            w = np.exp(-shifted / temperature)
        return w / w.sum()

    def thermal_rho(self, temperature: float) -> np.ndarray:
        with self._lock:
            if self._last is not None and self._last[0] == temperature:
                return self._last[1]
            w = self._weights(temperature)
            rho = _sym((self._evecs * w) @ self._evecs.T)
            self._last = (temperature, rho)
            return rho

    def thermal_state(self, temperature: float) -> SpinThermalState:
        return SpinThermalState(
            rho=self.thermal_rho(temperature), temperature=temperature, n=self.n
        )

    def negativity_pair(self, temperature: float, partition) -> tuple:
        """(E_N, E_l) across the partition at one temperature."""
        return negativity(self.thermal_rho(temperature), partition)


def thermal_state(hamiltonian, temperature: float) -> SpinThermalState:
    """Gibbs state exp(-H/T), normalized; T = 0 gives the uniform
    mixture over the ground eigenspace (the zero-temperature limit).

    Boltzmann weights are taken relative to the minimum eigenvalue so
    that no exponential ever overflows.
    """
    return SpinModel(hamiltonian).thermal_state(temperature)


def partial_transpose(rho, partition) -> np.ndarray:
    """Transpose the indices of every site labeled +1.

    Involutive and trace preserving; on a real symmetric matrix the
    result is again real symmetric.
    """
    labels = getattr(partition, "labels", partition)
    mat = np.asarray(getattr(rho, "rho", rho))
    n = len(labels)
    dim = mat.shape[0]
    if mat.shape != (dim, dim) or dim != 2**n:
        raise ValueError(
            f"matrix of shape {mat.shape} does not match a {n}-site partition"
        )
    tensor = mat.reshape((2,) * (2 * n))
    perm = list(range(2 * n))
    for i, sign in enumerate(labels):
        if sign > 0:
            perm[i], perm[n + i] = perm[n + i], perm[i]
    return tensor.transpose(perm).reshape(dim, dim)


def negativity(rho, partition) -> tuple:
    """(E_N, E_l) of a state across a partition.

    E_N adds up |eigenvalue| over the spectrum of the partial transpose
    below -1e-12; E_l = log2(1 + E_N).
    """
    spectrum = np.linalg.eigvalsh(partial_transpose(rho, partition))
    negative = spectrum[spectrum < NEGATIVE_EIGENVALUE_CUTOFF]
    e_n = float(-negative.sum()) if negative.size else 0.0
    return (e_n, math.log2(1.0 + e_n))
