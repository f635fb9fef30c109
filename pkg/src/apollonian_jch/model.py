"""Single-excitation Jaynes-Cummings-Hubbard Hamiltonians on an Apollonian network.

Units: hbar = 1, energies in an arbitrary common unit, time in inverse energy.
Basis ordering is node-major and interleaved: photonic |l, g, 1> sits at index
``2 (l - 1)`` and atomic |l, e, 0> at ``2 (l - 1) + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import ApollonianNetwork

PAULI_Z = np.diag([1.0, -1.0])
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PHOTON_PROJECTOR = np.diag([1.0, 0.0])  # (I + Z) / 2


@dataclass(frozen=True)
class SystemParams:
    omega_f: float = 0.0
    omega_a: float = 0.0
    beta: float = 1e-3
    kappa: float = 1.0

    def __post_init__(self):
        for name in ("omega_f", "omega_a", "beta", "kappa"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.beta < 0 or self.kappa < 0:
            raise ValueError("beta and kappa must be non-negative")

    @property
    def delta(self) -> float:
        """Detuning omega_f - omega_a."""
        return self.omega_f - self.omega_a

    def as_dict(self) -> dict[str, float]:
        return {
            "omega_f": self.omega_f,
            "omega_a": self.omega_a,
            "beta": self.beta,
            "kappa": self.kappa,
        }


@dataclass(frozen=True)
class BasisMap:
    node_count: int

    @property
    def dimension(self) -> int:
        return 2 * self.node_count

    def photonic(self, k: int) -> int:
        self._check(k)
        return 2 * (k - 1)

    def atomic(self, k: int) -> int:
        self._check(k)
        return 2 * (k - 1) + 1

    def label(self, index: int) -> tuple[int, str]:
        if not 0 <= index < self.dimension:
            raise IndexError(index)
        return index // 2 + 1, ("ph", "at")[index % 2]

    def _check(self, k: int) -> None:
        if not 1 <= k <= self.node_count:
            raise ValueError(f"node {k} outside 1..{self.node_count}")


@dataclass(frozen=True, eq=False)
class ExcitationState:
    amplitudes: np.ndarray
    node: int | None = None
    alpha: float | None = None

    def __post_init__(self):
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalised (norm^2 = {norm!r})")


def basis_for(net: ApollonianNetwork) -> BasisMap:
    return BasisMap(net.node_count)


def build_field_hamiltonian(
    net: ApollonianNetwork, omega_f: float = 0.0, kappa: float = 1.0
) -> np.ndarray:
    n = net.node_count
    return omega_f * np.eye(n) - kappa * net.adjacency.astype(float)


def build_jch_hamiltonian(net: ApollonianNetwork, params: SystemParams) -> np.ndarray:
    """(Delta/2) I (x) Z + beta I (x) X - kappa A (x) (I + Z)/2 in the interleaved basis."""
    n = net.node_count
    eye = np.eye(n)
    adj = net.adjacency.astype(float)
    h = (
        0.5 * params.delta * np.kron(eye, PAULI_Z)
        + params.beta * np.kron(eye, PAULI_X)
        - params.kappa * np.kron(adj, PHOTON_PROJECTOR)
    )
    return h


def localized_state(basis: BasisMap, k: int, alpha: float) -> ExcitationState:
    """cos(alpha) |k, g, 1> + sin(alpha) |k, e, 0>."""
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[basis.photonic(k)] = math.cos(alpha)
    amps[basis.atomic(k)] = math.sin(alpha)
    return ExcitationState(amps, node=k, alpha=alpha)


def single_cavity_levels(params: SystemParams) -> np.ndarray:
    """The two eigenvalues of the isolated-cavity 2x2 block, ascending."""
    r = math.hypot(0.5 * params.delta, params.beta)
    return np.array([-r, r])
