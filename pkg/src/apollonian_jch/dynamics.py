"""Exact spectral time evolution, localisation measures and long-time averages."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import EigenSystem
from .model import BasisMap, ExcitationState

# Upper bound on phase advance of the fastest eigenmode between two samples.
MAX_PHASE_STEP = 0.5
# Complex work-array budget per chunk of time samples (elements).
_CHUNK_ELEMENTS = 2_000_000


class HubModeError(RuntimeError):
    """The most localised field mode is not an isolated eigenvalue."""


@dataclass(frozen=True, eq=False)
class OccupationSeries:
    times: np.ndarray
    p_ph: np.ndarray  # (times, N)
    p_at: np.ndarray  # (times, N)
    initial: dict = field(default_factory=dict)

    @property
    def total(self) -> np.ndarray:
        return self.p_ph.sum(axis=1) + self.p_at.sum(axis=1)


@dataclass(frozen=True, eq=False)
class AverageMatrix:
    chi_ph: np.ndarray  # row k = initial node, column l = observed node
    chi_at: np.ndarray
    alpha: float


@dataclass(frozen=True)
class HubMode:
    frequency: float
    vector: np.ndarray
    participation: float
    index: int


def time_grid(t_max: float, eig: EigenSystem, min_samples: int = 401) -> np.ndarray:
    """Uniform grid on [0, t_max] fine enough that ``max|E| * dt <= 0.5``."""
    e_max = float(np.max(np.abs(eig.values)))
    needed = math.ceil(t_max * e_max / MAX_PHASE_STEP) + 1
    return np.linspace(0.0, t_max, max(min_samples, needed))


def _amplitudes(eig: EigenSystem, psi0: np.ndarray, times: np.ndarray):
    """Yield ``(slice, amplitudes)`` with amplitudes shaped (D, chunk)."""
    coeffs = eig.vectors.T @ psi0
    chunk = max(1, _CHUNK_ELEMENTS // max(1, eig.dimension))
    for start in range(0, times.size, chunk):
        sl = slice(start, min(start + chunk, times.size))
        phases = np.exp(-1j * np.outer(eig.values, times[sl]))
        yield sl, eig.vectors @ (coeffs[:, None] * phases)


def evolve(
    eig: EigenSystem, basis: BasisMap, psi0: ExcitationState, times
) -> OccupationSeries:
    """Occupation probabilities of ``exp(-iHt) psi0`` on every node and component."""
    amps0 = np.asarray(psi0.amplitudes, dtype=complex)
    if amps0.shape != (eig.dimension,) or basis.dimension != eig.dimension:
        raise ValueError(
            f"dimension mismatch: state {amps0.shape}, eigensystem {eig.dimension}, "
            f"basis {basis.dimension}"
        )
    times = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    n = basis.node_count
    p_ph = np.empty((times.size, n))
    p_at = np.empty((times.size, n))
    for sl, amps in _amplitudes(eig, amps0, times):
        prob = amps.real**2 + amps.imag**2
        p_ph[sl] = prob[0::2].T
        p_at[sl] = prob[1::2].T
    return OccupationSeries(
        times=times,
        p_ph=p_ph,
        p_at=p_at,
        initial={"node": psi0.node, "alpha": psi0.alpha},
    )


def overall(series: OccupationSeries) -> tuple[np.ndarray, np.ndarray]:
    return series.p_ph.sum(axis=1), series.p_at.sum(axis=1)


def participation_ratio(state) -> float:
    """1 / sum_i |<i|phi>|^4: 1 for a single site, M for a uniform state."""
    state = np.asarray(state)
    prob = np.abs(state) ** 2
    if abs(prob.sum() - 1.0) > 1e-10:
        raise ValueError(f"state is not normalised (norm^2 = {prob.sum()!r})")
    return float(1.0 / np.sum(prob**2))


def participation_ratios(eig: EigenSystem) -> np.ndarray:
    return 1.0 / np.sum(eig.vectors**4, axis=0)


def find_hub_mode(field_eig: EigenSystem) -> HubMode:
    """Most localised field eigenmode; its eigenvalue must be non-degenerate."""
    xi = participation_ratios(field_eig)
    j = int(np.argmin(xi))
    group = field_eig.group_of(j)
    if len(group) != 1:
        raise HubModeError(
            f"most localised mode (index {j}, xi = {xi[j]:.4g}) lies in a "
            f"{len(group)}-fold degenerate level at {field_eig.values[j]:.6g}"
        )
    return HubMode(
        frequency=float(field_eig.values[j]),
        vector=field_eig.vectors[:, j],
        participation=float(xi[j]),
        index=j,
    )


def _group_projections(eig: EigenSystem, states: np.ndarray) -> np.ndarray:
    """sum over degeneracy groups of |P_g states|^2, shape (D, n_states)."""
    out = np.zeros(states.shape, dtype=float)
    overlaps = eig.vectors.T @ states
    for g in eig.degeneracy_groups:
        block = eig.vectors[:, g.start : g.stop] @ overlaps[g.start : g.stop]
        out += block.real**2 + block.imag**2
    return out


def long_time_average(
    eig: EigenSystem, basis: BasisMap, psi0: ExcitationState
) -> tuple[np.ndarray, np.ndarray]:
    """Infinite-time averages of the photonic and atomic occupations per node."""
    amps0 = np.asarray(psi0.amplitudes)
    if amps0.shape != (eig.dimension,):
        raise ValueError("dimension mismatch between state and eigensystem")
    if np.iscomplexobj(amps0) and not np.any(amps0.imag):
        amps0 = amps0.real
    chi = _group_projections(eig, amps0[:, None])[:, 0]
    return chi[0::2], chi[1::2]


def average_matrix(eig: EigenSystem, basis: BasisMap, alpha: float) -> AverageMatrix:
    """Long-time averages for every localised initial node with the same ``alpha``."""
    n = basis.node_count
    states = np.zeros((basis.dimension, n))
    states[0::2] = math.cos(alpha) * np.eye(n)
    states[1::2] = math.sin(alpha) * np.eye(n)
    chi = _group_projections(eig, states)
    return AverageMatrix(chi_ph=chi[0::2].T.copy(), chi_at=chi[1::2].T.copy(), alpha=alpha)
