"""Dense real-symmetric eigendecomposition with degeneracy grouping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_RTOL = 1e-12
DEFAULT_DEGENERACY_RTOL = 1e-9


class EigenSolveError(RuntimeError):
    """Raised when the eigensolver does not converge."""

    def __init__(self, message: str, off_diagonal_norm: float | None = None):
        super().__init__(message)
        self.off_diagonal_norm = off_diagonal_norm


class NotSymmetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EigenSystem:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # column j belongs to values[j]
    degeneracy_groups: tuple[range, ...]
    tolerance_used: float

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    def group_of(self, j: int) -> range:
        for g in self.degeneracy_groups:
            if j in g:
                return g
        raise IndexError(j)


def group_degeneracies(values: np.ndarray, tau: float) -> list[range]:
    """Split ascending ``values`` into maximal runs whose consecutive gaps are <= ``tau``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    cuts = np.flatnonzero(np.diff(values) > tau) + 1
    bounds = [0, *cuts.tolist(), values.size]
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def default_tolerance(values: np.ndarray) -> float:
    spread = float(values[-1] - values[0]) if len(values) else 0.0
    # tiny floor keeps the zero-spread (scalar multiple of identity) case grouped
    return DEFAULT_DEGENERACY_RTOL * max(spread, np.finfo(float).tiny)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def check_symmetric(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise NotSymmetricError(f"expected a non-empty square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - h.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetricError(f"matrix is not symmetric (max |H - H^T| = {asym:.3e})")
    return h


def jacobi_eigh(
    h: np.ndarray, max_sweeps: int = 100, tol: float = 1e-14
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; slow but simple, used as a fallback.

    Raises ``EigenSolveError`` carrying the remaining off-diagonal Frobenius
    norm if ``max_sweeps`` is exhausted.
    """
    a = np.array(h, dtype=float)
    m = a.shape[0]
    v = np.eye(m)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    off = 0.0
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale:
            order = np.argsort(np.diag(a), kind="stable")
            return np.diag(a)[order], v[:, order]
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise EigenSolveError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps "
        f"(off-diagonal norm {off:.3e})",
        off_diagonal_norm=float(off),
    )


def eig_sym(
    h: np.ndarray, tau_deg: float | None = None, method: str = "lapack"
) -> EigenSystem:
    """Eigendecomposition of a real symmetric matrix.

    ``method="lapack"`` uses ``numpy.linalg.eigh`` and falls back to cyclic
    Jacobi if LAPACK fails to converge; ``method="jacobi"`` forces the fallback.
    Eigenvectors are sign-fixed so that each column's largest-magnitude entry
    is positive. ``tau_deg`` defaults to ``1e-9 * (max - min)`` and must stay
    well below any physical splitting (e.g. the atom-field coupling).
    """
    h = check_symmetric(h)
    hs = 0.5 * (h + h.T)
    if method == "lapack":
        try:
            values, vectors = np.linalg.eigh(hs)
        except np.linalg.LinAlgError:
            values, vectors = jacobi_eigh(hs)
    elif method == "jacobi":
        values, vectors = jacobi_eigh(hs)
    else:
        raise ValueError(f"unknown method {method!r}")

    vectors = _fix_signs(vectors)
    tau = default_tolerance(values) if tau_deg is None else float(tau_deg)
    if tau <= 0:
        raise ValueError("tau_deg must be positive")
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(
        values=values,
        vectors=vectors,
        degeneracy_groups=tuple(group_degeneracies(values, tau)),
        tolerance_used=tau,
    )


def spectrum_document(eig: EigenSystem, include_vectors: bool = False) -> dict:
    """JSON-ready spectrum; groups are written as inclusive ``[first, last]`` pairs."""
    doc = {
        "values": [float(x) for x in eig.values],
        "degeneracy_groups": [[g.start, g.stop - 1] for g in eig.degeneracy_groups],
        "tolerance_used": eig.tolerance_used,
    }
    if include_vectors:
        doc["vectors"] = eig.vectors.tolist()
    return doc
