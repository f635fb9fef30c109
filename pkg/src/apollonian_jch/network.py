"""Deterministic Apollonian network construction.

Nodes are 1-based in every public result (ids, orbits, exports) to match the
usual figure labelling; arrays are indexed 0-based internally, so node ``k``
lives in row ``k - 1`` of ``adjacency``.

Numbering: nodes 1, 2, 3 form the corner triangle (generation 0), node 4 is the
hub (generation 1), and every later generation adds one node per face of the
previous generation, in face-creation order. A face ``(v1, v2, v3)`` that
receives node ``x`` is replaced by ``(x, v1, v2), (x, v2, v3), (x, v3, v1)``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

# Upper bound on the dense float64 N x N allocation that downstream modules make.
DEFAULT_MEMORY_CAP = 256 * 2**20

Face = tuple[int, int, int]


def node_count(n: int) -> int:
    return (3**n + 5) // 2


def edge_count(n: int) -> int:
    return (3 ** (n + 1) + 3) // 2


@dataclass(frozen=True, eq=False)
class ApollonianNetwork:
    generation: int
    adjacency: np.ndarray
    node_generation: np.ndarray
    faces: tuple[Face, ...]
    # 0-based permutations: rotation (order 3) and reflection (order 2)
    symmetry_generators: tuple[np.ndarray, np.ndarray]
    _group: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def node_count(self) -> int:
        return self.adjacency.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(int)

    @property
    def hub(self) -> int:
        """1-based id of the hub node (the corner node 1 when ``n == 0``)."""
        return 4 if self.generation >= 1 else 1

    def edges(self) -> list[tuple[int, int]]:
        """Edges as 1-based ``(u, v)`` pairs with ``u < v``, sorted."""
        iu, ju = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(i) + 1, int(j) + 1) for i, j in zip(iu, ju)]

    def neighbors(self, k: int) -> list[int]:
        return [int(j) + 1 for j in np.flatnonzero(self.adjacency[k - 1])]

    def nodes_of_generation(self, g: int) -> list[int]:
        return [int(i) + 1 for i in np.flatnonzero(self.node_generation == g)]

    def group_elements(self) -> list[np.ndarray]:
        """All permutations in the group spanned by the two generators (0-based)."""
        if not self._group:
            n = self.node_count
            identity = np.arange(n)
            seen = {identity.tobytes(): identity}
            frontier = [identity]
            while frontier:
                nxt = []
                for p in frontier:
                    for g in self.symmetry_generators:
                        q = g[p]
                        key = q.tobytes()
                        if key not in seen:
                            seen[key] = q
                            nxt.append(q)
                frontier = nxt
            self._group.extend(seen[k] for k in sorted(seen))
        return list(self._group)

    def automorphism_between(self, k: int, k2: int) -> np.ndarray | None:
        """A group element (0-based permutation) sending node ``k`` to ``k2``."""
        for perm in self.group_elements():
            if perm[k - 1] == k2 - 1:
                return perm
        return None


def generate(n: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> ApollonianNetwork:
    """Build the generation-``n`` Apollonian network."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"generation must be a non-negative integer, got {n!r}")
    n = int(n)
    size = node_count(n)
    if size * size * 8 > memory_cap:
        raise MemoryError(
            f"generation {n} needs a {size}x{size} float64 matrix "
            f"({size * size * 8} bytes), above the cap of {memory_cap} bytes"
        )

    adjacency = np.zeros((size, size), dtype=np.int8)
    node_generation = np.zeros(size, dtype=int)
    for u, v in itertools.combinations(range(3), 2):
        adjacency[u, v] = adjacency[v, u] = 1

    rotation = np.full(size, -1)
    reflection = np.full(size, -1)
    rotation[:3] = [1, 2, 0]
    reflection[:3] = [1, 0, 2]

    faces: list[Face] = [(0, 1, 2)]
    created: list[Face] = list(faces)
    nxt_id = 3
    for g in range(1, n + 1):
        # node sitting inside each face, keyed by vertex set, to carry the symmetries
        child_of: dict[frozenset[int], int] = {}
        new_faces: list[Face] = []
        for face in faces:
            x = nxt_id
            nxt_id += 1
            node_generation[x] = g
            for v in face:
                adjacency[x, v] = adjacency[v, x] = 1
            child_of[frozenset(face)] = x
            v1, v2, v3 = face
            new_faces += [(x, v1, v2), (x, v2, v3), (x, v3, v1)]
        for face, x in child_of.items():
            rotation[x] = child_of[frozenset(int(rotation[v]) for v in face)]
            reflection[x] = child_of[frozenset(int(reflection[v]) for v in face)]
        faces = new_faces
        created += new_faces

    adjacency.setflags(write=False)
    node_generation.setflags(write=False)
    rotation.setflags(write=False)
    reflection.setflags(write=False)
    return ApollonianNetwork(
        generation=n,
        adjacency=adjacency,
        node_generation=node_generation,
        faces=tuple(tuple(int(v) + 1 for v in f) for f in created),
        symmetry_generators=(rotation, reflection),
    )


def degree_census(net: ApollonianNetwork) -> dict[int, int]:
    counts = Counter(int(d) for d in net.degrees)
    return dict(sorted(counts.items()))


def expected_degree_census(n: int) -> dict[int, int]:
    """Degree census predicted by the recursive construction, for ``n >= 1``."""
    census: Counter[int] = Counter()
    for m in range(1, n + 1):
        # nodes from generation m: 3^(m-1) of them, degree 3 * 2^(n-m)
        census[3 * 2 ** (n - m)] += 3 ** (m - 1)
    census[2**n + 1] += 3
    return dict(sorted(census.items()))


@dataclass(frozen=True)
class OrbitPartition:
    classes: tuple[tuple[int, ...], ...]  # 1-based node ids, each class sorted
    class_of: tuple[int, ...]  # class index per node, 0-based node order

    def orbit_of(self, k: int) -> tuple[int, ...]:
        return self.classes[self.class_of[k - 1]]


def orbits(net: ApollonianNetwork) -> OrbitPartition:
    size = net.node_count
    parent = list(range(size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in net.symmetry_generators:
        for i in range(size):
            a, b = find(i), find(int(perm[i]))
            if a != b:
                parent[max(a, b)] = min(a, b)

    roots: dict[int, list[int]] = {}
    for i in range(size):
        roots.setdefault(find(i), []).append(i + 1)
    classes = tuple(tuple(members) for _, members in sorted(roots.items()))
    class_of = [0] * size
    for c, members in enumerate(classes):
        for k in members:
            class_of[k - 1] = c
    return OrbitPartition(classes=classes, class_of=tuple(class_of))


def is_automorphism(adjacency: np.ndarray, perm: np.ndarray) -> bool:
    perm = np.asarray(perm)
    return bool(np.array_equal(adjacency[np.ix_(perm, perm)], adjacency))


def _check_adjacency(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    if not np.array_equal(a, a.T) or np.any(np.diag(a)):
        raise ValueError("adjacency must be symmetric with zero diagonal")
    return a.astype(np.int8)


def is_isomorphic_to(
    net: ApollonianNetwork | np.ndarray, other: np.ndarray
) -> tuple[bool, list[int] | None]:
    """Backtracking isomorphism test for small graphs.

    Returns ``(True, witness)`` where ``witness[i] = j`` (both 1-based) maps
    node ``i`` of ``net`` onto node ``j`` of ``other``, or ``(False, None)``.
    """
    a = _check_adjacency(net.adjacency if isinstance(net, ApollonianNetwork) else net)
    b = _check_adjacency(other)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    size = a.shape[0]
    deg_a, deg_b = a.sum(1), b.sum(1)
    if sorted(deg_a) != sorted(deg_b):
        return False, None

    order = sorted(range(size), key=lambda i: -deg_a[i])
    mapping = [-1] * size
    used = [False] * size

    def extend(pos: int) -> bool:
        if pos == size:
            return True
        i = order[pos]
        for j in range(size):
            if used[j] or deg_b[j] != deg_a[i]:
                continue
            if all(a[i, p] == b[j, mapping[p]] for p in order[:pos]):
                mapping[i], used[j] = j, True
                if extend(pos + 1):
                    return True
                mapping[i], used[j] = -1, False
        return False

    if extend(0):
        return True, [m + 1 for m in mapping]
    return False, None


# Adjacency printed for the n = 2 network, in its own node labelling.
A2_REFERENCE = np.array(
    [
        [0, 1, 1, 1, 1, 0, 1],
        [1, 0, 1, 1, 0, 1, 1],
        [1, 1, 0, 1, 0, 0, 0],
        [1, 1, 1, 0, 1, 1, 1],
        [1, 0, 0, 1, 0, 0, 1],
        [0, 1, 0, 1, 0, 0, 1],
        [1, 1, 0, 1, 1, 1, 0],
    ],
    dtype=np.int8,
)
