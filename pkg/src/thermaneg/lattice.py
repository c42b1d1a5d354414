"""Coupling matrices and spin Hamiltonians for ring and star geometries.

Two model kinds are supported:

* ``harmonic``: a chain of unit-mass oscillators with quadratic coupling,
  fully described by a symmetric positive-definite potential matrix V.
* ``spin_half``: spin-1/2 particles with an XX exchange term on each
  bond and a uniform transverse field h, stored as a dense matrix.

Topologies are a nearest-neighbour ring (``ring_nn``) and a star in
which one central site couples to every other site (``star``).  Site 1
is the hub of the star.  Sites are numbered from 1 in documentation and
I/O; internal arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MAX_SPIN_SITES_DEFAULT",
    "ModelSpec",
    "PotentialMatrix",
    "SpinHamiltonian",
    "topology_edges",
    "build_ring_potential",
    "build_star_potential",
    "build_potential",
    "build_spin_hamiltonian",
]

MAX_SPIN_SITES_DEFAULT = 12

_KINDS = ("harmonic", "spin_half")
_TOPOLOGIES = ("ring_nn", "star")


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of one model instance.

    Parameters
    ----------
    kind:
        ``"harmonic"`` or ``"spin_half"``.
    topology:
        ``"ring_nn"`` or ``"star"``.
    n_sites:
        Number of particles.  Builders impose their own minima (the
        ring potential needs at least 2 sites, the star at least 2);
        a single spin with only the field term is allowed.
    c:
        Harmonic coupling strength.  The ring potential requires
        0 <= c < 1/2 to stay positive definite, the star requires
        c > 0.  Unused for spin models, whose exchange coupling is
        fixed at unity.
    h:
        Transverse field of the spin model.  Ignored for harmonic
        models.
    """

    kind: str
    topology: str
    n_sites: int
    c: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {_KINDS}")
        if self.topology not in _TOPOLOGIES:
            raise ValueError(
                f"unknown topology {self.topology!r}; expected one of {_TOPOLOGIES}"
            )
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be at least 1, got {self.n_sites}")
        if self.kind == "harmonic":
            if self.topology == "ring_nn" and not 0.0 <= self.c < 0.5:
                raise ValueError(
                    f"harmonic ring coupling must satisfy 0 <= c < 1/2, got c={self.c}"
                )
            if self.topology == "star" and self.c <= 0.0:
                raise ValueError(f"harmonic star coupling must be positive, got c={self.c}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PotentialMatrix:
    """Symmetric positive-definite coupling matrix of a harmonic model."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        m = self.entries
        if m.shape != (self.n, self.n):
            raise ValueError(f"potential matrix shape {m.shape} does not match n={self.n}")
        if not np.array_equal(m, m.T):
            raise ValueError("potential matrix must be exactly symmetric")
        lam_min = float(np.linalg.eigvalsh(m)[0])
        if lam_min <= 0.0:
            raise ValueError(
                f"potential matrix must be positive definite; minimum eigenvalue {lam_min}"
            )
        _frozen(m)


@dataclass(frozen=True)
class SpinHamiltonian:
    """Dense spin-1/2 Hamiltonian together with its interaction graph.

    The basis convention puts site 1 in the most significant bit of the
    computational-basis index; bit value 0 means the +1 eigenstate of
    sigma_z on that site.
    """

    n: int
    entries: np.ndarray
    edge_list: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.entries.shape != (2**self.n, 2**self.n):
            raise ValueError("spin Hamiltonian dimension does not match site count")
        _frozen(self.entries)


def topology_edges(topology: str, n: int) -> list[tuple[int, int]]:
    """Undirected edge list (0-based, deduplicated) of a topology.

    A 2-site ring collapses to a single bond and a 1-site system has no
    bonds at all.
    """
    if topology == "ring_nn":
        edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n) if i != (i + 1) % n}
        return sorted(edges)
    if topology == "star":
        return [(0, j) for j in range(1, n)]
    raise ValueError(f"unknown topology {topology!r}")


def build_ring_potential(n: int, c: float) -> PotentialMatrix:
    """Circulant ring potential: unit diagonal, -c on both cyclic neighbours.

    For n >= 3 the eigenvalues are 1 - 2c cos(2 pi k / n), so c < 1/2
    keeps the matrix positive definite for every n; the same bound is
    enforced for n = 2, where the two cyclic neighbours coincide and
    the matrix is [[1, -c], [-c, 1]] with eigenvalues 1 -+ c.
    """
    if n < 2:
        raise ValueError(f"ring potential needs at least 2 sites, got {n}")
    if not 0.0 <= c < 0.5:
        raise ValueError(f"ring coupling must satisfy 0 <= c < 1/2, got {c}")
    v = np.eye(n)
    for i in range(n):
        v[i, (i + 1) % n] = -c
        v[(i + 1) % n, i] = -c
    return PotentialMatrix(n=n, entries=v)


def build_star_potential(n: int, c: float) -> PotentialMatrix:
    """Star potential: hub on site 1 coupled equally to all outer sites.

    The hub diagonal is 1 + (n-1)c, outer diagonals are 1 + c, hub rows
    and columns carry -c, and outer sites do not couple to each other.
    """
    if n < 2:
        raise ValueError(f"star potential needs at least 2 sites, got {n}")
    if c <= 0.0:
        raise ValueError(f"star coupling must be positive, got {c}")
    v = np.eye(n) * (1.0 + c)
    v[0, 0] = 1.0 + (n - 1) * c
    v[0, 1:] = -c
    v[1:, 0] = -c
    return PotentialMatrix(n=n, entries=v)


def build_potential(spec: ModelSpec) -> PotentialMatrix:
    """Potential matrix of a harmonic ModelSpec."""
    if spec.kind != "harmonic":
        raise ValueError(f"expected a harmonic model, got kind={spec.kind!r}")
    if spec.topology == "ring_nn":
        return build_ring_potential(spec.n_sites, spec.c)
    return build_star_potential(spec.n_sites, spec.c)


def build_spin_hamiltonian(
    spec: ModelSpec, max_sites: int = MAX_SPIN_SITES_DEFAULT
) -> SpinHamiltonian:
    """Dense XX Hamiltonian with transverse field on the model's topology.

    Each bond (i, j) contributes the exchange term
    -(sigma_x sigma_x + sigma_y sigma_y), which acts on the pair as
    -2(|01><10| + |10><01|), and every site carries h sigma_z.  The
    matrix is real symmetric in the computational basis.

    ``max_sites`` caps the dense dimension; requests beyond it raise
    ValueError rather than attempting a 2^n x 2^n allocation.
    """
    if spec.kind != "spin_half":
        raise ValueError(f"expected a spin model, got kind={spec.kind!r}")
    n = spec.n_sites
    if n > max_sites:
        raise ValueError(
            f"spin model with {n} sites exceeds the configured maximum of {max_sites}"
        )
    edges = topology_edges(spec.topology, n)
    dim = 2**n
    ham = np.zeros((dim, dim))
    h = spec.h
    for b in range(dim):
        bits = [(b >> (n - 1 - i)) & 1 for i in range(n)]
        if h != 0.0:
            ham[b, b] += h * sum(1 - 2 * x for x in bits)
        for (i, j) in edges:
            if bits[i] != bits[j]:
                flipped = b ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j))
                ham[flipped, b] += -2.0
    return SpinHamiltonian(n=n, entries=ham, edge_list=tuple(edges))
