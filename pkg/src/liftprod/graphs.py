"""Multigraphs, voltage lifts, Cayley graphs and double covers, spectral
profiles, and edge-expansion certificates.

Adjacency convention: a loop contributes 2 to its diagonal entry, parallel
edges add multiplicity.  Oriented edge counts E(S,T) are the quadratic form
ind(S)^T A ind(T), which counts every non-loop edge once per direction and
loops at S-and-T vertices twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, GeneratorSet


@dataclass
class Multigraph:
    vertex_count: int
    edges: list[tuple[int, int]]  # oriented: o(e) = (u, v)

    def __post_init__(self) -> None:
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {e} endpoint out of range")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for u, v in self.edges:
            if u == v:
                a[u, u] += 2
            else:
                a[u, v] += 1
                a[v, u] += 1
        return a

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def is_regular(self) -> int | None:
        d = self.degrees()
        if self.vertex_count and np.all(d == d[0]):
            return int(d[0])
        return None

    def to_edge_list_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def bouquet(w: int) -> Multigraph:
    """B_w: one vertex carrying w loops."""
    return Multigraph(1, [(0, 0)] * w)


def dumbbell(w: int) -> Multigraph:
    """D_w: two vertices joined by w parallel edges, oriented v1 -> v2."""
    return Multigraph(2, [(0, 1)] * w)


@dataclass
class VoltageAssignment:
    group: FiniteGroup
    volts: list[int]  # group element index per edge

    def check_covers(self, g: Multigraph) -> None:
        if len(self.volts) != g.edge_count:
            raise ValueError("voltage assignment does not cover all edges")
        for v in self.volts:
            if not (0 <= v < self.group.order):
                raise ValueError("voltage out of group range")


def derive_lift(base: Multigraph, gamma: VoltageAssignment) -> Multigraph:
    """Left derived graph: edge (e, g) joins (u, g) and (v, gamma(e) * g).

    Vertex (v, g) is indexed v * |G| + g and edge (e, g) as e * |G| + g; the
    free right G-action is (v, g) h = (v, g h) on both cells.
    """
    gamma.check_covers(base)
    n = gamma.group.order
    mul = gamma.group.mul
    edges = []
    for e, (u, v) in enumerate(base.edges):
        s = gamma.volts[e]
        for g in range(n):
            edges.append((u * n + g, v * n + int(mul[s, g])))
    return Multigraph(base.vertex_count * n, edges)


def lift_act(base: Multigraph, group: FiniteGroup, cell: int, h: int) -> int:
    """Right G-action on lifted cell indices: (x, g) h = (x, g h)."""
    n = group.order
    x, g = divmod(cell, n)
    return x * n + int(group.mul[g, h])


def cayley_graph(group: FiniteGroup, gens: GeneratorSet) -> Multigraph:
    """Simple Cayley graph Cay(G, S): edges {g, s g} for s in S.

    Requires a symmetric S with no involutions (s = s^-1) so that edges pair
    up cleanly and the graph is |S|-regular.
    """
    if not gens.symmetric:
        raise ValueError("Cayley graph needs a symmetric generating set")
    for s in gens.elements:
        if int(group.inv[s]) == s:
            raise ValueError("generator of order 2 breaks the simple-edge pairing")
    seen = set()
    edges = []
    for g in range(group.order):
        for s in gens.elements:
            h = int(group.mul[s, g])
            key = (min(g, h), max(g, h))
            if key not in seen:
                seen.add(key)
                edges.append(key)
    return Multigraph(group.order, edges)


def cayley_double_cover(group: FiniteGroup, gens: GeneratorSet) -> Multigraph:
    """Cay2(G, S): the bipartite double cover, realized as the G-lift of D_w.

    Vertices (g, 0) occupy indices [0, |G|) and (g, 1) the next block.  The
    output must be simple; duplicate edges (repeated generators) are
    rejected.
    """
    if not gens.symmetric:
        raise ValueError("double cover needs a symmetric generating set")
    w = len(gens.elements)
    lifted = derive_lift(dumbbell(w), VoltageAssignment(group, list(gens.elements)))
    pairs = [(min(u, v), max(u, v)) for u, v in lifted.edges]
    if len(set(pairs)) != len(pairs):
        raise ValueError("duplicate edges: generating set has repeats")
    return lifted


@dataclass
class SpectralProfile:
    lambda1: float
    lambda2: float
    lambda_abs: float  # max(|lambda_2|, |lambda_n|)
    tolerance: float

    def __post_init__(self) -> None:
        if self.lambda2 > self.lambda1 + self.tolerance:
            raise ValueError("eigenvalue ordering violated")


DENSE_EIG_CAP = 6000


def spectral_profile(g: Multigraph | np.ndarray, cap: int = DENSE_EIG_CAP) -> SpectralProfile:
    """Adjacency eigenvalues via a dense symmetric eigensolver.

    Refuses graphs above the vertex cap; reported tolerance is 1e-6.
    """
    a = g.adjacency() if isinstance(g, Multigraph) else np.asarray(g)
    n = a.shape[0]
    if n > cap:
        raise ValueError(f"graph has {n} vertices, above the dense cap {cap}")
    if n == 0:
        raise ValueError("empty graph has no spectrum")
    ev = np.linalg.eigvalsh(a.astype(np.float64))
    lam1 = float(ev[-1])
    lam2 = float(ev[-2]) if n > 1 else float(ev[-1])
    lam_abs = max(abs(lam2), abs(float(ev[0]))) if n > 1 else 0.0
    return SpectralProfile(lambda1=lam1, lambda2=lam2, lambda_abs=lam_abs,
                           tolerance=1e-6)


@dataclass
class ExpansionCertificate:
    """(a, lam)-edge-expansion claim with its derivation chain."""

    a: float
    lam: float
    derivation: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.a <= 0 or self.lam <= 0:
            raise ValueError("certificate parameters must be positive")


def expansion_certificate(rule: str, **params) -> ExpansionCertificate:
    """Derive an edge-expansion certificate by pure arithmetic.

    Rules (inputs):
      spectral_to_edge (n, w, lam)          -> (lam*n/w, 2*lam)
      cover (cert, group_order)             -> (a, |G|*lam)
      ramanujan_double_cover (n, w)         -> (n/sqrt(w), 8*sqrt(w))
      square (cert, w)                      -> (a/w, 2*lam^2*(1+ln w))
      product_skeleton (cert)               -> (a, 2*lam)
      squared_skeleton (cert, w)            -> (a/(2w), 8*lam^2*(ln w + 2))
    """
    def need(*names):
        missing = [k for k in names if k not in params]
        if missing:
            raise ValueError(f"rule {rule!r} missing inputs: {missing}")

    if rule == "spectral_to_edge":
        need("n", "w", "lam")
        n, w, lam = params["n"], params["w"], params["lam"]
        return ExpansionCertificate(lam * n / w, 2 * lam, ("spectral_to_edge",))
    if rule == "cover":
        need("cert", "group_order")
        c, m = params["cert"], params["group_order"]
        return ExpansionCertificate(c.a, m * c.lam, c.derivation + ("cover",))
    if rule == "ramanujan_double_cover":
        need("n", "w")
        n, w = params["n"], params["w"]
        return ExpansionCertificate(n / math.sqrt(w), 8 * math.sqrt(w),
                                    ("ramanujan_double_cover",))
    if rule == "square":
        need("cert", "w")
        c, w = params["cert"], params["w"]
        return ExpansionCertificate(c.a / w, 2 * c.lam ** 2 * (1 + math.log(w)),
                                    c.derivation + ("square",))
    if rule == "product_skeleton":
        need("cert")
        c = params["cert"]
        return ExpansionCertificate(c.a, 2 * c.lam, c.derivation + ("product_skeleton",))
    if rule == "squared_skeleton":
        need("cert", "w")
        c, w = params["cert"], params["w"]
        return ExpansionCertificate(c.a / (2 * w), 8 * c.lam ** 2 * (math.log(w) + 2),
                                    c.derivation + ("squared_skeleton",))
    raise ValueError(f"unknown certificate rule {rule!r}")


def edge_count(g: Multigraph | np.ndarray, S, T) -> int:
    """Oriented edge count E(S,T) = ind(S)^T A ind(T)."""
    a = g.adjacency() if isinstance(g, Multigraph) else np.asarray(g)
    n = a.shape[0]
    s = np.zeros(n, dtype=np.int64)
    t = np.zeros(n, dtype=np.int64)
    for v in S:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range")
        s[v] = 1
    for v in T:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range")
        t[v] = 1
    return int(s @ a @ t)


def _subset_counts(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For all 2^n subsets: (|S| vector, E(S,T) matrix) via bitmask indicators."""
    n = a.shape[0]
    if n > 14:
        raise ValueError("exhaustive subset enumeration capped at n = 14")
    masks = np.arange(1 << n, dtype=np.int64)
    ind = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    sizes = ind.sum(axis=1)
    return sizes, ind


def mixing_check_exhaustive(g: Multigraph, lam: float, tol: float = 1e-6) -> bool:
    """Expander mixing bound on every subset pair of a regular graph.

    Checks | |E(S,T)| - w|S||T|/n | <= lam * sqrt(|S||T|) + tol for all S, T.
    """
    a = g.adjacency()
    w = g.is_regular()
    if w is None:
        raise ValueError("mixing check needs a regular graph")
    n = g.vertex_count
    sizes, ind = _subset_counts(a)
    half = ind @ a  # (2^n, n)
    block = 1024
    for lo in range(0, ind.shape[0], block):
        e = half[lo : lo + block] @ ind.T  # E(S,T) for this S-block
        ss = sizes[lo : lo + block, None].astype(np.float64)
        tt = sizes[None, :].astype(np.float64)
        bound = lam * np.sqrt(ss * tt) + tol
        if not np.all(np.abs(e - w * ss * tt / n) <= bound):
            return False
    return True


def edge_expansion_check_exhaustive(
    g: Multigraph | np.ndarray, a_param: float, lam: float, tol: float = 1e-9
) -> bool:
    """Definition-level (a, lam)-edge-expansion check on all small subset pairs."""
    a = g.adjacency() if isinstance(g, Multigraph) else np.asarray(g)
    sizes, ind = _subset_counts(a)
    keep = sizes <= a_param
    ind = ind[keep]
    sizes = sizes[keep]
    half = ind @ a
    block = 1024
    for lo in range(0, ind.shape[0], block):
        e = half[lo : lo + block] @ ind.T
        ss = sizes[lo : lo + block, None].astype(np.float64)
        tt = sizes[None, :].astype(np.float64)
        if not np.all(e <= lam * np.sqrt(ss * tt) + tol):
            return False
    return True


def square_adjacency(g: Multigraph | np.ndarray) -> np.ndarray:
    """Adjacency of the squared graph: entry (u,v) counts length-2 walks."""
    a = g.adjacency() if isinstance(g, Multigraph) else np.asarray(g)
    return a @ a


def random_regular(n: int, d: int, seed: int) -> Multigraph:
    """Random d-regular simple graph (delegates to networkx)."""
    import networkx as nx

    g = nx.random_regular_graph(d, n, seed=seed)
    return Multigraph(n, [(int(u), int(v)) for u, v in g.edges()])


def all_ones_voltage_c2(base: Multigraph) -> VoltageAssignment:
    """The double-cover voltage: every edge carries the C_2 flip."""
    from .groups import cyclic_group

    return VoltageAssignment(cyclic_group(2), [1] * base.edge_count)
