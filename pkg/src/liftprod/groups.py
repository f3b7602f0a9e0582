"""Finite groups with element indexing, PSL(2,q) with LPS generator sets,
group-algebra elements and regular representations.

Groups are materialized as multiplication tables (adequate up to a few
thousand elements; PSL(2,17) has 2448).  Element 0 is always the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldSpec, MatrixFq, is_prime


@dataclass
class FiniteGroup:
    order: int
    mul: np.ndarray = field(repr=False)  # (order, order) int32, mul[a, b] = a*b
    inv: np.ndarray = field(repr=False)  # (order,) int32
    label: str = ""

    def __post_init__(self) -> None:
        if self.mul.shape != (self.order, self.order):
            raise ValueError("multiplication table shape mismatch")

    @property
    def identity(self) -> int:
        return 0

    def check_axioms(self, rng: np.random.Generator | None = None) -> None:
        """Verify group laws: exhaustive for order <= 512, sampled above."""
        n = self.order
        mul = self.mul
        if not np.array_equal(mul[0], np.arange(n)):
            raise ValueError("identity is not left-neutral")
        if not np.array_equal(mul[:, 0], np.arange(n)):
            raise ValueError("identity is not right-neutral")
        if not np.all(mul[np.arange(n), self.inv] == 0):
            raise ValueError("inverse law fails")
        if not np.all(mul[self.inv, np.arange(n)] == 0):
            raise ValueError("left inverse law fails")
        if n <= 512:
            # (ab)c computed for all triples via table composition
            ab = mul  # (a, b)
            abc1 = mul[ab, :]  # (a, b, c) -> (ab)c
            bc = mul  # (b, c)
            abc2 = mul[:, bc]  # (a, b, c) -> a(bc)
            if not np.array_equal(abc1, abc2):
                raise ValueError("associativity fails")
        else:
            rng = rng or np.random.default_rng(0)
            a = rng.integers(0, n, 2000)
            b = rng.integers(0, n, 2000)
            c = rng.integers(0, n, 2000)
            if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                raise ValueError("associativity fails on sample")


@dataclass
class GeneratorSet:
    group: FiniteGroup
    elements: list[int]
    symmetric: bool

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate generators")
        closed = {int(self.group.inv[s]) for s in self.elements} == set(self.elements)
        if self.symmetric != closed:
            raise ValueError("symmetric flag does not match inverse closure")


def _table_from_products(elems: list, prod, label: str) -> FiniteGroup:
    """Build a FiniteGroup from hashable element objects and a product map."""
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int32)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[prod(a, b)]
    inv = np.zeros(n, dtype=np.int32)
    for i in range(n):
        js = np.nonzero(mul[i] == 0)[0]
        inv[i] = js[0]
    return FiniteGroup(order=n, mul=mul, inv=inv, label=label)


def cyclic_group(ell: int) -> FiniteGroup:
    if ell < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(ell, dtype=np.int32)
    mul = (idx[:, None] + idx[None, :]) % ell
    inv = (-idx) % ell
    return FiniteGroup(order=ell, mul=mul.astype(np.int32), inv=inv.astype(np.int32),
                       label=f"C{ell}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product; element index is i1 * |G2| + i2."""
    n1, n2 = g1.order, g2.order
    i1 = np.arange(n1)
    i2 = np.arange(n2)
    # mul[(a1,a2),(b1,b2)] = (a1 b1, a2 b2)
    m1 = g1.mul[np.repeat(i1, n2)][:, np.repeat(i1, n2)]
    m2 = g2.mul[np.tile(i2, n1)][:, np.tile(i2, n1)]
    mul = (m1.astype(np.int64) * n2 + m2).astype(np.int32)
    inv = (g1.inv[np.repeat(i1, n2)].astype(np.int64) * n2
           + g2.inv[np.tile(i2, n1)]).astype(np.int32)
    return FiniteGroup(order=n1 * n2, mul=mul, inv=inv,
                       label=f"{g1.label}x{g2.label}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n as a permutation table (identity permutation first)."""
    perms = sorted(itertools.permutations(range(n)))
    return _table_from_products(
        perms, lambda a, b: tuple(a[b[i]] for i in range(n)), f"S{n}"
    )


def _psl2_normalize(m: tuple[int, int, int, int], q: int) -> tuple[int, int, int, int]:
    """Canonical representative of {M, -M}: first nonzero entry in [1, (q-1)/2]."""
    for v in m:
        if v != 0:
            if v > (q - 1) // 2:
                return tuple((-x) % q for x in m)
            return m
    raise ValueError("zero matrix")


def _psl2_elements(q: int) -> list[tuple[int, int, int, int]]:
    """Normalized PSL(2,q) representatives: identity first, then lexicographic."""
    if not is_prime(q):
        raise ValueError(f"psl2 needs a prime q, got {q}")
    if q == 2:
        raise ValueError("psl2 over q = 2 is not supported (q must be odd)")
    seen = set()
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if (a * d - b * c) % q == 1:
            seen.add(_psl2_normalize((a, b, c, d), q))
    ident = (1, 0, 0, 1)
    elems = [ident] + sorted(seen - {ident})
    expected = q * (q * q - 1) // 2
    if len(elems) != expected:
        raise AssertionError("PSL(2,q) enumeration size mismatch")
    return elems


def psl2_group(q: int) -> FiniteGroup:
    """PSL(2, q) for an odd prime q; order q(q^2-1)/2.

    Elements are sign-normalized determinant-1 matrices over F_q; the
    identity is index 0, the rest follow in lexicographic order of the
    normalized (a, b, c, d) tuples.
    """
    elems = _psl2_elements(q)

    # vectorized table build: encode matrices as base-q integers
    arr = np.array(elems, dtype=np.int64)  # (n, 4)
    enc = ((arr[:, 0] * q + arr[:, 1]) * q + arr[:, 2]) * q + arr[:, 3]
    sort_idx = np.argsort(enc)  # already sorted, but keep it explicit
    enc_sorted = enc[sort_idx]
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int32)
    a0, b0, c0, d0 = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    half = (q - 1) // 2
    for i in range(n):
        a, b, c, d = int(a0[i]), int(b0[i]), int(c0[i]), int(d0[i])
        pa = (a * a0 + b * c0) % q
        pb = (a * b0 + b * d0) % q
        pc = (c * a0 + d * c0) % q
        pd = (c * b0 + d * d0) % q
        # normalize sign on the first nonzero coordinate
        first = np.where(pa != 0, pa, np.where(pb != 0, pb, np.where(pc != 0, pc, pd)))
        flip = first > half
        pa = np.where(flip, (-pa) % q, pa)
        pb = np.where(flip, (-pb) % q, pb)
        pc = np.where(flip, (-pc) % q, pc)
        pd = np.where(flip, (-pd) % q, pd)
        enc_p = ((pa * q + pb) * q + pc) * q + pd
        mul[i] = sort_idx[np.searchsorted(enc_sorted, enc_p)]
    inv = np.zeros(n, dtype=np.int32)
    for i in range(n):
        inv[i] = np.nonzero(mul[i] == 0)[0][0]
    return FiniteGroup(order=n, mul=mul, inv=inv, label=f"PSL(2,{q})")


def build_group(spec: str | dict) -> FiniteGroup:
    """Construct a group from a short spec.

    Accepted forms: ``{"kind": "cyclic", "l": 4}``, ``{"kind": "product",
    "factors": [spec, ...]}``, ``{"kind": "psl2", "q": 5}``,
    ``{"kind": "symmetric", "n": 3}``, or the string forms "cyclic:4",
    "cyclic:3x3", "psl2:5", "symmetric:3".
    """
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "cyclic":
            parts = [int(p) for p in arg.split("x")]
            spec = {"kind": "product",
                    "factors": [{"kind": "cyclic", "l": p} for p in parts]} \
                if len(parts) > 1 else {"kind": "cyclic", "l": parts[0]}
        elif kind == "psl2":
            spec = {"kind": "psl2", "q": int(arg)}
        elif kind == "symmetric":
            spec = {"kind": "symmetric", "n": int(arg)}
        else:
            raise ValueError(f"unknown group kind {kind!r}")
    kind = spec["kind"]
    if kind == "cyclic":
        return cyclic_group(int(spec["l"]))
    if kind == "product":
        factors = [build_group(f) for f in spec["factors"]]
        g = factors[0]
        for f in factors[1:]:
            g = direct_product(g, f)
        return g
    if kind == "psl2":
        return psl2_group(int(spec["q"]))
    if kind == "symmetric":
        return symmetric_group(int(spec["n"]))
    raise ValueError(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# LPS generator sets
# ---------------------------------------------------------------------------


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    ls = pow(a, (p - 1) // 2, p)
    return -1 if ls == p - 1 else 1


def _sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root mod an odd prime (a must be a QR)."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    s, e = p - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    x = pow(a, (s + 1) // 2, p)
    b = pow(a, s, p)
    g = pow(z, s, p)
    r = e
    while True:
        t = b
        m = 0
        while t != 1:
            t = (t * t) % p
            m += 1
        if m == 0:
            return x
        gs = pow(g, 2 ** (r - m - 1), p)
        g = (gs * gs) % p
        x = (x * gs) % p
        b = (b * g) % p
        r = m


def lps_generators(p: int, q: int, group: FiniteGroup | None = None) -> GeneratorSet:
    """The p+1 LPS generators of PSL(2, q).

    Integer quadruples (a0, a1, a2, a3) with a0 > 0 odd, a1, a2, a3 even and
    a0^2 + a1^2 + a2^2 + a3^2 = p map to the PSL(2,q) classes of
    [[a0 + i a1, a2 + i a3], [-a2 + i a3, a0 - i a1]] with i^2 = -1 mod q,
    rescaled to determinant 1.  Preconditions are checked individually.
    """
    problems = []
    if not is_prime(p):
        problems.append(f"p = {p} is not prime")
    if not is_prime(q):
        problems.append(f"q = {q} is not prime")
    if p == q:
        problems.append("p and q must be distinct")
    if p % 4 != 1:
        problems.append(f"p = {p} is not 1 mod 4")
    if q % 4 != 1:
        problems.append(f"q = {q} is not 1 mod 4")
    if not problems and q * q <= 4 * p:
        problems.append(f"q = {q} fails q > 2*sqrt(p)")
    if not problems and _legendre(p, q) != 1:
        problems.append(f"p is not a quadratic residue mod q "
                        f"(p^((q-1)/2) = -1 mod q)")
    if problems:
        raise ValueError("; ".join(problems))

    if group is None:
        group = psl2_group(q)

    # all integer quadruples with a0^2+a1^2+a2^2+a3^2 = p, a0 odd positive,
    # a1, a2, a3 even (Jacobi: exactly p+1 of them)
    quads = []
    bound = int(p ** 0.5) + 1
    for a0 in range(1, bound + 1, 2):
        for a1 in range(-bound, bound + 1, 2):
            for a2 in range(-bound, bound + 1, 2):
                for a3 in range(-bound, bound + 1, 2):
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p:
                        quads.append((a0, a1, a2, a3))
    if len(quads) != p + 1:
        raise AssertionError(
            f"Jacobi quadruple count is {len(quads)}, expected {p + 1}"
        )

    i_unit = _sqrt_mod(q - 1, q)
    scale = pow(_sqrt_mod(p % q, q), q - 2, q)  # 1/sqrt(p) mod q

    elems: list[int] = []
    lookup = _psl2_index(group, q)
    for a0, a1, a2, a3 in sorted(quads):
        m = (
            (a0 + i_unit * a1) % q,
            (a2 + i_unit * a3) % q,
            (-a2 + i_unit * a3) % q,
            (a0 - i_unit * a1) % q,
        )
        m = tuple((x * scale) % q for x in m)
        det = (m[0] * m[3] - m[1] * m[2]) % q
        if det != 1:
            raise AssertionError("LPS generator has determinant != 1")
        elems.append(lookup[_psl2_normalize(m, q)])
    if len(set(elems)) != p + 1:
        raise AssertionError("LPS generators collapse below p+1 distinct elements")

    gen = GeneratorSet(group=group, elements=elems, symmetric=True)
    if not _generates(group, elems):
        raise AssertionError("LPS generators do not generate PSL(2,q)")
    return gen


def _psl2_index(group: FiniteGroup, q: int) -> dict[tuple[int, int, int, int], int]:
    """Map normalized PSL(2,q) matrices back to their table indices."""
    elems = _psl2_elements(q)
    if len(elems) != group.order:
        raise ValueError("group is not PSL(2,q) for this q")
    return {m: i for i, m in enumerate(elems)}


def _generates(group: FiniteGroup, elements: list[int]) -> bool:
    """Closure orbit of the identity under left multiplication by elements."""
    reached = np.zeros(group.order, dtype=bool)
    frontier = [0]
    reached[0] = True
    count = 1
    while frontier:
        nxt = []
        for g in frontier:
            for s in elements:
                h = int(group.mul[s, g])
                if not reached[h]:
                    reached[h] = True
                    count += 1
                    nxt.append(h)
        frontier = nxt
    return count == group.order


# ---------------------------------------------------------------------------
# group algebra and regular representations
# ---------------------------------------------------------------------------


@dataclass
class GroupAlgebraElem:
    """Formal F_q-linear combination of group elements (sparse coeffs)."""

    group: FiniteGroup
    field: FieldSpec
    coeffs: dict[int, int]

    def __post_init__(self) -> None:
        q = self.field.q
        self.coeffs = {g: c % q for g, c in self.coeffs.items() if c % q != 0}

    @classmethod
    def from_pairs(cls, group, field, pairs) -> "GroupAlgebraElem":
        coeffs: dict[int, int] = {}
        for g, c in pairs:
            coeffs[g] = coeffs.get(g, 0) + c
        return cls(group, field, coeffs)

    def __add__(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        coeffs = dict(self.coeffs)
        for g, c in other.coeffs.items():
            coeffs[g] = coeffs.get(g, 0) + c
        return GroupAlgebraElem(self.group, self.field, coeffs)

    def __mul__(self, other: "GroupAlgebraElem") -> "GroupAlgebraElem":
        coeffs: dict[int, int] = {}
        mul = self.group.mul
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = int(mul[g, h])
                coeffs[k] = coeffs.get(k, 0) + a * b
        return GroupAlgebraElem(self.group, self.field, coeffs)

    def antipode(self) -> "GroupAlgebraElem":
        """Coefficientwise g -> g^{-1} (used for block-transposed matrices)."""
        inv = self.group.inv
        return GroupAlgebraElem(
            self.group, self.field, {int(inv[g]): c for g, c in self.coeffs.items()}
        )

    def is_zero(self) -> bool:
        return not self.coeffs


def algebra_elem(group: FiniteGroup, field: FieldSpec,
                 pairs: list[tuple[int, int]]) -> GroupAlgebraElem:
    return GroupAlgebraElem.from_pairs(group, field, pairs)


def regular_rep(r: GroupAlgebraElem, side: str) -> MatrixFq:
    """|G| x |G| matrix of x -> x*r ("right") or x -> r*x ("left").

    In the canonical element basis the right representation of a*b is
    rep(b) @ rep(a), the left one is rep(a) @ rep(b), and any right
    representation commutes with any left one.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    g = r.group
    q = r.field.q
    n = g.order
    out = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n)
    for h, c in r.coeffs.items():
        if side == "right":
            rows = g.mul[idx, h]  # g*h
        else:
            rows = g.mul[h, idx]  # h*g
        out[rows, idx] = (out[rows, idx] + c) % q
    return MatrixFq(r.field, out)
