"""Classical local-code toolkit: exact parameters, coset leaders,
delta-minimality, the product-expansion verifier, and the random local-pair
sampler.

Throughout, a "pair" (ca, cb) means the codes ker ha and ker hb; the joint
codeword space is the set of w x w matrices x with hb @ x @ ha.T = 0, whose
rows sit in cosets of ker ha and columns in cosets of ker hb.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import FeasibilityError
from .gf import kernel_basis_mod, rank_mod

ENUM_CAP = 1 << 24       # codeword enumerations
TABLE_CAP = 1 << 22      # coset leader table entries
PEXP_CAP = 1 << 22       # product-expansion codeword enumeration

INF = math.inf


@dataclass
class LocalCode:
    h: np.ndarray  # r x w parity-check
    q: int
    full_rank: bool = False

    def __post_init__(self) -> None:
        self.h = np.atleast_2d(np.asarray(self.h, dtype=np.int64)) % self.q
        if self.full_rank and rank_mod(self.h, self.q) != self.h.shape[0]:
            raise ValueError("parity-check flagged full_rank is rank deficient")

    @property
    def w(self) -> int:
        return self.h.shape[1]

    @property
    def r(self) -> int:
        return self.h.shape[0]

    def kernel_basis(self) -> np.ndarray:
        return kernel_basis_mod(self.h, self.q)


@dataclass
class CodeProfile:
    n: int
    k: int
    d: float            # exact distance, INF when k = 0
    exact: bool
    d_bounds: tuple[int, int] | None = None  # (lower, upper) in sampled mode


def code_profile(c: LocalCode, cap: int = ENUM_CAP,
                 seed: int = 0, samples: int = 200) -> CodeProfile:
    """[n, k, d] of ker h;  d by full enumeration under the cap, otherwise an
    information-set sampled (lower, upper) bound pair with d = upper."""
    k = c.w - rank_mod(c.h, c.q)
    if k == 0:
        return CodeProfile(n=c.w, k=0, d=INF, exact=True)
    if c.q ** k <= cap:
        basis = c.kernel_basis()
        d, _ = _kernels.min_weight_affine(basis, None, c.q)
        return CodeProfile(n=c.w, k=k, d=int(d), exact=True)
    rng = np.random.default_rng(seed)
    basis = c.kernel_basis()
    best = c.w
    for _ in range(samples):
        coef = rng.integers(0, c.q, k)
        if not coef.any():
            continue
        v = (coef @ basis) % c.q
        wt = int((v != 0).sum())
        if 0 < wt < best:
            best = wt
    return CodeProfile(n=c.w, k=k, d=best, exact=False, d_bounds=(1, best))


def has_min_distance(h: np.ndarray, q: int, d: int) -> bool:
    """Exact certificate that ker h contains no nonzero word of weight < d.

    Uses full enumeration when cheap, otherwise checks that every support of
    size < d meets the checks with full column rank.
    """
    h = np.atleast_2d(np.asarray(h, dtype=np.int64)) % q
    w = h.shape[1]
    if d <= 1:
        return True
    k = w - rank_mod(h, q)
    if k == 0:
        return True
    if q ** k <= 1 << 16:
        wt, _ = _kernels.min_weight_affine(kernel_basis_mod(h, q), None, q,
                                           stop_below=d)
        return wt >= d
    for t in range(1, min(d, w + 1)):
        for supp in itertools.combinations(range(w), t):
            if rank_mod(h[:, supp], q) < t:
                return False
    return True


def generator_distance(g: np.ndarray, q: int, cap: int = ENUM_CAP) -> float:
    """Exact minimum distance of the row-space code im g^T."""
    g = np.atleast_2d(np.asarray(g, dtype=np.int64)) % q
    rk = rank_mod(g, q)
    if rk == 0:
        return INF
    if q ** g.shape[0] > cap:
        raise FeasibilityError("row-space enumeration exceeds the cap")
    d, _ = _kernels.min_weight_affine(g, None, q)
    return int(d)


def dual_parity_check(g: np.ndarray, q: int) -> np.ndarray:
    """A parity-check matrix for the row-space code im g^T (rows span ker g)."""
    return kernel_basis_mod(g, q)


# ---------------------------------------------------------------------------
# coset leaders
# ---------------------------------------------------------------------------


class CosetLeaderTable:
    """Full table of minimum-weight syndrome preimages for ker h.

    Leaders are deterministic: weight order, ties broken by lexicographic
    support then values.
    """

    def __init__(self, code: LocalCode, cap: int = TABLE_CAP):
        if code.q ** code.r > cap:
            raise FeasibilityError(
                f"coset table needs {code.q ** code.r} entries, cap is {cap}")
        self.code = code
        self.leaders, self.weights, self.found = _kernels.coset_table(
            code.h, code.q)

    def leader(self, y: np.ndarray) -> np.ndarray:
        idx = _kernels.syndrome_code(y, self.code.q)
        if self.weights[idx] < 0:
            raise ValueError("syndrome not in the image of h")
        return self.leaders[idx].copy()

    def weight(self, y: np.ndarray) -> int:
        idx = _kernels.syndrome_code(y, self.code.q)
        wt = int(self.weights[idx])
        if wt < 0:
            raise ValueError("syndrome not in the image of h")
        return wt


def coset_leader(y: np.ndarray, c: LocalCode,
                 table: CosetLeaderTable | None = None) -> np.ndarray:
    """Minimum-weight x with h x = y (deterministic tie-break)."""
    if table is None:
        table = CosetLeaderTable(c)
    return table.leader(y)


def distance_to_code(x: np.ndarray, c: LocalCode,
                     table: CosetLeaderTable | None = None) -> int:
    """d(x, ker h) = weight of the coset leader of h x."""
    if table is None:
        table = CosetLeaderTable(c)
    y = (c.h @ (np.asarray(x, dtype=np.int64) % c.q)) % c.q
    return table.weight(y)


def is_delta_minimal(x: np.ndarray, ca: LocalCode, cb: LocalCode, delta: int,
                     table_a: CosetLeaderTable | None = None,
                     table_b: CosetLeaderTable | None = None) -> bool:
    """Row/column minimality: wt(x^i) <= d(x^i, ker ha) + delta for all rows,
    and the column analogue against ker hb."""
    x = np.atleast_2d(np.asarray(x, dtype=np.int64))
    table_a = table_a or CosetLeaderTable(ca)
    table_b = table_b or CosetLeaderTable(cb)
    for i in range(x.shape[0]):
        wt = int((x[i] != 0).sum())
        if wt and wt > distance_to_code(x[i], ca, table_a) + delta:
            return False
    for j in range(x.shape[1]):
        wt = int((x[:, j] != 0).sum())
        if wt and wt > distance_to_code(x[:, j], cb, table_b) + delta:
            return False
    return True


# ---------------------------------------------------------------------------
# product expansion
# ---------------------------------------------------------------------------


@dataclass
class PexpParams:
    s: int
    m: int
    beta: float
    delta_cap: int | None = None  # floor(beta * w), resolved at check time

    def __post_init__(self) -> None:
        if not 0 <= self.beta <= 1:
            raise ValueError("beta must lie in [0, 1]")

    def delta_for(self, w: int) -> int:
        if self.delta_cap is not None:
            return self.delta_cap
        return int(math.floor(self.beta * w))


@dataclass
class PexpCounterexample:
    x: np.ndarray
    rows: tuple[int, ...]   # window A (row indices)
    cols: tuple[int, ...]   # window B (column indices)
    weight: int


@dataclass
class PexpVerdict:
    holds: bool
    search_mode: str                       # "exhaustive" | "randomized"
    counterexample: PexpCounterexample | None = None
    min_window_weight: int | None = None   # over minimal codewords (exhaustive)
    n_minimal: int | None = None


def pair_kernel_basis(ca: LocalCode, cb: LocalCode) -> np.ndarray:
    """Basis of {x : hb x ha^T = 0}, row-major w*w vectors."""
    if ca.q != cb.q or ca.w != cb.w:
        raise ValueError("pair must share field and length")
    return kernel_basis_mod(np.kron(cb.h, ca.h) % ca.q, ca.q)


def _window_sets(w: int, m: int) -> np.ndarray:
    sels = list(itertools.combinations(range(w), w - m))
    return np.array(sels, dtype=np.int64)


def _window_min(x: np.ndarray, rows_sel: np.ndarray, cols_sel: np.ndarray
                ) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    nz = x != 0
    best = (1 << 40, (), ())
    for rs in rows_sel:
        for cs in cols_sel:
            wt = int(nz[np.ix_(rs, cs)].sum())
            if wt < best[0]:
                best = (wt, tuple(int(i) for i in rs), tuple(int(j) for j in cs))
    return best


def product_expansion_check(
    ca: LocalCode,
    cb: LocalCode,
    params: PexpParams,
    mode: str = "exhaustive",
    seed: int = 0,
    tries: int = 2000,
    cap: int = PEXP_CAP,
) -> PexpVerdict:
    """(s, m, beta)-product-expansion verifier for the pair (ker ha, ker hb).

    Exhaustive mode enumerates every nonzero codeword, keeps the
    floor(beta*w)-minimal ones and minimizes the window weight over all
    windows with |A| = |B| = w - m exactly (window weight is monotone in
    window growth, so the minimum size suffices).  Randomized mode runs a
    seeded search and can only report "not falsified".
    """
    w = ca.w
    if params.m >= w:
        raise ValueError("window defect m must satisfy m < w")
    if params.s > w * w:
        raise ValueError("s exceeds the total window size")
    delta = params.delta_for(w)
    if params.s == 0:
        return PexpVerdict(holds=True, search_mode=mode)

    table_a = CosetLeaderTable(ca)
    table_b = CosetLeaderTable(cb)
    basis = pair_kernel_basis(ca, cb)
    dim = basis.shape[0]
    rows_sel = _window_sets(w, params.m)
    cols_sel = rows_sel

    if mode == "exhaustive":
        if ca.q ** dim > cap:
            raise FeasibilityError(
                f"pair kernel has q^{dim} codewords, cap is {cap}")
        best, best_idx, n_min = _kernels.pexp_scan(
            basis, ca.q, w, ca.h, cb.h,
            table_a.weights, table_b.weights, delta, rows_sel, cols_sel)
        if n_min == 0 or best >= params.s:
            return PexpVerdict(holds=True, search_mode="exhaustive",
                               min_window_weight=None if n_min == 0 else best,
                               n_minimal=n_min)
        x = _kernels.codeword_from_index(basis, best_idx, ca.q).reshape(w, w)
        wt, rs, cs = _window_min(x, rows_sel, cols_sel)
        cex = PexpCounterexample(x=x, rows=rs, cols=cs, weight=wt)
        _validate_counterexample(cex, ca, cb, params, table_a, table_b)
        return PexpVerdict(holds=False, search_mode="exhaustive",
                           counterexample=cex, min_window_weight=best,
                           n_minimal=n_min)

    if mode != "randomized":
        raise ValueError("mode must be 'exhaustive' or 'randomized'")
    rng = np.random.default_rng(seed)
    if dim == 0:
        return PexpVerdict(holds=True, search_mode="randomized")
    for _ in range(tries):
        coef = rng.integers(0, ca.q, dim)
        x = (coef @ basis).reshape(w, w) % ca.q
        x = _minimize_rows_cols(x, ca, cb, delta, table_a, table_b)
        if not x.any():
            continue
        wt, rs, cs = _window_min(x, rows_sel, cols_sel)
        if wt < params.s:
            cex = PexpCounterexample(x=x, rows=rs, cols=cs, weight=wt)
            _validate_counterexample(cex, ca, cb, params, table_a, table_b)
            return PexpVerdict(holds=False, search_mode="randomized",
                               counterexample=cex)
    return PexpVerdict(holds=True, search_mode="randomized")


def _minimize_rows_cols(x, ca, cb, delta, table_a, table_b):
    """Greedy row/column leader replacement until delta-minimal.

    Row moves add ker ha words to rows and column moves add ker hb words to
    columns, so the matrix stays inside the pair codeword space; total weight
    strictly decreases, so the loop terminates.
    """
    x = x.copy()
    q = ca.q
    changed = True
    while changed:
        changed = False
        for i in range(x.shape[0]):
            wt = int((x[i] != 0).sum())
            if not wt:
                continue
            lead = table_a.leader((ca.h @ x[i]) % q)
            if int((lead != 0).sum()) + delta < wt:
                x[i] = lead
                changed = True
        for j in range(x.shape[1]):
            wt = int((x[:, j] != 0).sum())
            if not wt:
                continue
            lead = table_b.leader((cb.h @ x[:, j]) % q)
            if int((lead != 0).sum()) + delta < wt:
                x[:, j] = lead
                changed = True
    return x


def _validate_counterexample(cex, ca, cb, params, table_a, table_b):
    w = ca.w
    if not cex.x.any():
        raise AssertionError("counterexample is the zero codeword")
    if ((cb.h @ cex.x @ ca.h.T) % ca.q).any():
        raise AssertionError("counterexample is not in the pair codeword space")
    delta = params.delta_for(w)
    if not is_delta_minimal(cex.x, ca, cb, delta, table_a, table_b):
        raise AssertionError("counterexample is not delta-minimal")
    if len(cex.rows) < w - params.m or len(cex.cols) < w - params.m:
        raise AssertionError("counterexample window is too small")
    wt = int((cex.x[np.ix_(list(cex.rows), list(cex.cols))] != 0).sum())
    if wt != cex.weight or wt >= params.s:
        raise AssertionError("counterexample window weight does not replay")


def iter_minimal_codewords(ca: LocalCode, cb: LocalCode, delta: int,
                           batch: int = 4096, cap: int = PEXP_CAP):
    """Yield delta-minimal nonzero pair codewords in batches (w, w) arrays.

    Used by the desk-scale property checks; enumeration order matches the
    base-q odometer.
    """
    basis = pair_kernel_basis(ca, cb)
    dim = basis.shape[0]
    q = ca.q
    w = ca.w
    if dim == 0:
        return
    if q ** dim > cap:
        raise FeasibilityError("pair kernel enumeration exceeds the cap")
    table_a = CosetLeaderTable(ca)
    table_b = CosetLeaderTable(cb)
    pows_a = q ** np.arange(ca.r, dtype=np.int64)
    pows_b = q ** np.arange(cb.r, dtype=np.int64)
    total = q ** dim
    for lo in range(0, total, batch):
        idx = np.arange(lo, min(lo + batch, total))
        digits = (idx[:, None] // (q ** np.arange(dim, dtype=np.int64))[None, :]) % q
        mats = (digits @ basis).reshape(-1, w, w) % q
        nz = mats != 0
        row_wts = nz.sum(axis=2)
        col_wts = nz.sum(axis=1)
        row_codes = (np.einsum("uj,cij->ciu", ca.h, mats) % q) @ pows_a
        col_codes = (np.einsum("ui,cij->cju", cb.h, mats) % q) @ pows_b
        row_ok = (row_wts <= table_a.weights[row_codes] + delta) | (row_wts == 0)
        col_ok = (col_wts <= table_b.weights[col_codes] + delta) | (col_wts == 0)
        minimal = row_ok.all(axis=1) & col_ok.all(axis=1) & nz.any(axis=(1, 2))
        for c in np.nonzero(minimal)[0]:
            yield mats[c]


# ---------------------------------------------------------------------------
# random local pairs
# ---------------------------------------------------------------------------


@dataclass
class SamplerConfig:
    q: int
    w: int
    R1: float
    R2: float
    delta: float
    epsilon: float = 1 / 6
    alpha: float = 1.0
    gamma: float = 2.0
    max_tries: int = 10000
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0 < self.R1 < 1 and 0 < self.R2 < 1):
            raise ValueError("R1, R2 must lie in (0, 1)")
        if self.delta > (self.q - 1) / self.q:
            raise ValueError("delta must be at most (q-1)/q")

    def derived_pexp_params(self) -> PexpParams:
        """s, m, beta from the sampler's scaling: s = alpha*w^(1+eps),
        m = gamma*w^(1/2+eps), beta = delta/3."""
        s = int(round(self.alpha * self.w ** (1 + self.epsilon)))
        m = int(round(self.gamma * self.w ** (0.5 + self.epsilon)))
        return PexpParams(s=s, m=min(m, self.w - 1), beta=self.delta / 3)


def q_entropy(x: float, q: int) -> float:
    """q-ary entropy H_q(x)."""
    if x == 0:
        return 0.0
    if x == 1:
        return math.log(q - 1, q)
    return (x * math.log(q - 1, q) - x * math.log(x, q)
            - (1 - x) * math.log(1 - x, q))


def sample_local_pair(cfg: SamplerConfig) -> tuple[LocalCode, LocalCode]:
    """Uniform full-rank (h, g') with min(d(ker h), d(im g'^T)) >= floor(delta*w).

    h is floor(R1*w) x w, g' is floor(R2*w) x w; g' is a generator matrix
    for the second code.  Rejection sampled, deterministic under seed.
    """
    rng = np.random.default_rng(cfg.seed)
    r1 = int(math.floor(cfg.R1 * cfg.w))
    r2 = int(math.floor(cfg.R2 * cfg.w))
    t = int(math.floor(cfg.delta * cfg.w))

    h = None
    for _ in range(cfg.max_tries):
        cand = rng.integers(0, cfg.q, (r1, cfg.w))
        if rank_mod(cand, cfg.q) != r1:
            continue
        if has_min_distance(cand, cfg.q, t):
            h = cand
            break
    if h is None:
        raise RuntimeError("sampler exhausted max_tries for h")

    gp = None
    for _ in range(cfg.max_tries):
        cand = rng.integers(0, cfg.q, (r2, cfg.w))
        if rank_mod(cand, cfg.q) != r2:
            continue
        if t <= 1 or generator_distance(cand, cfg.q) >= t:
            gp = cand
            break
    if gp is None:
        raise RuntimeError("sampler exhausted max_tries for g'")

    return (LocalCode(h, cfg.q, full_rank=True),
            LocalCode(gp, cfg.q, full_rank=True))
