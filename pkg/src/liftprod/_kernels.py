"""Hot numeric kernels: GF(q) elimination and brute-force enumeration loops.

Every kernel exists in two variants: a numba ``@njit`` version and a pure
numpy one.  The active path is chosen once at import time from the
``LIFTPROD_NO_NUMBA`` environment variable (set to ``1`` to force the numpy
fallback).  Both paths are exercised by the test suite and compared by
``benchmarks/bench_kernels.py``.

All matrices are dense ``int64`` arrays with entries reduced mod q.
Enumeration order over coefficient vectors is the base-q odometer (index n
has digits equal to the base-q representation of n, digit 0 fastest), which
makes every "first codeword found" result deterministic and reconstructible
from its index.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("LIFTPROD_NO_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


def inverse_table(q: int) -> np.ndarray:
    """Multiplicative inverses mod prime q; index 0 holds 0."""
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    return inv


# ---------------------------------------------------------------------------
# reduced row echelon form
# ---------------------------------------------------------------------------


@njit(cache=True)
def _rref_numba(R, q, inv):
    m, n = R.shape
    piv_cols = np.empty(min(m, n), dtype=np.int64)
    rank = 0
    for col in range(n):
        if rank == m:
            break
        sel = -1
        for row in range(rank, m):
            if R[row, col] != 0:
                sel = row
                break
        if sel < 0:
            continue
        if sel != rank:
            for j in range(n):
                t = R[rank, j]
                R[rank, j] = R[sel, j]
                R[sel, j] = t
        pinv = inv[R[rank, col]]
        if pinv != 1:
            for j in range(n):
                R[rank, j] = (R[rank, j] * pinv) % q
        for row in range(m):
            if row != rank and R[row, col] != 0:
                f = R[row, col]
                for j in range(n):
                    R[row, j] = (R[row, j] - f * R[rank, j]) % q
        piv_cols[rank] = col
        rank += 1
    return R, piv_cols[:rank]


def _rref_numpy(R, q, inv):
    m, n = R.shape
    piv_cols = []
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(R[rank:, col])[0]
        if nz.size == 0:
            continue
        sel = rank + nz[0]
        if sel != rank:
            R[[rank, sel]] = R[[sel, rank]]
        R[rank] = (R[rank] * inv[R[rank, col]]) % q
        rows = np.nonzero(R[:, col])[0]
        rows = rows[rows != rank]
        if rows.size:
            R[rows] = (R[rows] - np.outer(R[rows, col], R[rank])) % q
        piv_cols.append(col)
        rank += 1
    return R, np.asarray(piv_cols, dtype=np.int64)


def rref(M: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form mod q.

    Pivoting rule: first nonzero entry in column order (deterministic).
    Returns (R, pivot_columns); R is a fresh array.
    """
    R = np.array(M, dtype=np.int64) % q
    if R.size == 0:
        return R, np.empty(0, dtype=np.int64)
    inv = inverse_table(q)
    if USE_NUMBA:
        return _rref_numba(R, q, inv)
    return _rref_numpy(R, q, inv)


# ---------------------------------------------------------------------------
# minimum weight over an affine span  x0 + <basis>
# ---------------------------------------------------------------------------


@njit(cache=True)
def _min_weight_affine_numba(basis, x0, q, include_zero, stop_below):
    k, n = basis.shape
    vec = x0.copy()
    best = np.int64(1 << 40)
    best_vec = vec.copy()
    wt0 = np.int64((vec != 0).sum())
    if include_zero or wt0 != 0:
        best = wt0
        best_vec = vec.copy()
        if stop_below > 0 and best < stop_below:
            return best, best_vec
    digits = np.zeros(k, dtype=np.int64)
    total = q ** k
    for _ in range(total - 1):
        pos = 0
        while digits[pos] == q - 1:
            digits[pos] = 0
            for j in range(n):
                vec[j] = (vec[j] + basis[pos, j]) % q
            pos += 1
        digits[pos] += 1
        for j in range(n):
            vec[j] = (vec[j] + basis[pos, j]) % q
        wt = np.int64((vec != 0).sum())
        if wt < best and (include_zero or wt != 0):
            best = wt
            best_vec = vec.copy()
            if stop_below > 0 and best < stop_below:
                return best, best_vec
    return best, best_vec


def _min_weight_affine_numpy(basis, x0, q, include_zero, stop_below):
    k, n = basis.shape
    best = 1 << 40
    best_vec = x0.copy()
    wt0 = int((x0 != 0).sum())
    if include_zero or wt0 != 0:
        best = wt0
        if stop_below > 0 and best < stop_below:
            return best, best_vec
    chunk_digits = min(k, 16)
    lead = k - chunk_digits
    pows = q ** np.arange(chunk_digits)
    idx = np.arange(q ** chunk_digits)
    coeffs = (idx[:, None] // pows[None, :]) % q
    block = (coeffs @ basis[:chunk_digits]) % q
    for hi in range(q ** lead):
        hi_vec = x0.copy()
        rem = hi
        for t in range(lead):
            d = rem % q
            rem //= q
            if d:
                hi_vec = (hi_vec + d * basis[chunk_digits + t]) % q
        cand = (block + hi_vec) % q
        wts = (cand != 0).sum(axis=1)
        if not include_zero:
            wts = np.where(wts == 0, 1 << 40, wts)
        if hi == 0 and not include_zero and wt0 == 0:
            wts[0] = 1 << 40
        j = int(np.argmin(wts))
        if wts[j] < best:
            best = int(wts[j])
            best_vec = cand[j].copy()
            if stop_below > 0 and best < stop_below:
                return best, best_vec
    return int(best), best_vec


def min_weight_affine(
    basis: np.ndarray,
    x0: np.ndarray | None,
    q: int,
    include_zero: bool = False,
    stop_below: int = 0,
) -> tuple[int, np.ndarray]:
    """Minimum Hamming weight over {x0 + c : c in span(basis rows)}.

    With x0 = None the span itself is searched and the zero vector is skipped
    unless include_zero.  stop_below > 0 allows an early exit as soon as a
    weight < stop_below is seen (used for distance >= d certificates).
    Returns (weight, witness); weight is 2**40 when the search set is empty.
    """
    basis = np.asarray(basis, dtype=np.int64) % q
    n = basis.shape[1]
    if x0 is None:
        x0 = np.zeros(n, dtype=np.int64)
    else:
        x0 = np.asarray(x0, dtype=np.int64) % q
    if basis.shape[0] == 0:
        wt = int((x0 != 0).sum())
        if include_zero or wt != 0:
            return wt, x0.copy()
        return 1 << 40, x0.copy()
    if USE_NUMBA:
        wt, vec = _min_weight_affine_numba(
            basis, x0, q, include_zero, np.int64(stop_below)
        )
        return int(wt), vec
    return _min_weight_affine_numpy(basis, x0, q, include_zero, stop_below)


# ---------------------------------------------------------------------------
# coset leader tables
# ---------------------------------------------------------------------------


@njit(cache=True)
def _coset_table_numba(h, q):
    r, w = h.shape
    size = q ** r
    leaders = np.zeros((size, w), dtype=np.int64)
    weights = np.full(size, -1, dtype=np.int64)
    weights[0] = 0
    found = 1
    pows = np.empty(r, dtype=np.int64)
    p = np.int64(1)
    for i in range(r):
        pows[i] = p
        p *= q
    supp = np.empty(w, dtype=np.int64)
    vals = np.empty(w, dtype=np.int64)
    for t in range(1, w + 1):
        if found == size:
            break
        for i in range(t):
            supp[i] = i
        while True:
            nv = (q - 1) ** t
            for i in range(t):
                vals[i] = 1
            for vidx in range(nv):
                code = np.int64(0)
                for i in range(r):
                    s = np.int64(0)
                    for u in range(t):
                        s += h[i, supp[u]] * vals[u]
                    code += (s % q) * pows[i]
                if weights[code] < 0:
                    weights[code] = t
                    for u in range(t):
                        leaders[code, supp[u]] = vals[u]
                    found += 1
                    if found == size:
                        return leaders, weights, found
                if vidx < nv - 1:
                    pos = t - 1
                    while vals[pos] == q - 1:
                        vals[pos] = 1
                        pos -= 1
                    vals[pos] += 1
            pos = t - 1
            while pos >= 0 and supp[pos] == w - t + pos:
                pos -= 1
            if pos < 0:
                break
            supp[pos] += 1
            for i in range(pos + 1, t):
                supp[i] = supp[i - 1] + 1
    return leaders, weights, found


def _coset_table_numpy(h, q):
    import itertools

    r, w = h.shape
    size = q ** r
    leaders = np.zeros((size, w), dtype=np.int64)
    weights = np.full(size, -1, dtype=np.int64)
    weights[0] = 0
    found = 1
    pows = q ** np.arange(r)
    for t in range(1, w + 1):
        if found == size:
            break
        val_grid = np.array(
            list(itertools.product(range(1, q), repeat=t)), dtype=np.int64
        )
        for supp in itertools.combinations(range(w), t):
            syn = (val_grid @ h[:, supp].T) % q
            codes = syn @ pows
            for vi in range(val_grid.shape[0]):
                code = codes[vi]
                if weights[code] < 0:
                    weights[code] = t
                    leaders[code, list(supp)] = val_grid[vi]
                    found += 1
            if found == size:
                break
    return leaders, weights, found


def coset_table(h: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Coset leader table for the code ker h.

    Syndromes y are encoded as sum_i y_i * q**i.  Leaders are chosen in
    weight order with ties broken by lexicographic support then values, so
    the table is deterministic.  Returns (leaders, weights, found); entries
    with weight -1 are unreachable syndromes (h not full rank).
    """
    h = np.asarray(h, dtype=np.int64) % q
    if USE_NUMBA:
        return _coset_table_numba(h, q)
    return _coset_table_numpy(h, q)


def syndrome_code(y: np.ndarray, q: int) -> int:
    """Integer table index of a syndrome vector."""
    y = np.asarray(y, dtype=np.int64) % q
    return int(y @ (q ** np.arange(len(y), dtype=np.int64)))


# ---------------------------------------------------------------------------
# product-expansion exhaustive scan
# ---------------------------------------------------------------------------


@njit(cache=True)
def _pexp_scan_numba(
    basis, q, w, ha, hb, wts_a, wts_b, pows_a, pows_b, delta, rows_sel, cols_sel
):
    k = basis.shape[0]
    ra = ha.shape[0]
    rb = hb.shape[0]
    nwin_r = rows_sel.shape[0]
    nwin_c = cols_sel.shape[0]
    x = np.zeros(w * w, dtype=np.int64)
    digits = np.zeros(k, dtype=np.int64)
    best = np.int64(1 << 40)
    best_idx = np.int64(-1)
    n_minimal = np.int64(0)
    total = q ** k
    for step in range(1, total):
        pos = 0
        while digits[pos] == q - 1:
            digits[pos] = 0
            for j in range(w * w):
                x[j] = (x[j] + basis[pos, j]) % q
            pos += 1
        digits[pos] += 1
        for j in range(w * w):
            x[j] = (x[j] + basis[pos, j]) % q
        # delta-minimality: rows against ker ha, columns against ker hb
        minimal = True
        for i in range(w):
            wt = np.int64(0)
            for j in range(w):
                if x[i * w + j] != 0:
                    wt += 1
            if wt == 0:
                continue
            code = np.int64(0)
            for u in range(ra):
                s = np.int64(0)
                for j in range(w):
                    s += ha[u, j] * x[i * w + j]
                code += (s % q) * pows_a[u]
            if wt > wts_a[code] + delta:
                minimal = False
                break
        if minimal:
            for j in range(w):
                wt = np.int64(0)
                for i in range(w):
                    if x[i * w + j] != 0:
                        wt += 1
                if wt == 0:
                    continue
                code = np.int64(0)
                for u in range(rb):
                    s = np.int64(0)
                    for i in range(w):
                        s += hb[u, i] * x[i * w + j]
                    code += (s % q) * pows_b[u]
                if wt > wts_b[code] + delta:
                    minimal = False
                    break
        if not minimal:
            continue
        n_minimal += 1
        for wr in range(nwin_r):
            for wc in range(nwin_c):
                wt = np.int64(0)
                for ii in range(rows_sel.shape[1]):
                    i = rows_sel[wr, ii]
                    for jj in range(cols_sel.shape[1]):
                        if x[i * w + cols_sel[wc, jj]] != 0:
                            wt += 1
                if wt < best:
                    best = wt
                    best_idx = step
    return best, best_idx, n_minimal


def _pexp_scan_numpy(
    basis, q, w, ha, hb, wts_a, wts_b, pows_a, pows_b, delta, rows_sel, cols_sel
):
    k = basis.shape[0]
    best = 1 << 40
    best_idx = -1
    n_minimal = 0
    chunk_digits = min(k, 14)
    lead = k - chunk_digits
    pows = q ** np.arange(chunk_digits)
    idx = np.arange(q ** chunk_digits)
    coeffs = (idx[:, None] // pows[None, :]) % q
    block = (coeffs @ basis[:chunk_digits]) % q
    for hi in range(q ** lead):
        shift = np.zeros(w * w, dtype=np.int64)
        rem = hi
        for t in range(lead):
            d = rem % q
            rem //= q
            if d:
                shift = (shift + d * basis[chunk_digits + t]) % q
        cand = (block + shift) % q
        mats = cand.reshape(-1, w, w)
        nz = mats != 0
        row_wts = nz.sum(axis=2)
        col_wts = nz.sum(axis=1)
        row_syn = np.einsum("uj,cij->ciu", ha, mats) % q
        col_syn = np.einsum("ui,cij->cju", hb, mats) % q
        row_codes = row_syn @ pows_a
        col_codes = col_syn @ pows_b
        row_ok = (row_wts <= wts_a[row_codes] + delta) | (row_wts == 0)
        col_ok = (col_wts <= wts_b[col_codes] + delta) | (col_wts == 0)
        minimal = row_ok.all(axis=1) & col_ok.all(axis=1)
        if hi == 0:
            minimal[0] = False  # zero codeword
        n_minimal += int(minimal.sum())
        which = np.nonzero(minimal)[0]
        for c in which:
            sub = nz[c][rows_sel][:, :, cols_sel]
            wmin = int(sub.sum(axis=(1, 3)).min())
            if wmin < best:
                best = wmin
                best_idx = hi * (q ** chunk_digits) + int(c)
    return best, best_idx, n_minimal


def pexp_scan(
    basis: np.ndarray,
    q: int,
    w: int,
    ha: np.ndarray,
    hb: np.ndarray,
    wts_a: np.ndarray,
    wts_b: np.ndarray,
    delta: int,
    rows_sel: np.ndarray,
    cols_sel: np.ndarray,
) -> tuple[int, int, int]:
    """Scan all nonzero codewords x (hb @ X @ ha.T = 0) for window minima.

    basis spans the codeword space (row-major w*w vectors).  wts_a / wts_b
    are coset-leader weight tables for ha / hb.  Only delta-minimal codewords
    participate.  rows_sel / cols_sel list the candidate window index sets.
    Returns (min window weight, odometer index of the first argmin codeword,
    number of minimal codewords); weight 2**40 when no minimal codeword.
    """
    basis = np.asarray(basis, dtype=np.int64) % q
    pows_a = q ** np.arange(ha.shape[0], dtype=np.int64)
    pows_b = q ** np.arange(hb.shape[0], dtype=np.int64)
    args = (
        basis,
        q,
        w,
        np.asarray(ha, dtype=np.int64) % q,
        np.asarray(hb, dtype=np.int64) % q,
        wts_a,
        wts_b,
        pows_a,
        pows_b,
        np.int64(delta),
        np.ascontiguousarray(rows_sel, dtype=np.int64),
        np.ascontiguousarray(cols_sel, dtype=np.int64),
    )
    if USE_NUMBA:
        best, idx, nmin = _pexp_scan_numba(*args)
    else:
        best, idx, nmin = _pexp_scan_numpy(*args)
    return int(best), int(idx), int(nmin)


def codeword_from_index(basis: np.ndarray, index: int, q: int) -> np.ndarray:
    """Reconstruct the enumeration-order codeword at a given odometer index."""
    basis = np.asarray(basis, dtype=np.int64)
    vec = np.zeros(basis.shape[1], dtype=np.int64)
    for i in range(basis.shape[0]):
        d = index % q
        index //= q
        if d:
            vec = (vec + d * basis[i]) % q
    return vec
