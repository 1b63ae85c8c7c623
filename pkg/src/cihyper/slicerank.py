"""Degree slices of homogeneous ideals and their Hilbert values over GF(p).

The degree-``d`` slice of ``(F_1, ..., F_k)`` is spanned by the products
``m * F_i`` with ``m`` a monomial of degree ``d - deg F_i``; writing each
product as a row over the monomial basis of ``S_d`` gives the Macaulay matrix,
and ``H(S/I, d) = C(n+d, n) - rank``.

Generic values are estimated by random specialization. Any specialization of
the coefficients can only lose rank, so the Hilbert value of a random
instance is an upper bound for the generic one: observing 0 certifies that the
generic value is 0, while a positive value is correct with probability at
least ``1 - C(n+d, n)/p`` per trial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import flint
import numpy as np

from .algebra import (
    Form,
    check_capacity,
    derive_seed,
    monomial_array,
    monomial_indices,
    num_monomials,
    random_forms,
)
from .config import DEFAULT_MAX_CELLS, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS
from .errors import CapacityError, DimensionMismatch

# Below this many cells the pure-Python sparse eliminator is faster than a
# round trip through a dense flint matrix.
SPARSE_CUTOFF = 20_000
# Leading rows (in multiples of the column count) tried before the full matrix.
BLOCK_FACTOR = 1


@dataclass(frozen=True)
class SliceMatrix:
    """CSR-style sparse matrix; row ``k`` holds the coefficients of one ``m * F_i``."""

    n: int
    d: int
    ncols: int
    p: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    # (generator position, number of rows) for every generator that contributed
    blocks: tuple[tuple[int, int], ...] = ()

    @property
    def nrows(self) -> int:
        return len(self.indptr) - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[k], self.indptr[k + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def to_dense(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        stop = self.nrows if stop is None else min(stop, self.nrows)
        out = np.zeros((max(stop - start, 0), self.ncols), dtype=np.int64)
        if stop <= start:
            return out
        lo, hi = self.indptr[start], self.indptr[stop]
        counts = np.diff(self.indptr[start : stop + 1])
        rows = np.repeat(np.arange(stop - start), counts)
        out[rows, self.indices[lo:hi]] = self.data[lo:hi]
        return out


def build_slice_matrix(
    gens: Sequence[Form],
    d: int,
    capacity: int | None = None,
    max_cells: int | None = None,
    p: int | None = None,
    n: int | None = None,
) -> SliceMatrix:
    """Macaulay matrix of the ideal ``(gens)`` in degree ``d``.

    Generators of degree above ``d`` contribute no rows. ``n`` and ``p`` are
    only needed when ``gens`` is empty.
    """
    if gens:
        n = gens[0].n
        p = gens[0].p
        for g in gens:
            if g.n != n:
                raise DimensionMismatch("generators live in different polynomial rings")
            if g.p != p:
                raise DimensionMismatch("generators live over different prime fields")
            if g.is_zero:
                raise ValueError("generators must be nonzero")
    elif n is None:
        raise ValueError("an empty generator list needs an explicit n")
    p = DEFAULT_PRIME if p is None else p
    if d < 0:
        raise ValueError("degree must be non-negative")
    ncols = check_capacity(n, d, capacity)
    nrows = sum(num_monomials(n, d - g.degree) for g in gens if g.degree <= d)
    limit = DEFAULT_MAX_CELLS if max_cells is None else max_cells
    if nrows * ncols > limit:
        raise CapacityError(
            f"degree-{d} slice matrix would be {nrows} x {ncols} "
            f"({nrows * ncols} cells, limit {limit})",
            shape=(nrows, ncols),
            limit=limit,
        )

    indptr = [np.zeros(1, dtype=np.int64)]
    indices, data, blocks = [], [], []
    offset = 0
    for pos, g in enumerate(gens):
        if g.degree > d:
            continue
        support = np.flatnonzero(g.coeffs)
        mults = monomial_array(n, d - g.degree)
        exps = mults[:, None, :] + monomial_array(n, g.degree)[support][None, :, :]
        cols = monomial_indices(exps.reshape(-1, n + 1), n, d)
        # multiplying by a monomial is injective, so every row has len(support) entries
        indices.append(cols)
        data.append(np.tile(g.coeffs[support], len(mults)))
        indptr.append(offset + support.size * np.arange(1, len(mults) + 1, dtype=np.int64))
        offset += support.size * len(mults)
        blocks.append((pos, len(mults)))
    return SliceMatrix(
        n=n,
        d=d,
        ncols=ncols,
        p=p,
        indptr=np.concatenate(indptr),
        indices=np.concatenate(indices) if indices else np.zeros(0, np.int64),
        data=np.concatenate(data) if data else np.zeros(0, np.int64),
        blocks=tuple(blocks),
    )


def sparse_rank(rows: Sequence[dict[int, int]], p: int) -> int:
    """Rank over GF(p) of sparse rows given as ``{column: value}`` dicts.

    Incremental fraction-free elimination: each incoming row is cleared
    against stored pivots by cross-multiplication (no inverses), pivoting on
    its first nonzero column.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = {c: v % p for c, v in raw.items() if v % p}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            a, b = piv[lead], row[lead]
            new = {c: a * v % p for c, v in row.items()}
            for c, v in piv.items():
                new[c] = (new.get(c, 0) - b * v) % p
            row = {c: v for c, v in new.items() if v}
    return len(pivots)


def _dense_rank(m: SliceMatrix, stop: int | None = None) -> int:
    dense = m.to_dense(0, stop)
    mat = flint.nmod_mat(dense.shape[0], m.ncols, dense.ravel().tolist(), m.p)
    return mat.rank()


def _flint_rank(m: SliceMatrix) -> int:
    # Tall matrices usually reach full column rank within the first
    # ncols rows; try that block before paying for the whole matrix.
    head = BLOCK_FACTOR * m.ncols
    if m.nrows > 2 * head:
        rank = _dense_rank(m, head)
        if rank == m.ncols:
            return rank
    return _dense_rank(m)


def matrix_rank(m: SliceMatrix, method: str = "auto") -> int:
    """Rank of a slice matrix over GF(p).

    ``method`` is ``"sparse"`` (pure Python elimination), ``"flint"`` (dense
    nmod_mat in row blocks) or ``"auto"``.
    """
    if m.nrows == 0 or m.ncols == 0 or m.data.size == 0:
        return 0
    if method == "auto":
        method = "sparse" if m.nrows * m.ncols <= SPARSE_CUTOFF else "flint"
    if method == "sparse":
        rows = []
        for k in range(m.nrows):
            cols, vals = m.row(k)
            rows.append(dict(zip(cols.tolist(), vals.tolist())))
        return sparse_rank(rows, m.p)
    if method == "flint":
        return _flint_rank(m)
    raise ValueError(f"unknown rank method {method!r}")


def hilbert_value(
    gens: Sequence[Form],
    d: int,
    n: int | None = None,
    capacity: int | None = None,
    max_cells: int | None = None,
    method: str = "auto",
) -> int:
    """``H(S/(gens), d)`` for this particular choice of generators."""
    if gens:
        n = gens[0].n
    elif n is None:
        raise ValueError("an empty generator list needs an explicit n")
    if d < 0:
        return 0
    total = num_monomials(n, d)
    if not any(g.degree <= d for g in gens):
        check_capacity(n, d, capacity)
        return total
    m = build_slice_matrix(gens, d, capacity=capacity, max_cells=max_cells)
    return total - matrix_rank(m, method)


@dataclass(frozen=True)
class HilbertVector:
    """Values ``H(0..d_max)`` of a graded quotient, with provenance."""

    nvars: int
    gen_degrees: tuple[int, ...]
    values: tuple[int, ...]
    mode: str  # "exact" | "exact-conjectural" | "randomized"
    trials_used: int = 0
    prime: int | None = None
    seed: int | None = None

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def value(self, i: int) -> int:
        """``H(i)``, zero past the stored range for artinian quotients."""
        if i < 0:
            return 0
        if i < len(self.values):
            return self.values[i]
        raise IndexError(f"H({i}) is beyond the stored range 0..{len(self.values) - 1}")

    def to_dict(self) -> dict:
        out = {
            "nvars": self.nvars,
            "degrees": list(self.gen_degrees),
            "values": list(self.values),
            "mode": self.mode,
        }
        if self.mode == "randomized":
            out.update(trials=self.trials_used, prime=self.prime, seed=self.seed)
        return out


def trial_seed(seed: int, trial: int) -> int:
    """Seed of the ``trial``-th specialization; independent of the trial count."""
    return derive_seed(seed, 0x7472, trial)


def _reduce_linear(n: int, degrees: Sequence[int]) -> tuple[int, list[int]]:
    # k generic linear forms can be moved to the last k coordinates by a
    # linear change of variables, which keeps the remaining forms uniformly
    # random; the quotient is then a polynomial ring in n + 1 - k variables.
    k = sum(1 for a in degrees if a == 1)
    return n - k, [a for a in degrees if a != 1]


@dataclass(frozen=True)
class GenericValue:
    value: int
    certified_zero: bool
    trials_used: int = field(default=0, compare=False)

    def __iter__(self):
        # unpacks as (value, certified_zero)
        return iter((self.value, self.certified_zero))


def _specialized_values(
    n: int,
    degrees: Sequence[int],
    ds: Sequence[int],
    seed: int,
    p: int,
    capacity: int | None,
    max_cells: int | None,
    method: str,
) -> list[int]:
    m, rest = _reduce_linear(n, degrees)
    out = []
    if m < 0:
        # the linear forms alone span S_1
        return [1 if d == 0 else 0 for d in ds]
    gens = random_forms(m, rest, seed, p, capacity)
    for d in ds:
        out.append(hilbert_value(gens, d, n=m, capacity=capacity, max_cells=max_cells, method=method))
    return out


def generic_hilbert_value(
    n: int,
    degrees: Sequence[int],
    d: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    p: int = DEFAULT_PRIME,
    capacity: int | None = None,
    max_cells: int | None = None,
    method: str = "auto",
) -> GenericValue:
    """Estimate ``H(S/I, d)`` for ``I`` generated by generic forms of the given degrees.

    ``S`` has ``n + 1`` variables. Returns the minimum over ``trials`` random
    specializations; trials stop early once the value reaches 0, which
    certifies that the generic value is 0.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if any(a < 1 for a in degrees):
        raise ValueError("generator degrees must be >= 1")
    best = None
    used = 0
    for t in range(trials):
        used += 1
        (value,) = _specialized_values(n, degrees, [d], trial_seed(seed, t), p, capacity, max_cells, method)
        best = value if best is None else min(best, value)
        if best == 0:
            break
    return GenericValue(best, best == 0, used)


def generic_hilbert_function(
    n: int,
    degrees: Sequence[int],
    d_max: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    p: int = DEFAULT_PRIME,
    capacity: int | None = None,
    max_cells: int | None = None,
    method: str = "auto",
) -> HilbertVector:
    """Randomized Hilbert function ``H(0..d_max)``, degree-wise minimum over trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if any(a < 1 for a in degrees):
        raise ValueError("generator degrees must be >= 1")
    ds = list(range(d_max + 1))
    best = None
    for t in range(trials):
        vals = _specialized_values(n, degrees, ds, trial_seed(seed, t), p, capacity, max_cells, method)
        best = vals if best is None else [min(a, b) for a, b in zip(best, vals)]
    return HilbertVector(
        nvars=n + 1,
        gen_degrees=tuple(sorted(degrees)),
        values=tuple(best),
        mode="randomized",
        trials_used=trials,
        prime=p,
        seed=seed,
    )


def failure_bound(n: int, d: int, p: int, trials: int) -> float:
    """Upper bound on the chance that every trial under-reports the generic rank.

    A maximal nonvanishing minor of the slice matrix is a polynomial of
    degree at most ``C(n+d, n)`` in the coefficients (Schwartz-Zippel).
    """
    per_trial = min(1.0, num_monomials(n, d) / p)
    return per_trial**trials
