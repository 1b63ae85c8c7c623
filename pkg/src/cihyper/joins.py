"""Varieties of reducible forms, their tangent spaces, joins and secants.

A general point of the variety of forms factoring with degree pattern
``lambda`` is a product ``F_1 ... F_s`` of random forms. Its affine tangent
space is the degree-``d`` slice of the ideal generated by the omit-one
products ``F_1 .. F_i^ .. F_s``; by Terracini, the tangent space of a join at a
general point is the span of the tangent spaces at the summands, so all join
and secant dimensions reduce to ranks of stacked slice matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .algebra import Form, derive_seed, num_monomials, product, random_forms
from .config import DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS
from .errors import DimensionMismatch
from .slicerank import build_slice_matrix, matrix_rank


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(x) for x in parts), reverse=True))
        if not parts:
            raise ValueError("a partition needs at least one part")
        if parts[-1] < 1:
            raise ValueError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """``"1+3"`` -> Partition((3, 1))."""
        try:
            return cls(int(x) for x in text.split("+"))
        except ValueError as exc:
            raise ValueError(f"bad partition {text!r}: {exc}") from None

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "+".join(str(x) for x in sorted(self.parts))


@dataclass(frozen=True)
class JoinSpec:
    n: int
    lambdas: tuple[Partition, ...]

    def __init__(self, n: int, lambdas: Iterable[Partition | Sequence[int]]):
        lams = tuple(x if isinstance(x, Partition) else Partition(x) for x in lambdas)
        if not lams:
            raise ValueError("a join needs at least one partition")
        if len({lam.total for lam in lams}) != 1:
            raise ValueError("all partitions in a join must have the same total degree")
        if n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lambdas", lams)

    @property
    def d(self) -> int:
        return self.lambdas[0].total

    @property
    def ambient_dim(self) -> int:
        """``N = C(d+n, n) - 1``."""
        return num_monomials(self.n, self.d) - 1


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def reducible_dim(lam: Partition | Sequence[int], n: int) -> int:
    lam = _as_partition(lam)
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(comb(part + n, n) for part in lam.parts) - len(lam.parts)


def omit_one_products(factors: Sequence[Form]) -> list[Form]:
    if not factors:
        raise ValueError("need at least one factor")
    n, p = factors[0].n, factors[0].p
    return [product(factors[:i] + factors[i + 1 :], n=n, p=p) for i in range(len(factors))]


def _check_factors(factors: Sequence[Form]) -> None:
    if not factors:
        raise ValueError("need at least one factor")
    n = factors[0].n
    for f in factors:
        if f.n != n:
            raise DimensionMismatch("factors live in different polynomial rings")
        if f.is_zero:
            raise ValueError("factors must be nonzero")


def tangent_dim(factors: Sequence[Form], capacity=None, max_cells=None) -> int:
    """Projective dimension of the tangent space to the reducible-forms variety at ``prod(factors)``."""
    factors = list(factors)
    _check_factors(factors)
    d = sum(f.degree for f in factors)
    m = build_slice_matrix(omit_one_products(factors), d, capacity=capacity, max_cells=max_cells)
    return matrix_rank(m) - 1


def _sample_tangent_generators(spec: JoinSpec, seed: int, p: int, capacity) -> list[Form]:
    gens: list[Form] = []
    for k, lam in enumerate(spec.lambdas):
        factors = random_forms(spec.n, lam.parts, derive_seed(seed, k), p, capacity)
        gens.extend(omit_one_products(factors))
    return gens


def join_dim(
    spec: JoinSpec,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    p: int = DEFAULT_PRIME,
    capacity=None,
    max_cells=None,
) -> int:
    """Dimension of the join of the reducible-forms varieties in ``spec``.

    Rank only drops under specialization, so the maximum over trials is the
    best available estimate of the generic value.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    N = spec.ambient_dim
    best = -1
    for t in range(trials):
        gens = _sample_tangent_generators(spec, derive_seed(seed, 0x6A6F696E, t), p, capacity)
        m = build_slice_matrix(gens, spec.d, capacity=capacity, max_cells=max_cells)
        best = max(best, matrix_rank(m) - 1)
        if best >= N:
            break
    return min(best, N)


def secant_dim(
    lam: Partition | Sequence[int],
    k: int,
    n: int,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    p: int = DEFAULT_PRIME,
    capacity=None,
    max_cells=None,
) -> int:
    """Dimension of the join of ``k`` copies of the reducible-forms variety of ``lam``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lam = _as_partition(lam)
    return join_dim(JoinSpec(n, [lam] * k), seed, trials, p, capacity, max_cells)


def defect(
    lam: Partition | Sequence[int],
    n: int,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    p: int = DEFAULT_PRIME,
    capacity=None,
    max_cells=None,
) -> int:
    """``2 dim X + 1 - dim Sec_1(X)``; positive also when the secant fills the space (virtual defect)."""
    lam = _as_partition(lam)
    return 2 * reducible_dim(lam, n) + 1 - secant_dim(lam, 2, n, seed, trials, p, capacity, max_cells)


def expected_join_dim(spec: JoinSpec) -> int:
    """Terracini upper bound ``min(N, sum dim X_i + (#summands - 1))``."""
    naive = sum(reducible_dim(lam, spec.n) for lam in spec.lambdas) + len(spec.lambdas) - 1
    return min(spec.ambient_dim, naive)
