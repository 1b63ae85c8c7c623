"""Does the generic degree-``d`` hypersurface of P^n contain a complete intersection of type ``a``?

Two routes are provided: :func:`decide` computes the Hilbert value
``H(S/(F_1..F_r, G_1..G_r), d)`` of random forms with ``deg F_i = a_i`` and
``deg G_i = d - a_i`` (zero means yes), and :func:`classify` evaluates the
closed-form classification for ``2r <= n + 2``. :func:`verify_theorem` runs
both over a box of parameters and lists disagreements.
"""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .algebra import derive_seed, num_monomials
from .config import DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS
from .errors import CapacityError
from .slicerank import failure_bound, generic_hilbert_value

log = logging.getLogger(__name__)


class Verdict(str, enum.Enum):
    CONTAINS = "Contains"
    NOT_CONTAINS = "NotContains"
    TRIVIALLY_CONTAINS = "TriviallyContains"
    OUT_OF_RANGE = "OutOfRange"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CIProfile:
    """Query parameters: ambient ``P^n``, hypersurface degree ``d``, CI degrees ``a`` (sorted)."""

    n: int
    d: int
    a: tuple[int, ...]

    def __init__(self, n: int, d: int, a: Iterable[int]):
        a = tuple(sorted(int(x) for x in a))
        if n < 2:
            raise ValueError("n must be >= 2")
        if d < 1:
            raise ValueError("d must be >= 1")
        if not a:
            raise ValueError("a complete intersection needs at least one degree")
        if a[0] < 1:
            raise ValueError("complete intersection degrees must be >= 1")
        if len(a) > n:
            raise ValueError(f"codimension r={len(a)} exceeds n={n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "a", a)

    @property
    def r(self) -> int:
        return len(self.a)

    def __str__(self):
        return f"(n={self.n}, d={self.d}, a={','.join(map(str, self.a))})"

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "a": list(self.a)}


def normalize(profile: CIProfile) -> CIProfile | Verdict:
    """Reduce to ``a_1 <= ... <= a_r <= d/2``.

    Returns :attr:`Verdict.TRIVIALLY_CONTAINS` when some ``a_i == d`` (cut the
    hypersurface with the other ``r - 1`` forms). Degrees above ``d`` are
    dropped, and each remaining ``a_i`` is replaced by ``min(a_i, d - a_i)``.
    """
    d = profile.d
    if any(x == d for x in profile.a):
        return Verdict.TRIVIALLY_CONTAINS
    kept = [min(x, d - x) for x in profile.a if x < d]
    if not kept:
        raise ValueError(f"every degree of {profile} exceeds d; nothing left to decide")
    return CIProfile(profile.n, d, kept)


@dataclass(frozen=True)
class DecisionReport:
    verdict: Verdict
    certified: bool
    trials: int
    hilbert_at_d: int
    normalized_profile: CIProfile
    prime: int
    seed: int
    failure_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "certified": self.certified,
            "trials": self.trials,
            "hilbert_at_d": self.hilbert_at_d,
            "normalized_profile": self.normalized_profile.to_dict(),
            "prime": self.prime,
            "seed": self.seed,
            "failure_bound": self.failure_bound,
        }


def ideal_degrees(profile: CIProfile) -> list[int]:
    """Degrees ``a_1..a_r, d-a_1..d-a_r`` of the generators whose degree-``d`` slice is tested."""
    return list(profile.a) + [profile.d - x for x in profile.a]


def decide(
    profile: CIProfile,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    p: int = DEFAULT_PRIME,
    capacity: int | None = None,
    max_cells: int | None = None,
) -> DecisionReport:
    """Randomized decision; ``Contains`` answers are certified, ``NotContains`` ones are probabilistic."""
    normal = normalize(profile)
    if normal is Verdict.TRIVIALLY_CONTAINS:
        return DecisionReport(Verdict.TRIVIALLY_CONTAINS, True, 0, 0, profile, p, seed)
    res = generic_hilbert_value(
        normal.n, ideal_degrees(normal), normal.d, trials, seed, p, capacity, max_cells
    )
    if res.certified_zero:
        return DecisionReport(Verdict.CONTAINS, True, res.trials_used, 0, normal, p, seed)
    return DecisionReport(
        Verdict.NOT_CONTAINS,
        False,
        res.trials_used,
        res.value,
        normal,
        p,
        seed,
        failure_bound(normal.n, normal.d, p, res.trials_used),
    )


@dataclass(frozen=True)
class TheoremPrediction:
    verdict: Verdict
    branch: str

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "branch": self.branch}


def classify(profile: CIProfile) -> TheoremPrediction:
    """Closed-form answer for ``2r <= n + 2``; ``OutOfRange`` beyond that."""
    normal = normalize(profile)
    if normal is Verdict.TRIVIALLY_CONTAINS:
        return TheoremPrediction(Verdict.TRIVIALLY_CONTAINS, "a_i=d")
    n, d, r = normal.n, normal.d, normal.r
    twice_r = 2 * r
    if twice_r < n + 1:
        return TheoremPrediction(Verdict.NOT_CONTAINS, "2r<n+1")
    if twice_r == n + 1:
        ok = d >= r * (d - 2) + 1
        return TheoremPrediction(Verdict.CONTAINS if ok else Verdict.NOT_CONTAINS, "2r=n+1")
    if twice_r == n + 2:
        ok = r == 2 or (r == 3 and d <= 5) or (r in (4, 5) and d <= 3) or d == 2
        return TheoremPrediction(Verdict.CONTAINS if ok else Verdict.NOT_CONTAINS, "2r=n+2")
    return TheoremPrediction(Verdict.OUT_OF_RANGE, "2r>n+2")


def fano_ci_criterion(n: int, d: int, r: int) -> bool:
    """``C(n-r+d, d) <= (n-r+1) r``: the existence criterion for degrees all in ``{1, d-1}``."""
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    if d <= 2:
        raise ValueError("the criterion is stated for d > 2")
    return comb(n - r + d, d) <= (n - r + 1) * r


def _multisets(r: int, hi: int, lo: int = 1):
    if r == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _multisets(r - 1, hi, first):
            yield (first,) + rest


def theorem_profiles(n_max: int, d_max: int) -> list[CIProfile]:
    """Normalized profiles with ``2 <= n <= n_max``, ``2 <= d <= d_max`` and ``2r`` in ``{n+1, n+2}``."""
    out = []
    for n in range(2, n_max + 1):
        for d in range(2, d_max + 1):
            for r in range(1, n + 1):
                if 2 * r not in (n + 1, n + 2):
                    continue
                for a in _multisets(r, d // 2):
                    out.append(CIProfile(n, d, a))
    return out


@dataclass(frozen=True)
class InstanceResult:
    profile: CIProfile
    decided: Verdict | None
    predicted: Verdict
    branch: str
    hilbert_at_d: int | None
    seconds: float
    skipped: str | None = None

    @property
    def agrees(self) -> bool:
        return self.skipped is None and self.decided == self.predicted

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "decided": None if self.decided is None else self.decided.value,
            "predicted": self.predicted.value,
            "branch": self.branch,
            "hilbert_at_d": self.hilbert_at_d,
            "skipped": self.skipped,
        }


@dataclass
class VerifyReport:
    n_max: int
    d_max: int
    prime: int
    seed: int
    trials: int
    results: list[InstanceResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def disagreements(self) -> list[InstanceResult]:
        return [x for x in self.results if x.skipped is None and not x.agrees]

    @property
    def skipped(self) -> list[InstanceResult]:
        return [x for x in self.results if x.skipped is not None]

    def to_dict(self, include_instances: bool = False) -> dict:
        out = {
            "n_max": self.n_max,
            "d_max": self.d_max,
            "prime": self.prime,
            "seed": self.seed,
            "trials": self.trials,
            "instances": len(self.results),
            "checked": len(self.results) - len(self.skipped),
            "skipped": [x.to_dict() for x in self.skipped],
            "disagreements": [x.to_dict() for x in self.disagreements],
        }
        if include_instances:
            out["results"] = [x.to_dict() for x in self.results]
        return out


def profile_seed(seed: int, profile: CIProfile) -> int:
    """Per-profile seed, so a profile's outcome does not depend on enumeration order."""
    return derive_seed(seed, profile.n, profile.d, *profile.a)


def _run_instance(args) -> InstanceResult:
    profile, trials, seed, p, capacity, max_cells = args
    pred = classify(profile)
    start = time.perf_counter()
    try:
        rep = decide(profile, trials, profile_seed(seed, profile), p, capacity, max_cells)
    except CapacityError as exc:
        return InstanceResult(profile, None, pred.verdict, pred.branch, None,
                              time.perf_counter() - start, skipped=str(exc))
    return InstanceResult(profile, rep.verdict, pred.verdict, pred.branch, rep.hilbert_at_d,
                          time.perf_counter() - start)


def verify_theorem(
    n_max: int,
    d_max: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    p: int = DEFAULT_PRIME,
    capacity: int | None = None,
    max_cells: int | None = None,
    jobs: int = 1,
) -> VerifyReport:
    """Compare :func:`decide` with :func:`classify` on every in-range normalized profile."""
    profiles = theorem_profiles(n_max, d_max)
    # largest slices first so a worker pool stays balanced
    order = sorted(profiles, key=lambda q: -num_monomials(q.n, q.d))
    tasks = [(q, trials, seed, p, capacity, max_cells) for q in order]
    start = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_instance, tasks))
    else:
        results = [_run_instance(t) for t in tasks]
    by_profile = {r.profile: r for r in results}
    report = VerifyReport(n_max, d_max, p, seed, trials, [by_profile[q] for q in profiles])
    report.seconds = time.perf_counter() - start
    for r in report.skipped:
        log.warning("skipped %s: %s", r.profile, r.skipped)
    for r in report.disagreements:
        log.error("disagreement at %s: decide=%s classify=%s (%s)",
                  r.profile, r.decided, r.predicted, r.branch)
    return report
