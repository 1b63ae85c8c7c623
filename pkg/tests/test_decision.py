import random
from math import comb

import pytest

from cihyper.decision import (
    CIProfile,
    Verdict,
    classify,
    decide,
    fano_ci_criterion,
    ideal_degrees,
    normalize,
    theorem_profiles,
    verify_theorem,
)
from cihyper.joins import JoinSpec, join_dim


def test_profile_validation():
    with pytest.raises(ValueError):
        CIProfile(3, 4, [1, 1, 1, 1])  # r > n
    with pytest.raises(ValueError):
        CIProfile(3, 4, [0, 1])
    with pytest.raises(ValueError):
        CIProfile(3, 0, [1])
    with pytest.raises(ValueError):
        CIProfile(1, 3, [1])
    assert CIProfile(4, 5, [3, 2]).a == (2, 3)


def test_normalize_examples():
    assert normalize(CIProfile(4, 5, [2, 3, 7])) == CIProfile(4, 5, [2, 2])
    assert normalize(CIProfile(3, 4, [4, 1])) is Verdict.TRIVIALLY_CONTAINS
    assert normalize(CIProfile(3, 3, [2, 2])) == CIProfile(3, 3, [1, 1])


def test_normalize_trivial_before_drop():
    assert normalize(CIProfile(3, 4, [4, 9])) is Verdict.TRIVIALLY_CONTAINS


def test_normalize_rejects_empty_residual():
    with pytest.raises(ValueError):
        normalize(CIProfile(3, 4, [5, 6]))


def test_ideal_degrees():
    assert ideal_degrees(CIProfile(5, 6, [1, 1, 1, 1])) == [1, 1, 1, 1, 5, 5, 5, 5]


def test_decide_sextic_line():
    rep = decide(CIProfile(5, 6, [1, 1, 1, 1]))
    assert rep.verdict is Verdict.CONTAINS
    assert rep.certified and rep.hilbert_at_d == 0


def test_decide_quartic_surface_has_no_line():
    rep = decide(CIProfile(3, 4, [1, 1]))
    assert rep.verdict is Verdict.NOT_CONTAINS
    assert not rep.certified
    assert rep.hilbert_at_d == 1
    assert rep.trials == 2
    assert 0 < rep.failure_bound < 1e-12


def test_decide_cubic_surface_has_lines():
    rep = decide(CIProfile(3, 3, [1, 1]))
    assert rep.verdict is Verdict.CONTAINS and rep.certified


def test_decide_trivial():
    rep = decide(CIProfile(3, 4, [4, 1]))
    assert rep.verdict is Verdict.TRIVIALLY_CONTAINS and rep.certified


def test_decide_reproducible():
    a = decide(CIProfile(4, 4, [1, 2, 2]), seed=5)
    b = decide(CIProfile(4, 4, [1, 2, 2]), seed=5)
    assert a == b


@pytest.mark.parametrize(
    "profile,verdict,branch",
    [
        ((4, 5, [2, 2, 2]), Verdict.CONTAINS, "2r=n+2"),
        ((4, 6, [2, 2, 2]), Verdict.NOT_CONTAINS, "2r=n+2"),
        ((6, 4, [2, 2, 2, 2]), Verdict.NOT_CONTAINS, "2r=n+2"),
        ((6, 3, [1, 1, 1, 1]), Verdict.CONTAINS, "2r=n+2"),
        ((8, 3, [1, 1, 1, 1, 1]), Verdict.CONTAINS, "2r=n+2"),
        ((7, 3, [1, 1, 1, 1]), Verdict.NOT_CONTAINS, "2r=n+1"),
        ((7, 2, [1, 1, 1, 1]), Verdict.CONTAINS, "2r=n+1"),
        ((2, 9, [4, 4]), Verdict.CONTAINS, "2r=n+2"),
        ((3, 3, [1, 1]), Verdict.CONTAINS, "2r=n+1"),
        ((3, 4, [1, 1]), Verdict.NOT_CONTAINS, "2r=n+1"),
        ((9, 3, [1, 1, 1, 1, 1]), Verdict.NOT_CONTAINS, "2r=n+1"),
        ((5, 6, [1, 1, 1, 1]), Verdict.OUT_OF_RANGE, "2r>n+2"),
        ((5, 6, [1, 1]), Verdict.NOT_CONTAINS, "2r<n+1"),
        ((10, 2, [1] * 6), Verdict.CONTAINS, "2r=n+2"),
        ((10, 3, [1] * 6), Verdict.NOT_CONTAINS, "2r=n+2"),
    ],
)
def test_classify(profile, verdict, branch):
    pred = classify(CIProfile(*profile))
    assert (pred.verdict, pred.branch) == (verdict, branch)


def test_classify_inequality_branch():
    # for 2r = n+1 the answer is exactly d >= r(d-2) + 1
    for r in range(1, 6):
        n = 2 * r - 1
        if n < 2:
            continue
        for d in range(2, 9):
            pred = classify(CIProfile(n, d, [1] * r))
            assert (pred.verdict is Verdict.CONTAINS) == (d >= r * (d - 2) + 1)


@pytest.mark.parametrize(
    "n,d,r,expected", [(3, 3, 2, True), (4, 5, 3, True), (3, 4, 2, False), (4, 6, 3, False)]
)
def test_fano_examples(n, d, r, expected):
    assert fano_ci_criterion(n, d, r) is expected


def test_fano_requires_d_above_two():
    with pytest.raises(ValueError):
        fano_ci_criterion(3, 2, 1)


def test_theorem_profiles_degenerate():
    assert theorem_profiles(2, 2) == [CIProfile(2, 2, [1, 1])]


def test_theorem_profiles_are_normalized():
    for q in theorem_profiles(6, 5):
        assert normalize(q) == q
        assert 2 * q.r in (q.n + 1, q.n + 2)


def test_verify_small_box():
    rep = verify_theorem(4, 5)
    assert rep.disagreements == []
    assert rep.skipped == []
    assert len(rep.results) == len(theorem_profiles(4, 5))
    assert all(r.agrees for r in rep.results)


def test_verify_degenerate():
    rep = verify_theorem(2, 2)
    (res,) = rep.results
    assert res.decided is Verdict.CONTAINS and res.predicted is Verdict.CONTAINS


def test_verify_records_capacity_skips():
    rep = verify_theorem(4, 4, max_cells=2000)
    assert rep.skipped
    assert all(r.decided is None for r in rep.skipped)
    assert rep.disagreements == []


def random_profiles(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randrange(2, 6)
        d = rng.randrange(2, 7)
        r = rng.randrange(1, n + 1)
        a = [rng.randrange(1, d) for _ in range(r)]
        q = CIProfile(n, d, a)
        if comb(n + d, n) <= 800:
            out.append(q)
    return out


@pytest.mark.parametrize("seed", range(10))
def test_switch_invariance(seed):
    rng = random.Random(1000 + seed)
    for q in random_profiles(5, seed):
        base = decide(q, seed=seed).verdict
        switched = [q.d - x if rng.random() < 0.5 else x for x in q.a]
        assert decide(CIProfile(q.n, q.d, switched), seed=seed + 1).verdict == base


@pytest.mark.parametrize("seed", range(10))
def test_drop_invariance(seed):
    rng = random.Random(2000 + seed)
    for q in random_profiles(5, seed):
        room = q.n - q.r
        if room == 0:
            continue
        extra = [q.d + rng.randrange(1, 4) for _ in range(rng.randrange(1, room + 1))]
        assert decide(CIProfile(q.n, q.d, list(q.a) + extra), seed=seed).verdict == decide(q, seed=seed).verdict


@pytest.mark.parametrize(
    "n,d,a",
    [(3, 3, [1, 1]), (3, 4, [1, 1]), (2, 4, [1, 2]), (4, 4, [1, 1, 1]), (4, 4, [1, 2, 2]), (3, 4, [2, 2]), (2, 5, [2, 2])],
)
def test_decide_agrees_with_join(n, d, a):
    q = CIProfile(n, d, a)
    spec = JoinSpec(n, [(x, d - x) for x in q.a])
    fills = join_dim(spec) == spec.ambient_dim
    assert fills == (decide(q).verdict is Verdict.CONTAINS)


FANO_CASES = [(3, 3), (3, 4), (4, 3), (4, 4), (4, 5), (5, 3), (6, 3), (5, 4), (6, 4), (5, 5)]


@pytest.mark.parametrize("n,d", FANO_CASES)
def test_fano_agrees_with_decide(n, d):
    for r in range(1, n + 1):
        verdict = decide(CIProfile(n, d, [1] * r)).verdict
        assert fano_ci_criterion(n, d, r) == (verdict is Verdict.CONTAINS)
        # degree d-1 generators normalize to linear ones
        assert decide(CIProfile(n, d, [d - 1] * r)).verdict == verdict
