"""Closed-form Hilbert series and Gorenstein structure of the residual quotient.

All arithmetic is on exact integers (polynomial convolution) or ``Fraction``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import OutOfHypothesisWarning
from .slicerank import HilbertVector


def _raw_series(nvars: int, degrees: Sequence[int], d_max: int) -> list[int]:
    """Coefficients of prod(1 - t^a) / (1 - t)^nvars up to t^d_max."""
    if d_max < 0:
        return []
    numerator = [0] * (d_max + 1)
    numerator[0] = 1
    for a in degrees:
        if a < 1:
            raise ValueError("generator degrees must be >= 1")
        for k in range(d_max, a - 1, -1):
            numerator[k] -= numerator[k - a]
    # 1/(1-t)^nvars has coefficients C(k + nvars - 1, nvars - 1)
    free = [comb(k + nvars - 1, nvars - 1) if nvars > 0 else int(k == 0) for k in range(d_max + 1)]
    return [sum(numerator[j] * free[k - j] for j in range(k + 1)) for k in range(d_max + 1)]


def ci_series(nvars: int, degrees: Sequence[int], d_max: int) -> HilbertVector:
    """Hilbert function of ``k[y_1..y_nvars]`` modulo a regular sequence of the given degrees."""
    if nvars < 0:
        raise ValueError("nvars must be non-negative")
    if len(degrees) > nvars:
        raise ValueError(
            f"{len(degrees)} generic forms in {nvars} variables are not a regular "
            "sequence; use slicerank.generic_hilbert_function instead"
        )
    values = _raw_series(nvars, degrees, d_max)
    return HilbertVector(nvars, tuple(sorted(degrees)), tuple(values), "exact")


def froberg_series(nvars: int, degrees: Sequence[int], d_max: int) -> HilbertVector:
    """Fröberg's predicted Hilbert function: the raw series truncated at its first non-positive term."""
    values = _raw_series(nvars, degrees, d_max)
    for k, v in enumerate(values):
        if v <= 0:
            values[k:] = [0] * (len(values) - k)
            break
    mode = "exact" if len(degrees) <= nvars else "exact-conjectural"
    return HilbertVector(nvars, tuple(sorted(degrees)), tuple(values), mode)


def symmetry_center(r: int, d: int, a1: int) -> Fraction:
    if r < 2:
        raise ValueError("r must be at least 2")
    if not 1 <= a1 or 2 * a1 > d:
        raise ValueError("need 1 <= a1 <= d/2")
    return Fraction((r - 1) * d + a1 - 2 * r + 1, 2)


def star_lhs(a: int, r: int) -> int:
    """``C(a+2r-2, a+1) - (2r-1)(2r-2)``; positive iff the equigenerated quotient grows past degree ``a``."""
    if a < 1 or r < 2:
        raise ValueError("need a >= 1 and r >= 2")
    return comb(a + 2 * r - 2, a + 1) - (2 * r - 1) * (2 * r - 2)


def equigenerated_values(a: int, r: int) -> tuple[int, int]:
    """``(H(a), H(a+1))`` for ``2r-1`` generic forms of degree ``a`` in ``2r-1`` variables.

    Warns with :class:`OutOfHypothesisWarning` for ``a = 1``, where the
    closed formulas no longer describe a Hilbert function.
    """
    if a < 1 or r < 2:
        raise ValueError("need a >= 1 and r >= 2")
    if a == 1:
        warnings.warn(
            "equigenerated_values is only meaningful for a > 1; the formulas are evaluated as is",
            OutOfHypothesisWarning,
            stacklevel=2,
        )
    return (
        comb(a + 2 * r - 2, a) - 2 * r + 1,
        comb(a + 2 * r - 1, a + 1) - (2 * r - 1) ** 2,
    )


def in_general_case(r: int, d: int, a1: int) -> bool:
    """Whether the degree pattern is in the range where the growth statements on ``H_A`` hold."""
    return (
        (r == 2 and a1 >= 5)
        or (r == 3 and a1 >= 3)
        or (r == 3 and a1 == 2 and d != 4)
        or (r > 3 and a1 >= 2)
    )


@dataclass(frozen=True)
class GorensteinProfile:
    """Residual artinian Gorenstein quotient

    ``A = k[y_1..y_{2r-1}] / (F_1..F_r, G_r..G_2)``, with ``deg F_i = a_i`` and
    ``deg G_i = d - a_i``, together with the checks on its Hilbert function.
    ``m_surjective`` is the predicted surjectivity of multiplication by
    ``G_1`` from ``A_{a_1}`` to ``A_d``, assuming maximal rank.
    """

    r: int
    d: int
    a: tuple[int, ...]
    c: Fraction
    alpha: Fraction
    beta: Fraction
    hf: HilbertVector
    m_surjective: bool
    general_case: bool
    checks: dict  # item name -> bool, or None when not asserted

    @property
    def socle_degree(self) -> int:
        return int(2 * self.c)

    def H(self, i: int) -> int:
        if i < 0 or i > self.socle_degree:
            return 0
        return self.hf.values[i]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "a": list(self.a),
            "c": str(self.c),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "hf": list(self.hf.values),
            "socle_degree": self.socle_degree,
            "m_surjective": self.m_surjective,
            "general_case": self.general_case,
            "checks": dict(self.checks),
        }


def _check_symmetric(H, sigma: int) -> bool:
    return all(H(i) == H(sigma - i) for i in range(-1, sigma + 2))


def _check_unimodal_tail(H, top: int) -> bool:
    for i in range(top):
        if H(i) >= H(i + 1):
            return all(H(j) >= H(j + 1) for j in range(i, top))
    return True


def gorenstein_profile(r: int, d: int, a: Sequence[int]) -> GorensteinProfile:
    a = tuple(sorted(a))
    if r < 2:
        raise ValueError("r must be at least 2")
    if len(a) != r:
        raise ValueError(f"expected {r} degrees, got {len(a)}")
    if a[0] < 2:
        raise ValueError("a_1 = 1 (hyperplane case) is outside the Gorenstein analysis; reduce variables first")
    if 2 * a[-1] > d:
        raise ValueError("need a_r <= d/2")
    nvars = 2 * r - 1
    degrees = list(a) + [d - ai for ai in reversed(a[1:])]
    c = symmetry_center(r, d, a[0])
    sigma = sum(degrees) - nvars
    assert sigma == 2 * c
    top = max(sigma, d) + 1
    hf = ci_series(nvars, degrees, top)
    H = lambda i: hf.values[i] if 0 <= i < len(hf.values) else 0  # noqa: E731

    a1 = a[0]
    general = in_general_case(r, d, a1)
    checks: dict = {
        "symmetric": _check_symmetric(H, sigma),
        "unimodal_tail": _check_unimodal_tail(H, top),
        "increasing_to_a1": None,
        "above_a1_to_center": None,
        "tail_comparison": None,
    }
    if general:
        checks["increasing_to_a1"] = all(H(i) < H(i + 1) for i in range(a1 + 1))
        checks["above_a1_to_center"] = all(H(a1) < H(i) for i in range(a1 + 1, int(c) + 1))
        checks["tail_comparison"] = all(
            (H(a1) > H(i)) == (c - a1 < i - c) for i in range(int(c) + 1, top + 1) if i > c
        )
    # trim to the socle degree unless d lies beyond it
    hf = HilbertVector(nvars, hf.gen_degrees, hf.values[: max(sigma, d) + 1], "exact")
    return GorensteinProfile(
        r=r,
        d=d,
        a=a,
        c=c,
        alpha=c - a1,
        beta=d - c,
        hf=hf,
        m_surjective=H(a1) >= H(d),
        general_case=general,
        checks=checks,
    )
