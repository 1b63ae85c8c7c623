"""Dense homogeneous forms over a prime field.

Monomials of a fixed degree are ordered graded-reverse-lexicographically with
``x0 > x1 > ... > xn``; a form of degree ``d`` in ``n+1`` variables stores one
coefficient per monomial, in that order. The order is global, so coefficient
vectors, slice matrices and serialized forms are reproducible byte for byte.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPACITY, DEFAULT_PRIME
from .errors import (
    CapacityError,
    CoefficientRangeError,
    DimensionMismatch,
    FormSyntaxError,
    InhomogeneousForm,
)

Monomial = tuple  # exponent vector (e0, ..., en)

_MASK64 = (1 << 64) - 1


def num_monomials(n: int, d: int) -> int:
    """Number of degree-``d`` monomials in ``n+1`` variables."""
    if d < 0:
        return 0
    return comb(n + d, n)


def check_capacity(n: int, d: int, capacity: int | None = None) -> int:
    size = num_monomials(n, d)
    limit = DEFAULT_CAPACITY if capacity is None else capacity
    if size > limit:
        raise CapacityError(
            f"degree-{d} slice in {n + 1} variables has {size} monomials "
            f"(capacity {limit})",
            shape=(None, size),
            limit=limit,
        )
    return size


def _compositions(total: int, parts: int):
    # Lexicographically ascending compositions of ``total`` into ``parts`` pieces.
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _monomials(n: int, d: int) -> tuple[Monomial, ...]:
    # grevlex descending == ascending lex on the reversed exponent vector
    return tuple(tuple(reversed(c)) for c in _compositions(d, n + 1))


def enumerate_monomials(n: int, d: int, capacity: int | None = None) -> list[Monomial]:
    """All degree-``d`` monomials in ``x0..xn``, largest first in grevlex."""
    if n < 0 or d < 0:
        raise ValueError("n and d must be non-negative")
    check_capacity(n, d, capacity)
    return list(_monomials(n, d))


@lru_cache(maxsize=256)
def monomial_array(n: int, d: int) -> np.ndarray:
    """Exponent matrix of shape (C(n+d, n), n+1) in grevlex order (read-only)."""
    if d < 0:
        arr = np.zeros((0, n + 1), dtype=np.int64)
    else:
        arr = np.array(_monomials(n, d), dtype=np.int64).reshape(-1, n + 1)
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=64)
def _binom_table(top: int, k: int) -> np.ndarray:
    table = np.zeros((top + 1, k + 1), dtype=np.int64)
    for a in range(top + 1):
        for b in range(min(a, k) + 1):
            table[a, b] = comb(a, b)
    return table


def monomial_index(m: Sequence[int], n: int) -> int:
    """Position of monomial ``m`` in ``enumerate_monomials(n, deg m)``."""
    if len(m) != n + 1:
        raise DimensionMismatch(f"monomial {tuple(m)} does not have {n + 1} exponents")
    if any(e < 0 for e in m):
        raise ValueError(f"negative exponent in {tuple(m)}")
    remaining = sum(m)
    index = 0
    # Walk the reversed vector y = (e_n, ..., e_0); block sizes by hockey stick.
    for j, e in enumerate(reversed(m[1:])):
        k = n - j
        index += comb(remaining + k, k) - comb(remaining - e + k, k)
        remaining -= e
    return index


def monomial_indices(exps: np.ndarray, n: int, d: int) -> np.ndarray:
    """Vectorised :func:`monomial_index` for rows of ``exps`` (all of degree ``d``)."""
    exps = np.asarray(exps, dtype=np.int64)
    if exps.ndim != 2 or exps.shape[1] != n + 1:
        raise DimensionMismatch(f"expected exponent rows of length {n + 1}")
    table = _binom_table(n + d, n)
    index = np.zeros(exps.shape[0], dtype=np.int64)
    remaining = np.full(exps.shape[0], d, dtype=np.int64)
    for j in range(n):
        k = n - j
        e = exps[:, n - j]
        index += table[remaining + k, k] - table[remaining - e + k, k]
        remaining = remaining - e
    return index


class Form:
    """Homogeneous polynomial of fixed degree with coefficients in GF(p).

    Instances are immutable; the coefficient array is read-only.
    """

    __slots__ = ("n", "degree", "coeffs", "p")

    def __init__(self, n: int, degree: int, coeffs: Iterable[int], p: int = DEFAULT_PRIME):
        if n < 0 or degree < 0:
            raise ValueError("n and degree must be non-negative")
        values = [int(c) % p for c in coeffs]
        expected = num_monomials(n, degree)
        if len(values) != expected:
            raise DimensionMismatch(
                f"degree-{degree} form in {n + 1} variables needs {expected} "
                f"coefficients, got {len(values)}"
            )
        arr = np.array(values, dtype=np.int64)
        arr.flags.writeable = False
        self.n = n
        self.degree = degree
        self.coeffs = arr
        self.p = p

    @classmethod
    def _from_array(cls, n: int, degree: int, arr: np.ndarray, p: int) -> "Form":
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        obj.n, obj.degree, obj.coeffs, obj.p = n, degree, arr, p
        return obj

    @classmethod
    def zero(cls, n: int, degree: int, p: int = DEFAULT_PRIME) -> "Form":
        return cls._from_array(n, degree, np.zeros(num_monomials(n, degree), np.int64), p)

    @classmethod
    def constant(cls, n: int, value: int = 1, p: int = DEFAULT_PRIME) -> "Form":
        return cls(n, 0, [value], p)

    @classmethod
    def variable(cls, n: int, i: int, p: int = DEFAULT_PRIME) -> "Form":
        if not 0 <= i <= n:
            raise DimensionMismatch(f"x{i} is not a variable of a ring with {n + 1} variables")
        exps = [0] * (n + 1)
        exps[i] = 1
        return cls.from_terms(n, 1, {tuple(exps): 1}, p)

    @classmethod
    def from_terms(cls, n: int, degree: int, terms: dict, p: int = DEFAULT_PRIME) -> "Form":
        """Build from ``{exponent tuple: coefficient}``; repeated keys are impossible."""
        arr = np.zeros(num_monomials(n, degree), dtype=np.int64)
        for exps, c in terms.items():
            if sum(exps) != degree:
                raise InhomogeneousForm(f"monomial {exps} does not have degree {degree}")
            i = monomial_index(exps, n)
            arr[i] = (int(arr[i]) + int(c)) % p
        return cls._from_array(n, degree, arr, p)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def terms(self) -> list[tuple[Monomial, int]]:
        """Nonzero terms in grevlex order."""
        mons = _monomials(self.n, self.degree)
        return [(mons[i], int(self.coeffs[i])) for i in np.flatnonzero(self.coeffs)]

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.n + 1:
            raise DimensionMismatch("point has the wrong number of coordinates")
        p = self.p
        total = 0
        for exps, c in self.terms():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * pow(int(x), e, p) % p
            total += term
        return total % p

    def __mul__(self, other: "Form") -> "Form":
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree == other.degree
            and self.p == other.p
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.n, self.degree, self.p, self.coeffs.tobytes()))

    def __repr__(self):
        body = serialize_form(self)
        if len(body) > 60:
            body = body[:57] + "..."
        return f"Form(n={self.n}, degree={self.degree}, {body!r})"


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministically mix a 64-bit seed with integer keys."""
    h = splitmix64(seed & _MASK64)
    for k in keys:
        h = splitmix64(h ^ (k & _MASK64))
    return h


def random_form(
    n: int, d: int, seed: int, p: int = DEFAULT_PRIME, capacity: int | None = None
) -> Form:
    """Uniformly random degree-``d`` form, fully determined by ``(n, d, seed, p)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if d < 1:
        raise ValueError("random forms must have degree >= 1")
    size = check_capacity(n, d, capacity)
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, n, d, p)))
    return Form._from_array(n, d, rng.integers(0, p, size=size, dtype=np.int64), p)


def random_forms(
    n: int, degrees: Sequence[int], seed: int, p: int = DEFAULT_PRIME, capacity: int | None = None
) -> list[Form]:
    """Independent random forms, one per entry of ``degrees``."""
    return [random_form(n, a, derive_seed(seed, i), p, capacity) for i, a in enumerate(degrees)]


def multiply(f: Form, g: Form, capacity: int | None = None) -> Form:
    if f.n != g.n:
        raise DimensionMismatch(f"cannot multiply forms in {f.n + 1} and {g.n + 1} variables")
    if f.p != g.p:
        raise DimensionMismatch(f"forms live over GF({f.p}) and GF({g.p})")
    n, p, d = f.n, f.p, f.degree + g.degree
    check_capacity(n, d, capacity)
    out = np.zeros(num_monomials(n, d), dtype=np.int64)
    fi = np.flatnonzero(f.coeffs)
    gi = np.flatnonzero(g.coeffs)
    if fi.size and gi.size:
        exps = monomial_array(n, f.degree)[fi][:, None, :] + monomial_array(n, g.degree)[gi][None, :, :]
        idx = monomial_indices(exps.reshape(-1, n + 1), n, d)
        vals = (f.coeffs[fi][:, None] * g.coeffs[gi][None, :]) % p
        # each summand < 2**31, so the int64 accumulator cannot overflow
        np.add.at(out, idx, vals.ravel())
        out %= p
    return Form._from_array(n, d, out, p)


def product(forms: Sequence[Form], n: int | None = None, p: int | None = None) -> Form:
    """Product of a list of forms; the empty product is the constant 1."""
    if not forms:
        if n is None:
            raise ValueError("empty product needs an explicit n")
        return Form.constant(n, 1, DEFAULT_PRIME if p is None else p)
    result = forms[0]
    for f in forms[1:]:
        result = multiply(result, f)
    return result


# --- text and JSON formats -------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x(?P<idx>\d+)(?:\s*\^\s*(?P<exp>\d+))?)|(?P<op>[-+*]))")


def parse_form(text: str, n: int, p: int = DEFAULT_PRIME, degree: int | None = None) -> Form:
    """Parse ``"3*x0^2*x1 - x2^3 + ..."`` into a form in ``x0..xn``.

    The literal ``"0"`` is the zero form of degree ``degree`` (0 if not given).
    Coefficients must be below ``p``; a ``-`` sign negates mod ``p``.
    """
    length = len(text)

    def skip_ws(i: int) -> int:
        while i < length and text[i].isspace():
            i += 1
        return i

    def read_term(pos: int) -> tuple[int | None, tuple[int, ...], int]:
        coeff = None
        exps = [0] * (n + 1)
        first = True
        while True:
            m = _TOKEN.match(text, pos)
            if m is None or m.group("op") is not None:
                raise FormSyntaxError("expected a coefficient or a variable", skip_ws(pos))
            if m.group("int") is not None:
                if not first:
                    raise FormSyntaxError("coefficient must come first in a term", m.start("int"))
                coeff = int(m.group("int"))
                if coeff >= p:
                    raise CoefficientRangeError(
                        f"coefficient {coeff} at position {m.start('int')} is not below p={p}"
                    )
            else:
                i = int(m.group("idx"))
                if i > n:
                    raise FormSyntaxError(f"variable x{i} out of range for n={n}", m.start("var"))
                exps[i] += int(m.group("exp")) if m.group("exp") is not None else 1
            pos = m.end()
            first = False
            nxt = skip_ws(pos)
            if nxt < length and text[nxt] == "*":
                pos = nxt + 1
                continue
            return coeff, tuple(exps), pos

    terms: list[tuple[int, tuple[int, ...], int]] = []  # (coeff mod p, exps, start)
    pos = skip_ws(0)
    if pos == length:
        raise FormSyntaxError("empty form", pos)
    sign = 1
    if text[pos] in "+-":
        sign = -1 if text[pos] == "-" else 1
        pos = skip_ws(pos + 1)
    while True:
        start = pos
        coeff, exps, pos = read_term(pos)
        terms.append(((sign * (1 if coeff is None else coeff)) % p, exps, start))
        pos = skip_ws(pos)
        if pos == length:
            break
        if text[pos] not in "+-":
            raise FormSyntaxError("expected '+' or '-'", pos)
        sign = -1 if text[pos] == "-" else 1
        pos = skip_ws(pos + 1)
        if pos == length:
            raise FormSyntaxError("dangling operator", pos)

    literal_zero = len(terms) == 1 and terms[0][0] == 0 and not any(terms[0][1])
    if literal_zero:
        return Form.zero(n, 0 if degree is None else degree, p)
    if degree is None:
        degree = sum(terms[0][1])
    out: dict[tuple[int, ...], int] = {}
    for c, exps, start in terms:
        if sum(exps) != degree:
            raise InhomogeneousForm(
                f"term at position {start} has degree {sum(exps)}, expected {degree}"
            )
        out[exps] = (out.get(exps, 0) + c) % p
    return Form.from_terms(n, degree, out, p)


def serialize_form(f: Form) -> str:
    """Canonical text: nonzero terms in grevlex order, coefficients in ``[0, p)``."""
    pieces = []
    for exps, c in f.terms():
        factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        pieces.append("*".join(factors))
    return " + ".join(pieces) if pieces else "0"


def form_to_json(f: Form) -> dict:
    return {
        "n": f.n,
        "degree": f.degree,
        "terms": [{"coeff": c, "exps": list(e)} for e, c in f.terms()],
    }


def form_from_json(obj: dict | str, p: int = DEFAULT_PRIME) -> Form:
    if isinstance(obj, str):
        obj = json.loads(obj)
    n, degree = int(obj["n"]), int(obj["degree"])
    terms: dict[tuple[int, ...], int] = {}
    for t in obj.get("terms", []):
        c, exps = int(t["coeff"]), tuple(int(e) for e in t["exps"])
        if not -p < c < p:
            raise CoefficientRangeError(f"coefficient {c} is out of range for p={p}")
        if len(exps) != n + 1:
            raise DimensionMismatch(f"term {exps} does not have {n + 1} exponents")
        if sum(exps) != degree:
            raise InhomogeneousForm(f"term {exps} does not have degree {degree}")
        terms[exps] = (terms.get(exps, 0) + c) % p
    return Form.from_terms(n, degree, terms, p)


def read_forms(text: str, n: int, p: int = DEFAULT_PRIME) -> list[Form]:
    """Read a form file: a JSON list/object, or one text form per non-blank line.

    Lines starting with ``#`` are comments.
    """
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(stripped)
        if isinstance(data, dict):
            data = [data]
        forms = [form_from_json(obj, p) for obj in data]
        for f in forms:
            if f.n != n:
                raise DimensionMismatch(f"form has n={f.n}, expected n={n}")
        return forms
    return [
        parse_form(line, n, p)
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]


__all__ = [
    "Form",
    "Monomial",
    "derive_seed",
    "enumerate_monomials",
    "form_from_json",
    "form_to_json",
    "monomial_array",
    "monomial_index",
    "monomial_indices",
    "multiply",
    "num_monomials",
    "parse_form",
    "product",
    "random_form",
    "random_forms",
    "read_forms",
    "serialize_form",
]
