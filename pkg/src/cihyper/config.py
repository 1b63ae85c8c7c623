"""Session-wide defaults: field prime, trial count, capacity limits.

Defaults can be overridden with the environment variables ``CIHYPER_PRIME``,
``CIHYPER_CAPACITY`` and ``CIHYPER_MAX_CELLS``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import flint

# Largest prime below 2**31; products of two residues fit in a signed 64-bit int.
MERSENNE_31 = 2147483647
MAX_PRIME = 2**31 - 1


def is_prime(p: int) -> bool:
    return p >= 2 and bool(flint.fmpz(p).is_prime())


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"modulus {p} exceeds 2**31 - 1 (int64 products would overflow)")
    return p


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


DEFAULT_PRIME = check_prime(_env_int("CIHYPER_PRIME", MERSENNE_31))
DEFAULT_TRIALS = 2
DEFAULT_SEED = 0
# Upper bound on C(n+d, n), the number of monomials in one degree slice.
DEFAULT_CAPACITY = _env_int("CIHYPER_CAPACITY", 200_000)
# Upper bound on rows * cols of a slice matrix handed to the rank routine.
DEFAULT_MAX_CELLS = _env_int("CIHYPER_MAX_CELLS", 20_000_000)


@dataclass(frozen=True)
class Config:
    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    capacity_cols: int = DEFAULT_CAPACITY
    max_cells: int = DEFAULT_MAX_CELLS
    output: str = "text"

    def __post_init__(self):
        check_prime(self.prime)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.output not in ("json", "tsv", "text"):
            raise ValueError(f"unknown output format {self.output!r}")
