"""Enumeration of positively curved Eschenburg spaces and 3-Sasakian triples by |r|.

In normal form k = (k1, k2, l1 + l2 - k1 - k2), l = (l1, l2, 0) with
k1 >= k2 > l1 >= l2 >= 0 one has

    |r| = k1 (k1 - l1) + (k2 - l2)(k1 + k2 - l1),

so for fixed |r| = N the loops over k1, l1, k2 are bounded and l2 is solved for.
3-Sasakian triples a > b > c > 0 satisfy |r| = ab + ac + bc and are solved for a.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Tuple, Union

from .errors import InvalidParameters, InvariantViolation
from .exact_arith import pairwise_coprime
from .spaces import (
    NormalizedSpace,
    ParamPair,
    SasakianTriple,
    is_free,
    is_positively_curved,
)


class Family(Enum):
    GENERAL = "eschenburg"
    SASAKIAN = "sasakian"


@dataclass(frozen=True)
class EnumerationRequest:
    family: Family
    r_min: int
    r_max: int

    def __post_init__(self) -> None:
        if self.r_min % 2 == 0 or self.r_max % 2 == 0 or self.r_min < 1:
            raise InvalidParameters(
                f"r range must be positive odd integers, got [{self.r_min}, {self.r_max}]"
            )
        if self.r_min > self.r_max:
            raise InvalidParameters(f"empty r range [{self.r_min}, {self.r_max}]")

    def r_values(self) -> range:
        return range(self.r_min, self.r_max + 1, 2)


def _require_odd(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise InvalidParameters(f"|r| must be a positive odd integer, got {n}")


def enum_positively_curved(n: int) -> List[NormalizedSpace]:
    """All positively curved spaces with |r| = n, in lexicographic (k1, k2, l1, l2) order."""
    _require_odd(n)
    found: List[NormalizedSpace] = []
    for k1 in range(1, n + 1):
        # smallest first summand is k1 * 1, and the second summand is >= 1
        if k1 > n - 1:
            break
        for d in range(min(k1, (n - 1) // k1), 0, -1):
            l1 = k1 - d
            rest = n - k1 * d
            for k2 in range(l1 + 1, k1 + 1):
                m = k1 + k2 - l1
                if rest % m:
                    continue
                l2 = k2 - rest // m
                if not 0 <= l2 <= l1:
                    continue
                pp = ParamPair((k1, k2, l1 + l2 - k1 - k2), (l1, l2, 0))
                if not is_free(pp):
                    continue
                _check_emitted(pp, n)
                found.append(NormalizedSpace(pp))
    found.sort(key=lambda ns: ns.key)
    return found


def _check_emitted(pp: ParamPair, n: int) -> None:
    if abs(pp.r) != n or not is_positively_curved(pp):
        raise InvariantViolation(f"enumeration emitted {pp}, which is not a curved space of order {n}")
    if pp.r % 2 == 0:
        raise InvariantViolation(f"free space {pp} has even r = {pp.r}")


def enum_sasakian(r: int) -> List[SasakianTriple]:
    """All pairwise coprime a > b > c > 0 with ab + ac + bc = r, lexicographically."""
    _require_odd(r)
    found = []
    c = 1
    while 3 * c * c < r:
        b = c + 1
        # a > b forces r = a(b+c) + bc > b(b+c) + bc
        while b * b + 2 * b * c < r:
            a, rem = divmod(r - b * c, b + c)
            if rem == 0 and a > b and pairwise_coprime((a, b, c)):
                found.append(SasakianTriple(a, b, c))
            b += 1
        c += 1
    found.sort()
    return found


Emitted = Union[NormalizedSpace, SasakianTriple]


def _enum_one(args: Tuple[Family, int]) -> List[Emitted]:
    family, r = args
    if family is Family.SASAKIAN:
        return list(enum_sasakian(r))
    return list(enum_positively_curved(r))


def enum_range(req: EnumerationRequest, threads: int = 1) -> Iterator[Tuple[int, List[Emitted]]]:
    """Yield (r, items) for every odd r in the request, in ascending r."""
    jobs = [(req.family, r) for r in req.r_values()]
    if threads <= 1:
        for job in jobs:
            yield job[1], _check_distinct(_enum_one(job))
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        # map() returns results in submission order
        for job, items in zip(jobs, pool.map(_enum_one, jobs, chunksize=16)):
            yield job[1], _check_distinct(items)


def _check_distinct(items: List[Emitted]) -> List[Emitted]:
    if len(set(items)) != len(items):
        raise InvariantViolation("enumeration emitted a duplicate normal form")
    return items


def enum_flat(req: EnumerationRequest, threads: int = 1) -> Iterator[Emitted]:
    for _, items in enum_range(req, threads):
        yield from items
