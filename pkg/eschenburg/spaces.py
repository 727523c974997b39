"""Parameter-level model of Eschenburg spaces E_{k,l}.

E_{k,l} = diag(z^k1, z^k2, z^k3) \\ SU(3) / diag(z^l1, z^l2, z^l3) with
k1 + k2 + k3 = l1 + l2 + l3. Everything here works on the integer pair (k, l):
freeness, positive curvature, the normal form, condition (C) and the
cohomogeneity tag.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import FrozenSet, List, NamedTuple, Optional, Tuple

from .errors import InvalidParameters
from .exact_arith import Triple, pairwise_coprime, sym_polys


@dataclass(frozen=True, order=True)
class ParamPair:
    k: Triple
    l: Triple

    def __post_init__(self) -> None:
        if len(self.k) != 3 or len(self.l) != 3:
            raise InvalidParameters(f"k and l must be triples, got {self.k} | {self.l}")
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))
        if sum(self.k) != sum(self.l):
            raise InvalidParameters(
                f"k and l must have equal sums: {self.k} | {self.l}"
            )

    @property
    def r(self) -> int:
        """Signed r(k,l) = sigma2(k) - sigma2(l)."""
        return sym_polys(self.k)[1] - sym_polys(self.l)[1]

    @property
    def s(self) -> int:
        """Unreduced s(k,l) = sigma3(k) - sigma3(l)."""
        return sym_polys(self.k)[2] - sym_polys(self.l)[2]

    def matrix(self) -> List[List[int]]:
        """A[i][j] = k_i - l_j."""
        return [[ki - lj for lj in self.l] for ki in self.k]

    def swapped(self) -> "ParamPair":
        return ParamPair(self.l, self.k)

    def negated(self) -> "ParamPair":
        return ParamPair(
            tuple(-x for x in self.k), tuple(-x for x in self.l)  # type: ignore[arg-type]
        )

    def shifted(self, n: int) -> "ParamPair":
        return ParamPair(
            tuple(x + n for x in self.k), tuple(x + n for x in self.l)  # type: ignore[arg-type]
        )

    def permuted(self, k_order: Tuple[int, ...], l_order: Tuple[int, ...]) -> "ParamPair":
        return ParamPair(
            tuple(self.k[i] for i in k_order),  # type: ignore[arg-type]
            tuple(self.l[i] for i in l_order),  # type: ignore[arg-type]
        )

    def __str__(self) -> str:
        return f"({', '.join(map(str, self.k))} | {', '.join(map(str, self.l))})"


class Orientation(Enum):
    """How the normal form's orientation relates to the input's."""

    SAME = 1
    REVERSED = -1
    UNKNOWN = 0


@dataclass(frozen=True, order=True)
class NormalizedSpace:
    params: ParamPair
    orientation: Orientation = field(default=Orientation.SAME, compare=False)

    @property
    def key(self) -> Tuple[int, int, int, int]:
        k, l = self.params.k, self.params.l
        return k[0], k[1], l[0], l[1]

    @property
    def r_abs(self) -> int:
        return abs(self.params.r)

    def __str__(self) -> str:
        return str(self.params)


@dataclass(frozen=True, order=True)
class SasakianTriple:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if not (self.a > self.b > self.c > 0):
            raise InvalidParameters(f"need a > b > c > 0, got {self.as_tuple()}")
        if not pairwise_coprime(self.as_tuple()):
            raise InvalidParameters(f"a, b, c must be pairwise coprime: {self.as_tuple()}")

    def as_tuple(self) -> Triple:
        return self.a, self.b, self.c

    @property
    def r(self) -> int:
        return self.a * self.b + self.a * self.c + self.b * self.c

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


class CohomogeneityClass(Enum):
    ONE = "1"
    TWO_PLUS = "2+"
    TWO_MINUS = "2-"
    FOUR = "4"

    @classmethod
    def from_label(cls, label: str) -> "CohomogeneityClass":
        for member in cls:
            if member.value == label.strip():
                return member
        raise InvalidParameters(f"unknown cohomogeneity label {label!r}")


class ConditionC(NamedTuple):
    """Rows and columns (1-based) of A = (k_i - l_j) with pairwise coprime entries."""

    columns: FrozenSet[int]
    rows: FrozenSet[int]

    @property
    def holds(self) -> bool:
        return bool(self.columns or self.rows)

    def lines(self) -> List["ConditionLine"]:
        return [ConditionLine("col", j) for j in sorted(self.columns)] + [
            ConditionLine("row", j) for j in sorted(self.rows)
        ]

    def first_line(self) -> Optional["ConditionLine"]:
        lines = self.lines()
        return lines[0] if lines else None


class ConditionLine(NamedTuple):
    kind: str  # "col" or "row"
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, label: str) -> Optional["ConditionLine"]:
        label = label.strip()
        if label == "fail":
            return None
        if label[:3] not in ("col", "row") or not label[3:].isdigit():
            raise InvalidParameters(f"bad condition (C) label {label!r}")
        return cls(label[:3], int(label[3:]))


_FREENESS_PAIRS = ((0, 1), (1, 0), (0, 2), (1, 2), (2, 0), (2, 1))


def is_free(pp: ParamPair) -> bool:
    """The circle action is free iff the six gcd conditions hold."""
    k, l = pp.k, pp.l
    return all(gcd(k[0] - l[a], k[1] - l[b]) == 1 for a, b in _FREENESS_PAIRS)


def _outside(values: Triple, interval_of: Triple) -> bool:
    lo, hi = min(interval_of), max(interval_of)
    return all(x < lo or x > hi for x in values)


def is_positively_curved(pp: ParamPair) -> bool:
    # either side may play the role of k (k <-> l swap)
    return _outside(pp.k, pp.l) or _outside(pp.l, pp.k)


def normalize(pp: ParamPair) -> NormalizedSpace:
    """Unique representative k1 >= k2 > l1 >= l2 >= l3 = 0 of a positively curved space."""
    if not is_free(pp):
        raise InvalidParameters(f"{pp} does not define a free action")
    if not is_positively_curved(pp):
        raise InvalidParameters(f"{pp} is not positively curved")

    k, l = pp.k, pp.l
    swapped = False
    if not _outside(k, l):
        k, l = l, k
        swapped = True

    negated = False
    if sum(1 for x in k if x > max(l)) < 2:
        k = tuple(-x for x in k)  # type: ignore[assignment]
        l = tuple(-x for x in l)  # type: ignore[assignment]
        negated = True

    k_sorted = tuple(sorted(k, reverse=True))
    l_sorted = tuple(sorted(l, reverse=True))
    permuted = k_sorted != k or l_sorted != l

    shift = l_sorted[2]
    result = ParamPair(
        tuple(x - shift for x in k_sorted),  # type: ignore[arg-type]
        tuple(x - shift for x in l_sorted),  # type: ignore[arg-type]
    )

    if swapped or permuted:
        orientation = Orientation.UNKNOWN
    elif negated:
        orientation = Orientation.REVERSED
    else:
        orientation = Orientation.SAME
    return NormalizedSpace(result, orientation)


def is_normal_form(pp: ParamPair) -> bool:
    k, l = pp.k, pp.l
    return l[2] == 0 and k[0] >= k[1] > l[0] >= l[1] >= 0 and is_free(pp)


def condition_c(pp: ParamPair) -> ConditionC:
    a = pp.matrix()
    columns = frozenset(
        j + 1 for j in range(3) if pairwise_coprime((a[0][j], a[1][j], a[2][j]))
    )
    rows = frozenset(i + 1 for i in range(3) if pairwise_coprime(tuple(a[i])))
    return ConditionC(columns, rows)


def _has_repeat(t: Triple) -> bool:
    return len(set(t)) < 3


def cohomogeneity(ns: NormalizedSpace) -> CohomogeneityClass:
    k_repeat = _has_repeat(ns.params.k)
    l_repeat = _has_repeat(ns.params.l)
    if k_repeat and l_repeat:
        return CohomogeneityClass.ONE
    if k_repeat:
        return CohomogeneityClass.TWO_PLUS
    if l_repeat:
        return CohomogeneityClass.TWO_MINUS
    return CohomogeneityClass.FOUR


def sasakian_to_params(t: SasakianTriple) -> ParamPair:
    """E_{a,b,c} = diag(z^a, z^b, z^c) \\ SU(3) / diag(z^{a+b+c}, 1, 1)."""
    return ParamPair((t.a, t.b, t.c), (t.a + t.b + t.c, 0, 0))


def is_flag_bundle(t: SasakianTriple) -> bool:
    """Circle bundles over the inhomogeneous flag manifold: a = b + c."""
    return t.a == t.b + t.c


def cohomogeneity_one_space(a: int) -> ParamPair:
    """E_a = diag(z^a, z, z) \\ SU(3) / diag(z^{a+2}, 1, 1), with |r| = 2a + 1."""
    return ParamPair((a, 1, 1), (a + 2, 0, 0))


def aloff_wallach(a: int, b: int) -> ParamPair:
    """W_{a,b} = SU(3) / diag(z^a, z^b, z^{-a-b})."""
    return ParamPair((a, b, -a - b), (0, 0, 0))
