"""Basic invariants (r, s, p1, linking form) and Kreck-Stolz invariants s1, s2, s3, s22.

The Kreck-Stolz formulas need a row or column of A = (k_i - l_j) with pairwise
coprime entries. The column variant subtracts the three lens-space
contributions, the row variant adds them; both use the signed r(k,l).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple

from loguru import logger

from .errors import ConditionCFailure, InvalidParameters, InvariantViolation
from .exact_arith import QModZ, SignedResidue, mod_inverse, qmodz, res1, signed_residue, sym_polys
from .lens_sums import LensSpace, denominator_bound, lens_s1, lens_s2, lens_s3
from .spaces import (
    CohomogeneityClass,
    ConditionC,
    ConditionLine,
    NormalizedSpace,
    Orientation,
    ParamPair,
    cohomogeneity,
    condition_c,
    is_free,
    is_positively_curved,
    normalize,
)


@dataclass(frozen=True)
class BasicInvariants:
    r_signed: int
    r_abs: int
    s: SignedResidue
    p1: int
    linking: QModZ

    def key(self, with_p1: bool = True) -> Tuple[int, ...]:
        """Bucket key shared by both orientations: |r|, p1 and |s|."""
        canonical_s = max(self.s.value, (-self.s).value)
        if with_p1:
            return self.r_abs, self.p1, canonical_s
        return self.r_abs, canonical_s


@dataclass(frozen=True)
class KSInvariants:
    s1: QModZ
    s2: QModZ
    s3: QModZ
    s22: QModZ
    source: ConditionLine

    def values(self) -> Tuple[QModZ, QModZ, QModZ, QModZ]:
        return self.s1, self.s2, self.s3, self.s22


@dataclass(frozen=True)
class InvariantRecord:
    params: ParamPair
    normal_form: NormalizedSpace
    basic: BasicInvariants
    ks: Optional[KSInvariants]
    cohomogeneity: CohomogeneityClass
    condition: ConditionC

    @property
    def classifiable(self) -> bool:
        return self.ks is not None

    @property
    def s22_signed(self) -> Optional[QModZ]:
        """2·r·s2 with r signed, as the tables print it. Equals ks.s22 up to sign."""
        if self.ks is None:
            return None
        return self.ks.s2 * (2 * self.basic.r_signed)

    @property
    def condition_label(self) -> str:
        if self.ks is not None:
            return str(self.ks.source)
        line = self.condition.first_line()
        return str(line) if line is not None else "fail"


def basic_invariants(pp: ParamPair) -> BasicInvariants:
    s1_k, s2_k, s3_k = sym_polys(pp.k)
    _, s2_l, s3_l = sym_polys(pp.l)
    r = s2_k - s2_l
    if r == 0:
        raise InvalidParameters(f"r(k,l) = 0 for {pp}; H^4 would be infinite")
    r_abs = abs(r)
    if r_abs % 2 == 0:
        raise InvalidParameters(f"|r| = {r_abs} is even for {pp}; the action is not free")
    s = signed_residue(s3_k - s3_l, r_abs)
    p1 = (2 * s1_k * s1_k - 6 * s2_k) % r_abs
    linking = qmodz(Fraction(-mod_inverse(s.value, r_abs), r))
    return BasicInvariants(r, r_abs, s, p1, linking)


def q_column(pp: ParamPair, j: int) -> int:
    k, l = pp.k, pp.l
    lj, lj2 = l[j - 1], l[res1(j + 1, 2) - 1]
    return (
        sum((ki - lj) ** 2 for ki in k)
        + sum((ki - lj2) ** 2 for ki in k)
        - (lj - lj2) ** 2
    )


def q_row(pp: ParamPair, j: int) -> int:
    k, l = pp.k, pp.l
    kj, kj2 = k[j - 1], k[res1(j + 1, 2) - 1]
    return (
        sum((kj - li) ** 2 for li in l)
        + sum((kj2 - li) ** 2 for li in l)
        - (kj - kj2) ** 2
    )


def _checked_lens(p: int, params: Tuple[int, int, int, int], pp: ParamPair) -> LensSpace:
    if sum(params) % 2:
        raise InvariantViolation(f"odd lens parameter sum {params} built from {pp}")
    try:
        return LensSpace(p, params)
    except InvalidParameters as e:
        raise InvariantViolation(f"invalid lens space built from {pp}: {e}") from e


def lens_spaces_for_column(pp: ParamPair, j: int) -> List[LensSpace]:
    k, l = pp.k, pp.l
    lj, lj2 = l[j - 1], l[res1(j + 1, 2) - 1]
    lenses = []
    for i in (1, 2, 3):
        a, b, c = k[res1(i, 3) - 1], k[res1(i + 1, 3) - 1], k[res1(i + 2, 3) - 1]
        lenses.append(_checked_lens(a - lj, (b - lj, c - lj, b - lj2, c - lj2), pp))
    return lenses


def lens_spaces_for_row(pp: ParamPair, j: int) -> List[LensSpace]:
    k, l = pp.k, pp.l
    kj, kj2 = k[j - 1], k[res1(j + 1, 2) - 1]
    lenses = []
    for i in (1, 2, 3):
        a, b, c = l[res1(i, 3) - 1], l[res1(i + 1, 3) - 1], l[res1(i + 2, 3) - 1]
        lenses.append(_checked_lens(kj - a, (kj - b, kj - c, kj2 - b, kj2 - c), pp))
    return lenses


def _assemble(
    pp: ParamPair, q: int, prod: int, lenses: List[LensSpace], sign: int, source: ConditionLine
) -> KSInvariants:
    r = pp.r
    rp = r * prod
    s1 = Fraction(4 * abs(rp) - q * q, 2**7 * 7 * rp)
    s2 = Fraction(q - 2, 2**4 * 3 * rp)
    s3 = Fraction(q - 8, 2**2 * 3 * rp)
    for lens in lenses:
        s1 += sign * lens_s1(lens).value
        s2 += sign * lens_s2(lens).value
        s3 += sign * lens_s3(lens).value
    s2_class = qmodz(s2)
    return KSInvariants(
        s1=qmodz(s1),
        s2=s2_class,
        s3=qmodz(s3),
        s22=s2_class * (2 * abs(r)),
        source=source,
    )


def line_product(pp: ParamPair, line: ConditionLine) -> int:
    """Product of the entries of one row or column of A = (k_i - l_j)."""
    a = pp.matrix()
    if line.kind == "col":
        entries = [a[i][line.index - 1] for i in range(3)]
    else:
        entries = a[line.index - 1]
    prod = 1
    for x in entries:
        prod *= x
    return prod


def ks_invariants_column(pp: ParamPair, j: int) -> KSInvariants:
    if j not in condition_c(pp).columns:
        raise ConditionCFailure(f"condition (C) fails for column {j} of {pp}")
    line = ConditionLine("col", j)
    return _assemble(pp, q_column(pp, j), line_product(pp, line), lens_spaces_for_column(pp, j), -1, line)


def ks_invariants_row(pp: ParamPair, j: int) -> KSInvariants:
    if j not in condition_c(pp).rows:
        raise ConditionCFailure(f"condition (C) fails for row {j} of {pp}")
    line = ConditionLine("row", j)
    return _assemble(pp, q_row(pp, j), line_product(pp, line), lens_spaces_for_row(pp, j), 1, line)


def lens_spaces_for_line(pp: ParamPair, line: ConditionLine) -> List[LensSpace]:
    if line.kind == "col":
        return lens_spaces_for_column(pp, line.index)
    return lens_spaces_for_row(pp, line.index)


def ks_for_line(pp: ParamPair, line: ConditionLine) -> KSInvariants:
    if line.kind == "col":
        return ks_invariants_column(pp, line.index)
    return ks_invariants_row(pp, line.index)


def ks_invariants(pp: ParamPair, condition: Optional[ConditionC] = None) -> KSInvariants:
    """KS invariants from the first satisfied column, else the first satisfied row."""
    condition = condition or condition_c(pp)
    line = condition.first_line()
    if line is None:
        raise ConditionCFailure(f"condition (C) fails for {pp}")
    return ks_for_line(pp, line)


def ks_all_lines(pp: ParamPair) -> Dict[ConditionLine, KSInvariants]:
    return {line: ks_for_line(pp, line) for line in condition_c(pp).lines()}


def full_record(
    pp: ParamPair,
    normal_form: Optional[NormalizedSpace] = None,
    with_ks: bool = True,
) -> InvariantRecord:
    if not is_free(pp):
        raise InvalidParameters(f"{pp} does not define a free action")
    if normal_form is None:
        if is_positively_curved(pp):
            normal_form = normalize(pp)
        else:
            # no normal form outside the curved family; tag the input itself
            normal_form = NormalizedSpace(pp, Orientation.UNKNOWN)
    condition = condition_c(pp)
    ks = ks_invariants(pp, condition) if with_ks and condition.holds else None
    record = InvariantRecord(
        params=pp,
        normal_form=normal_form,
        basic=basic_invariants(pp),
        ks=ks,
        cohomogeneity=cohomogeneity(normal_form),
        condition=condition,
    )
    if ks is not None and not denominator_diagnostic(record):
        logger.debug(f"unexpected Kreck-Stolz denominators for {pp}: s1={ks.s1}, s2={ks.s2}")
    return record


def denominator_diagnostic(record: InvariantRecord) -> bool:
    """Whether s1 and s2 have denominators the closed formulas allow for the line used.

    With P the product of that line and D the lcm of the lens denominator bounds,
    s1 * 2^7 * 7 * D * r * P and s2 * 2^4 * 3 * D * r * P are integers.
    """
    ks = record.ks
    if ks is None:
        return True
    pp = record.params
    bound = 1
    for lens in lens_spaces_for_line(pp, ks.source):
        bound = lcm(bound, denominator_bound(lens.p))
    m = bound * abs(pp.r * line_product(pp, ks.source))
    return (2**7 * 7 * m) % ks.s1.value.denominator == 0 and (
        2**4 * 3 * m
    ) % ks.s2.value.denominator == 0
