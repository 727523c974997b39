"""Homotopy / homeomorphism / diffeomorphism classification of pairs of spaces.

Both spaces must satisfy condition (C). Orientation preserving tests compare
|r|, s mod |r|, p1 and the Kreck-Stolz invariants directly; orientation
reversing tests negate s, s1, s2 and s22 of the second space.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import combinations
from typing import Dict, Iterable, List, NamedTuple, Tuple

from .errors import InvariantViolation
from .invariants import InvariantRecord


class Relation(IntEnum):
    NONE = 0
    HOMOTOPY_EQUIVALENT = 1
    HOMEOMORPHIC = 2
    DIFFEOMORPHIC = 3

    @property
    def label(self) -> str:
        return _RELATION_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "Relation":
        for member, name in _RELATION_LABELS.items():
            if name == label:
                return member
        raise ValueError(f"unknown relation {label!r}")


_RELATION_LABELS = {
    Relation.NONE: "none",
    Relation.HOMOTOPY_EQUIVALENT: "homotopy",
    Relation.HOMEOMORPHIC: "homeo",
    Relation.DIFFEOMORPHIC: "diffeo",
}


class PairOrientation(Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"

    @property
    def sign(self) -> int:
        return 1 if self is PairOrientation.PRESERVING else -1


class Predicates(NamedTuple):
    homotopy: bool
    homeomorphic: bool
    diffeomorphic: bool


@dataclass(frozen=True)
class PairVerdict:
    relation: Relation
    orientation: PairOrientation
    witness: Tuple[tuple, tuple]
    predicates: Dict[PairOrientation, Predicates]
    note: str = ""


def _witness(record: InvariantRecord) -> tuple:
    b = record.basic
    if record.ks is None:
        return b.r_abs, b.s.value, b.p1, None, None, None
    return b.r_abs, b.s.value, b.p1, str(record.ks.s1), str(record.ks.s2), str(record.ks.s22)


def predicates(a: InvariantRecord, b: InvariantRecord, orientation: PairOrientation) -> Predicates:
    """Homotopy, homeomorphism and diffeomorphism tests for one orientation, each evaluated on its own."""
    if a.ks is None or b.ks is None:
        return Predicates(False, False, False)
    ba, bb = a.basic, b.basic
    sign = orientation.sign
    if ba.r_abs != bb.r_abs:
        return Predicates(False, False, False)
    s_b = bb.s if sign == 1 else -bb.s
    if not ba.s.congruent(s_b):
        return Predicates(False, False, False)

    ks_a, ks_b = a.ks, b.ks
    s22_b = ks_b.s22 if sign == 1 else -ks_b.s22
    s2_b = ks_b.s2 if sign == 1 else -ks_b.s2
    s1_b = ks_b.s1 if sign == 1 else -ks_b.s1

    homotopy = ks_a.s22 == s22_b
    homeomorphic = ba.p1 == bb.p1 and ks_a.s2 == s2_b
    diffeomorphic = homeomorphic and ks_a.s1 == s1_b
    return Predicates(homotopy, homeomorphic, diffeomorphic)


def _strongest(p: Predicates) -> Relation:
    if p.homeomorphic and not p.homotopy:
        raise InvariantViolation("homeomorphic pair fails the homotopy test")
    if p.diffeomorphic:
        return Relation.DIFFEOMORPHIC
    if p.homeomorphic:
        return Relation.HOMEOMORPHIC
    if p.homotopy:
        return Relation.HOMOTOPY_EQUIVALENT
    return Relation.NONE


def compare(a: InvariantRecord, b: InvariantRecord) -> PairVerdict:
    witness = (_witness(a), _witness(b))
    if a.ks is None or b.ks is None:
        return PairVerdict(
            Relation.NONE,
            PairOrientation.PRESERVING,
            witness,
            predicates={},
            note="not classifiable: condition (C) fails",
        )

    table = {o: predicates(a, b, o) for o in PairOrientation}
    best_relation, best_orientation = Relation.NONE, PairOrientation.PRESERVING
    for orientation in PairOrientation:
        relation = _strongest(table[orientation])
        if relation > best_relation:
            best_relation, best_orientation = relation, orientation
    return PairVerdict(best_relation, best_orientation, witness, table)


def bucket_records(
    records: Iterable[InvariantRecord], with_p1: bool = True
) -> Dict[tuple, List[InvariantRecord]]:
    buckets: Dict[tuple, List[InvariantRecord]] = {}
    for record in records:
        buckets.setdefault(record.basic.key(with_p1), []).append(record)
    return buckets


def candidate_pairs(
    records: Iterable[InvariantRecord], with_p1: bool = True
) -> List[Tuple[InvariantRecord, InvariantRecord]]:
    """Unordered pairs whose basic invariants agree up to orientation."""
    pairs = []
    buckets = bucket_records(records, with_p1)
    for key in sorted(buckets):
        members = sorted(buckets[key], key=lambda rec: rec.params)
        pairs.extend(combinations(members, 2))
    return pairs


def relation_counts(records: Iterable[InvariantRecord], relation: Relation) -> int:
    """Number of unordered pairs of distinct spaces reaching at least `relation`.

    Relation.NONE counts the pairs whose basic invariants (|r|, p1, s up to sign) agree.
    """
    if relation is Relation.NONE:
        return len(candidate_pairs(records, with_p1=True))
    with_p1 = relation >= Relation.HOMEOMORPHIC
    return sum(
        1
        for a, b in candidate_pairs(records, with_p1)
        if compare(a, b).relation >= relation
    )
