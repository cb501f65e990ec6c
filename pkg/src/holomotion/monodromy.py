"""Monodromy triviality tests for motions of a finite set with one moving point.

A covering-motion specification records a marked configuration
E = {0, 1, inf, z0, z1, ..., zn} over an annulus together with the free-group
word traced by the moving point z0 around the annulus generator.  By the Kra
criterion, monodromy triviality of such a motion reduces exactly to word
triviality, so every test here is combinatorial and exact.

Point labels: "0", "1", "inf", "z0", and "z1".."zn".  Generator g_j encircles
the j-th finite puncture in the order 0, 1, z1, ..., zn; the loop around
infinity is the inverse of the full ordered product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .words import (
    Word,
    build_chirka_word,
    build_trace_word,
    delete_generator,
    exponent_sums,
    fill_infinity,
    is_trivial,
    reduce_word,
    substitute_relation,
)

INFINITY = "inf"
MOVING = "z0"


@dataclass(frozen=True)
class PointConfig:
    """Finite marked points 0, 1, z1..zn plus infinity, with moving point z0."""

    n: int
    z0: complex
    points: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if len(self.points) != self.n:
            raise ValueError(f"expected {self.n} extra points, got {len(self.points)}")
        finite = [0j, 1 + 0j, *self.points]
        if any(p == 0 for p in self.points):
            raise ValueError("extra marked points must be nonzero")
        if len({complex(p) for p in finite}) != len(finite):
            raise ValueError("marked points must be pairwise distinct")
        if self.z0 in finite:
            raise ValueError("moving point z0 must avoid the fixed marked points")

    @classmethod
    def default(cls, n: int) -> "PointConfig":
        """Real-axis layout z_j = j + 2 with z0 = -1; coordinates only matter
        for rendering, never for the combinatorial tests."""
        return cls(n=n, z0=-1 + 0j, points=tuple(complex(j + 2) for j in range(1, n + 1)))

    def labels(self) -> tuple[str, ...]:
        """All labels of E in generator order, then infinity and z0."""
        return ("0", "1", *(f"z{j}" for j in range(1, self.n + 1)), INFINITY, MOVING)

    def finite_fixed_labels(self) -> tuple[str, ...]:
        return ("0", "1", *(f"z{j}" for j in range(1, self.n + 1)))

    def generator_label(self, j: int) -> str:
        """Label of the puncture encircled by generator g_j."""
        labels = self.finite_fixed_labels()
        if not 0 <= j < len(labels):
            raise ValueError(f"generator index {j} outside 0..{len(labels) - 1}")
        return labels[j]

    def label_index(self, label: str) -> int:
        """Generator index encircling the given finite fixed label."""
        try:
            return self.finite_fixed_labels().index(label)
        except ValueError:
            raise ValueError(f"no generator encircles {label!r}") from None


@dataclass(frozen=True)
class CoveringMotionSpec:
    """A motion of E over an annulus, fixed except for the trace of z0."""

    config: PointConfig
    word: Word

    def __post_init__(self) -> None:
        if self.word.rank != self.config.n + 2:
            raise ValueError(
                f"word rank {self.word.rank} != n+2 = {self.config.n + 2}"
            )


@dataclass(frozen=True)
class SubsetRestriction:
    """Result of restricting a motion to a subset of E containing z0."""

    kept: frozenset[str]
    word: Word
    dropped_finite: tuple[str, ...]
    dropped_infinity: bool

    @property
    def trivial(self) -> bool:
        return is_trivial(self.word)


def monodromy_is_trivial(spec: CoveringMotionSpec) -> bool:
    """Kra criterion: monodromy is trivial iff the trace word is trivial."""
    return is_trivial(spec.word)


def chirka_numbers(spec: CoveringMotionSpec) -> dict[frozenset[str], int]:
    """Turn counts of the trace differences around the annulus generator.

    Keys are unordered label pairs.  A pair {z0, p} with p a finite fixed
    point winds by the exponent sum of the generator encircling p; pairs of
    two fixed points never wind; pairs involving infinity are 0 under the
    normalization fixing infinity.  Values are integer full turns.
    """
    sums = exponent_sums(spec.word)
    config = spec.config
    out: dict[frozenset[str], int] = {}
    labels = config.labels()
    for a, b in itertools.combinations(labels, 2):
        pair = frozenset((a, b))
        if MOVING in pair and INFINITY not in pair:
            other = next(iter(pair - {MOVING}))
            out[pair] = sums[config.label_index(other)]
        else:
            out[pair] = 0
    return out


def restrict_to_subset(
    spec: CoveringMotionSpec, kept: Iterable[str]
) -> SubsetRestriction:
    """Restrict the motion to kept points of E (labels; must include z0).

    Each discarded finite puncture trivializes its generator; discarding
    infinity imposes the relation that the ordered product of the surviving
    generators is the identity (solved for the largest surviving index).
    """
    kept_set = frozenset(kept)
    config = spec.config
    valid = set(config.labels())
    unknown = kept_set - valid
    if unknown:
        raise ValueError(f"unknown labels: {sorted(unknown)}")
    if MOVING not in kept_set:
        raise ValueError("the moving point z0 must be kept")

    dropped_finite = tuple(
        lab for lab in config.finite_fixed_labels() if lab not in kept_set
    )
    drop_inf = INFINITY not in kept_set

    w = spec.word
    for lab in dropped_finite:
        w = delete_generator(w, config.label_index(lab))
    if drop_inf:
        alive = [
            config.label_index(lab)
            for lab in config.finite_fixed_labels()
            if lab in kept_set
        ]
        if alive:
            w = substitute_relation(w, alive)
        else:
            # every finite puncture is gone; the sphere minus z0 is simply
            # connected and every word collapses
            w = Word(w.rank)
    return SubsetRestriction(
        kept=kept_set,
        word=reduce_word(w),
        dropped_finite=dropped_finite,
        dropped_infinity=drop_inf,
    )


def trace_monodromy_trivial(
    spec: CoveringMotionSpec, quadruple: Iterable[str]
) -> bool:
    """Monodromy triviality of the restriction to a 4-point subset of E.

    If z0 is not among the four points, every point is fixed and the answer
    is True without computation.
    """
    quad = frozenset(quadruple)
    valid = set(spec.config.labels())
    unknown = quad - valid
    if unknown:
        raise ValueError(f"unknown labels: {sorted(unknown)}")
    if len(quad) != 4:
        raise ValueError(f"need exactly 4 distinct points, got {len(quad)}")
    if MOVING not in quad:
        return True
    return restrict_to_subset(spec, quad).trivial


def build_chirka_counterexample(n: int = 0) -> CoveringMotionSpec:
    """Motion whose turn counts all vanish yet whose monodromy is nontrivial.

    The trace word is the commutator g1 g0 g1^-1 g0^-1 over rank n+2; its
    exponent sums vanish (so every winding test passes) while the word is
    visibly nontrivial.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return CoveringMotionSpec(PointConfig.default(n), build_chirka_word(n))


def build_trace_counterexample(n: int) -> CoveringMotionSpec:
    """Motion that is extendable over every proper subset but not over E.

    Uses the nested-commutator word: every single-generator deletion and the
    infinity-filling are trivial, so all proper restrictions extend, yet the
    full word is nontrivial.  For n = 0 the commutator example already has
    this property and is returned instead.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return build_chirka_counterexample(0)
    return CoveringMotionSpec(PointConfig.default(n), build_trace_word(n))


@dataclass(frozen=True)
class PropertyAReport:
    """Per-case outcome of the deletion/filling triviality checks."""

    n: int
    full_word_nontrivial: bool
    deletions_trivial: tuple[bool, ...]
    infinity_fill_trivial: bool
    word_length: int

    @property
    def passed(self) -> bool:
        return (
            self.full_word_nontrivial
            and all(self.deletions_trivial)
            and self.infinity_fill_trivial
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "word_length": self.word_length,
            "full_word_nontrivial": self.full_word_nontrivial,
            "deletions_trivial": list(self.deletions_trivial),
            "infinity_fill_trivial": self.infinity_fill_trivial,
            "passed": self.passed,
        }


def verify_property_A(n: int) -> PropertyAReport:
    """Check the deletion-triviality pattern of the trace-counterexample word."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = build_trace_word(n)
    deletions = tuple(is_trivial(delete_generator(w, j)) for j in range(w.rank))
    return PropertyAReport(
        n=n,
        full_word_nontrivial=not is_trivial(w),
        deletions_trivial=deletions,
        infinity_fill_trivial=is_trivial(fill_infinity(w)),
        word_length=len(reduce_word(w)),
    )


def all_subsets_containing_moving(config: PointConfig) -> list[frozenset[str]]:
    """Every subset of E that contains z0 (for exhaustive restriction scans)."""
    others = [lab for lab in config.labels() if lab != MOVING]
    out = []
    for size in range(len(others) + 1):
        for combo in itertools.combinations(others, size):
            out.append(frozenset((MOVING, *combo)))
    return out
