"""Cohomological triviality and the Ulrich bundle applications.

An Ulrich line bundle with respect to a polarization H would give a
divisor D with both D and D - H cohomologically trivial.  The search
enumerates chi = 0 numerical classes in a degree window, twists each by
all 64 torsions, and tests both conditions exactly.  The companion
routine checks the input data of the rank-2 construction: a pair
(D1, D2 = 4K - D1) with D1 trivial, h(D2) = (6, 0, 0), and the section
count h0(K + D2 - D1) = 1 consumed by the Serre correspondence.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .picard import (
    DivisorClass,
    NumClass,
    SYMMETRIES,
    TORSION_DIVISORS,
    apply_symmetry_num,
    canonical_class,
    from_truncated,
)
from .cohomology import CohResult, h_all


def is_coh_trivial(divisor: DivisorClass) -> bool:
    result = h_all(divisor)
    return result.h0 == 0 and result.h1 == 0 and result.h2 == 0


def chi_zero_classes(d: int) -> list:
    """All numerical classes [d;a,b,c] with integral ell and chi = 0.

    chi = 0 forces (2l-3)^2 + 2 = (2a-1)^2 + (2b-1)^2 + (2c-1)^2, and
    Cauchy-Schwarz pins ell to a window of width O(|d-6|); the remaining
    search space is a bounded sphere scan.  Lexicographic (a, b, c) order.
    """
    disc = math.isqrt(3 * ((d - 6) ** 2 + 3)) + 1
    lo = (3 * d - 9 - disc) // 6 - 1
    hi = (3 * d - 9 + disc) // 6 + 2
    found = []
    for ell in range(lo, hi + 1):
        target = (2 * ell - 3) ** 2 + 2
        span = (math.isqrt(target) + 1) // 2 + 1
        s = 3 * ell - d
        for a in range(-span + 1, span + 1):
            rest_a = target - (2 * a - 1) ** 2
            if rest_a < 0:
                continue
            for b in range(-span + 1, span + 1):
                rest_ab = rest_a - (2 * b - 1) ** 2
                if rest_ab < 0:
                    continue
                c = s - a - b
                if (2 * c - 1) ** 2 == rest_ab:
                    found.append(NumClass(d, a, b, c))
    found.sort(key=lambda nc: (nc.a, nc.b, nc.c))
    for nc in found:
        # Definitional recheck; catches any window bookkeeping slip.
        if from_truncated(nc.d, (nc.a, 0), (nc.b, 0), (nc.c, 0)).chi() != 0:
            raise AssertionError(f"chi_zero_classes produced {nc} with chi != 0")
    return found


@dataclass
class SearchReport:
    """Outcome of an Ulrich line bundle search for one polarization.

    The window is reported explicitly: completeness of the search relative
    to the nonexistence statement rests on the stated bounds for ample and
    base point free polarizations (h >= 12, index-0 degrees >= 2).
    """

    polarization: DivisorClass
    d_lo: int
    d_hi: int
    classes_scanned: int = 0
    divisors_scanned: int = 0
    hits: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def is_empty(self) -> bool:
        return not self.hits


def default_window(polarization: DivisorClass) -> tuple:
    h = polarization.d
    return (-(h // 3), h + 6)


def ulrich_line_search(
    polarization: DivisorClass,
    d_lo: Optional[int] = None,
    d_hi: Optional[int] = None,
) -> SearchReport:
    """Scan for D with both D and D - H cohomologically trivial.

    Only chi = 0 classes can be trivial, so each degree contributes a thin
    slice of classes, each twisted by all 64 torsions.  Hits are collected
    in deterministic coordinate order; for a valid polarization the list
    comes back empty.
    """
    if d_lo is None or d_hi is None:
        lo, hi = default_window(polarization)
        d_lo = lo if d_lo is None else d_lo
        d_hi = hi if d_hi is None else d_hi
    if d_lo > d_hi:
        raise ValueError(f"empty degree window [{d_lo}, {d_hi}]")
    report = SearchReport(polarization, d_lo, d_hi)
    start = time.perf_counter()
    for d in range(d_lo, d_hi + 1):
        for nc in chi_zero_classes(d):
            report.classes_scanned += 1
            base = from_truncated(nc.d, (nc.a, 0), (nc.b, 0), (nc.c, 0))
            for twist in TORSION_DIVISORS:
                divisor = base + twist
                report.divisors_scanned += 1
                if is_coh_trivial(divisor) and is_coh_trivial(divisor - polarization):
                    report.hits.append(divisor)
    report.hits.sort(key=lambda D: (D.d, D.degs, D.tors))
    report.elapsed = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# Rank-2 construction data.


class Rank2Check(NamedTuple):
    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class Rank2Report:
    d1: DivisorClass
    d2: DivisorClass
    checks: list

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def rank2_divisor() -> DivisorClass:
    """The degree-10 divisor whose pair (D1, 4K - D1) feeds the construction."""
    return from_truncated(10, (0, "01"), (1, "11"), (4, "01"))


def verify_rank2(d1: Optional[DivisorClass] = None) -> Rank2Report:
    """Check the cohomological input data of the rank-2 construction.

    The subscheme of six points itself is not modelled; what is verified
    is exactly what the Serre correspondence consumes: D1 trivial,
    h(D2) = (6,0,0), the one-section condition on K + D2 - D1, and the
    vanishing h0(D1 - K) = h0(D2 - K) = 0 that distinguishes the bundle
    from the previously known one.
    """
    if d1 is None:
        d1 = rank2_divisor()
    K = canonical_class()
    d2 = 4 * K - d1
    h1 = h_all(d1)
    h2 = h_all(d2)
    checks = [
        Rank2Check("h(D1) cohomologically trivial", (0, 0, 0), (h1.h0, h1.h1, h1.h2)),
        Rank2Check("h(D2) = (6,0,0)", (6, 0, 0), (h2.h0, h2.h1, h2.h2)),
        Rank2Check("h0(K+D2-D1) = 1", 1, h_all(K + d2 - d1).h0),
        Rank2Check("h0(D1-K) = 0", 0, h_all(d1 - K).h0),
        Rank2Check("h0(D2-K) = 0", 0, h_all(d2 - K).h0),
        Rank2Check("chi(D2) = 6", 6, d2.chi()),
    ]
    return Rank2Report(d1, d2, checks)


# ---------------------------------------------------------------------------
# Property sweeps for the supporting statements.


@dataclass
class Section5Report:
    d_max: int
    chi_zero_classes_checked: int = 0
    trivial_divisors_found: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _in_corollary_families(nc: NumClass) -> bool:
    """Up to symmetry: [2l+1;0,0,l-1], [2l;0,1,l-1], or [2l;0,l-1,1]."""
    for sym in SYMMETRIES:
        d, a, b, c = apply_symmetry_num(sym, nc)
        if a != 0:
            continue
        if d % 2 == 1 and b == 0 and c == (d - 1) // 2 - 1:
            return True
        if d % 2 == 0 and b == 1 and c == d // 2 - 1:
            return True
        if d % 2 == 0 and c == 1 and b == d // 2 - 1:
            return True
    return False


def verify_section5_properties(d_max: int) -> Section5Report:
    """Exhaustively check the chi = 0 support results up to degree d_max.

    Every chi = 0 class with d >= 1 must contain an effective divisor;
    every cohomologically trivial divisor with d >= 6 must be nef, and
    with d >= 7 must lie in one of the three residual families up to
    symmetry.  Violations are collected, never suppressed.
    """
    if d_max < 7:
        raise ValueError(f"d_max must be at least 7, got {d_max}")
    from .effectivity import e_positive

    report = Section5Report(d_max)
    for d in range(1, d_max + 1):
        for nc in chi_zero_classes(d):
            report.chi_zero_classes_checked += 1
            if not e_positive(nc):
                report.violations.append(f"chi=0 class {nc} has e-number 0")
            base = from_truncated(nc.d, (nc.a, 0), (nc.b, 0), (nc.c, 0))
            if d < 6:
                continue
            for twist in TORSION_DIVISORS:
                divisor = base + twist
                if not is_coh_trivial(divisor):
                    continue
                report.trivial_divisors_found += 1
                if not divisor.is_nef():
                    report.violations.append(
                        f"cohomologically trivial {divisor} with d >= 6 is not nef"
                    )
                if d >= 7 and not _in_corollary_families(nc):
                    report.violations.append(
                        f"trivial divisor {divisor} outside the residual families"
                    )
    return report
