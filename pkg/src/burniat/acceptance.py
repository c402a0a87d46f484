"""Acceptance suite: the twelve exit criteria, runnable one by one.

Each criterion is exact (integer equality or an exhaustive property
sweep).  The functions raise AssertionError with a description on the
first failure; the runner turns that into a per-criterion pass/fail
line.  Both the pytest suite and the command line `selftest` subcommand
call into this module, and the `table` subcommand reuses the frozen
row data kept here.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import picard as pic
from . import effectivity as eff
from . import cohomology as coh
from . import ulrich
from .picard import (
    DivisorClass,
    NumClass,
    SYMMETRIES,
    TORSION_DIVISORS,
    Torsion,
    apply_symmetry,
    canonical_class,
    from_generators,
    from_truncated,
    generator,
)


def build_class(d: int, a: int, b: int, c: int, tau: Torsion = pic.TORSION_ZERO) -> DivisorClass:
    return from_truncated(d, (a, 0), (b, 0), (c, 0)) + tau.to_divisor()


# ---------------------------------------------------------------------------
# Frozen row data reused by the CLI table subcommand.

# Hexagon of (-1)-curves in cyclic order; adjacent curves meet once.
HEX_ORDER = ("A0", "C3", "B0", "A3", "C0", "B3")

# Genus-2 curves move in pencils spanned by two consecutive hexagon edges.
PENCILS = {
    "A1": ("C0", "A3"), "A2": ("C0", "A3"),
    "B1": ("A0", "B3"), "B2": ("A0", "B3"),
    "C1": ("B0", "C3"), "C2": ("B0", "C3"),
}


def expected_pairing(x: str, y: str) -> int:
    """Intersection number from the configuration geometry alone."""
    def parts(label):
        return PENCILS.get(label, (label,))

    total = 0
    for u in parts(x):
        for v in parts(y):
            i, j = HEX_ORDER.index(u), HEX_ORDER.index(v)
            if i == j:
                total -= 1
            elif (i - j) % 6 in (1, 5):
                total += 1
    return total


# Identities between explicit effective combinations and twisted classes.
KTWIST_DECOMPOSITIONS = [
    ("(10 00 00)", {"A0": 2, "B3": 2, "C0": 1, "C3": 1}),
    ("(00 10 00)", {"B0": 2, "C3": 2, "A0": 1, "A3": 1}),
    ("(00 00 10)", {"A0": 2, "C3": 2, "B0": 1, "B3": 1}),
    ("(10 10 10)", {"A0": 1, "C3": 1, "B0": 1, "A3": 1, "C0": 1, "B3": 1}),
    ("(00 10 10)", {"A1": 1, "A2": 1, "B0": 1, "B3": 1}),
    ("(01 01 01)", {"C1": 1, "A1": 1, "B1": 1}),
]

# Members of |l(A0+B3) - 2B0 + 2C0 + tau| for l = 4 and l = 5, and of
# |5(A0+C3) - 2C3 + 2B3 + tau|; each row is an exact class identity.
CASE1_BASE = {"A0": 4, "B3": 4, "B0": -2, "C0": 2}
CASE1_ROWS = [
    ("(00 00 00)", {"A2": 2, "B1": 2}),
    ("(00 00 01)", {"A1": 1, "A2": 1, "A3": 1, "B0": 1, "B1": 1}),
    ("(00 00 11)", {"A1": 1, "A2": 1, "A3": 1, "B0": 1, "B2": 1}),
    ("(00 00 10)", {"B1": 1, "B2": 1, "A2": 2}),
    ("(00 10 00)", {"A1": 1, "A2": 1, "B1": 2}),
    ("(00 10 01)", {"A2": 2, "A3": 1, "B0": 1, "B1": 1}),
    ("(00 10 11)", {"A2": 2, "A3": 1, "B0": 1, "B2": 1}),
    ("(00 10 10)", {"A1": 1, "A2": 1, "B1": 1, "B2": 1}),
]

CASE2_BASE = {"A0": 5, "B3": 5, "B0": -2, "C0": 2}
CASE2_ROWS = [
    ("(00 00 00)", {"A1": 1, "A2": 1, "A3": 1, "B0": 1, "B1": 1, "B2": 1}),
    ("(00 00 01)", {"B2": 3, "A2": 2}),
    ("(00 00 11)", {"B1": 1, "B2": 2, "A2": 2}),
    ("(00 00 10)", {"A1": 1, "A2": 1, "A3": 1, "B0": 1, "B1": 2}),
    ("(00 10 00)", {"A2": 2, "A3": 1, "B0": 1, "B1": 1, "B2": 1}),
    ("(00 10 01)", {"A1": 1, "A2": 1, "B2": 3}),
    ("(00 10 11)", {"A1": 1, "A2": 1, "B1": 1, "B2": 2}),
    ("(00 10 10)", {"A2": 2, "A3": 1, "B0": 1, "B1": 2}),
]

SIDE_BASE = {"A0": 5, "C3": 3, "B3": 2}
SIDE_ROWS = [
    ("(10 01 00)", {"A1": 1, "A2": 2, "B1": 2}),
    ("(10 01 01)", {"A2": 3, "A3": 1, "B0": 1, "B1": 1}),
    ("(10 01 11)", {"A2": 3, "A3": 1, "B0": 1, "B2": 1}),
    ("(10 01 10)", {"A1": 1, "A2": 2, "B1": 1, "B2": 1}),
    ("(10 11 00)", {"A2": 3, "B1": 2}),
    ("(10 11 01)", {"A1": 1, "A2": 2, "A3": 1, "B0": 1, "B1": 1}),
    ("(10 11 11)", {"A1": 1, "A2": 2, "A3": 1, "B0": 1, "B2": 1}),
    ("(10 11 10)", {"A2": 3, "B1": 1, "B2": 1}),
]

# Reduced forms in [6;0,2,1] with their section counts.
TABLE_621_BASE = {"C0": 2, "A3": 2, "A0": 1, "B3": 1}
TABLE_621_ROWS = [
    ("(00 00 00)", {"A0": 1, "B3": 1, "A1": 2}, 2),
    ("(00 00 01)", {"B2": 1, "A1": 2}, 2),
    ("(00 00 11)", {"B1": 1, "A1": 2}, 2),
    ("(00 00 10)", {"A1": 1, "A2": 1, "A3": 1, "B0": 1}, 1),
    ("(00 10 00)", {"A0": 1, "B3": 1, "A1": 1, "A2": 1}, 1),
    ("(00 10 01)", {"B2": 1, "A1": 1, "A2": 1}, 1),
    ("(00 10 11)", {"B1": 1, "A1": 1, "A2": 1}, 1),
    ("(00 10 10)", {"A1": 2, "A3": 1, "B0": 1}, 2),
]


def _twists(pattern: str) -> list:
    """All torsions matching a mask like '00 *0 **' (bit positions or *)."""
    digits = pattern.replace(" ", "")
    out = []
    for tau in pic.ALL_TORSIONS:
        bits = "".join(
            f"{v >> 1 & 1}{v & 1}" for v in (tau.a, tau.b, tau.c)
        )
        if all(p == "*" or p == q for p, q in zip(digits, bits)):
            out.append(tau)
    return out


# ---------------------------------------------------------------------------
# Criterion bodies.


def _criterion_1() -> str:
    start = time.perf_counter()
    rows = [(label, generator(label)) for label in pic.LABELS] + [("K", canonical_class())]
    for label, row in rows:
        rebuilt = from_truncated(row.d, *[(row.degs[k], row.tors[k]) for k in range(3)])
        assert rebuilt == row, f"derived coordinates disagree on row {label}"
    for sym in SYMMETRIES:
        for label in pic.LABELS:
            image = apply_symmetry(sym, generator(label))
            assert image == generator(sym.on_label(label)), (sym, label)
        assert apply_symmetry(sym, canonical_class()) == canonical_class()
    g = generator
    equivs = [
        (2 * (g("C0") + g("A3")), 2 * g("A1")),
        (2 * g("A1"), 2 * g("A2")),
        (2 * g("A2"), 2 * (g("C3") + g("A0"))),
        (g("A0") + g("B3") + g("A1") + g("B2"), g("B0") + g("A3") + g("A2") + g("B1")),
        (g("A0") + g("B3") + g("A1") + g("B1"), g("B0") + g("A3") + g("A2") + g("B2")),
        (g("A0") + canonical_class(), g("A1") + g("A2") + g("A3") + 2 * g("B0")),
        (g("A1") + canonical_class(),
         g("A0") + g("A2") + g("A3") + 2 * (g("B3") + g("C0"))),
        (g("C1") + g("C2") + g("C3") + 3 * g("A0"),
         g("A1") + g("A2") + g("A3") + 2 * g("B0") + g("C0")),
    ]
    for left, right in equivs:
        assert left == right, f"{left} != {right}"
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.3f}s, budget 1s"
    return f"13 rows, 6 symmetries, {len(equivs)} identities in {elapsed * 1000:.0f}ms"


def _criterion_2() -> str:
    for x in pic.LABELS:
        gx = generator(x)
        assert gx.intersect(canonical_class()) == gx.d, x
        for y in pic.LABELS:
            got = gx.intersect(generator(y))
            want = expected_pairing(x, y)
            assert got == want, f"({x}.{y}) = {got}, geometry says {want}"
    return "12x12 Gram matrix matches the configuration geometry"


def _criterion_3() -> str:
    K = canonical_class()
    census = {0: 0, 1: 0, 2: 0}
    for tau in pic.ALL_TORSIONS:
        h0 = coh.h_all(K + tau.to_divisor()).h0
        census[h0] += 1
        flexible = tau in coh.FLEXIBLE_TORSIONS
        assert h0 == (0 if tau.is_zero() else 2 if flexible else 1), (tau, h0)
        # The same values must surface as h2 of the bare torsion class.
        ht = coh.h_all(tau.to_divisor())
        assert (ht.h0, ht.h2) == ((1, 0) if tau.is_zero() else (0, h0)), tau
    assert census == {0: 1, 1: 60, 2: 3}, census
    for text, combo in KTWIST_DECOMPOSITIONS:
        tau = Torsion.from_string(text)
        assert from_generators(combo) == K + tau.to_divisor(), text
    return "census 0x1 / 1x60 / 2x3 (sum 66); 6 decomposition identities"


def _criterion_4() -> str:
    start = time.perf_counter()
    checked = 0
    for d in range(0, 13):
        for a in range(-6, 7):
            for b in range(-6, 7):
                for c in range(-6, 7):
                    if (d + a + b + c) % 3:
                        continue
                    base = from_truncated(d, (a, 0), (b, 0), (c, 0))
                    for twist in TORSION_DIVISORS:
                        divisor = base + twist
                        witness = eff.is_effective(divisor)
                        result = coh.h_all(divisor)
                        assert (witness is not None) == (result.h0 >= 1), divisor
                        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0, f"took {elapsed:.0f}s, budget 300s"
    return f"{checked} divisors, zero disagreements, {elapsed:.0f}s"


def _criterion_5() -> str:
    start = time.perf_counter()
    checked = 0
    for d in range(1, 21):
        for a in range(-10, 11):
            for b in range(-10, 11):
                for c in range(-10, 11):
                    if (d + a + b + c) % 3:
                        continue
                    nc = NumClass(d, a, b, c)
                    n = eff.e_number(nc)
                    assert (n >= 1) == eff.e_positive(nc), (nc, n)
                    assert (n == 64) == eff.e_full(nc), (nc, n)
                    shifted = NumClass(d + 6, a + 1, b + 1, c + 1)
                    assert eff.e_positive(nc) == eff.e_full(shifted), nc
                    checked += 1
    elapsed = time.perf_counter() - start
    return f"{checked} classes, brute force = closed form = shift law, {elapsed:.0f}s"


def _criterion_6() -> str:
    rng = random.Random(20260810)
    K = canonical_class()
    for _ in range(10_000):
        d = rng.randint(-20, 20)
        a = rng.randint(-8, 8)
        b = rng.randint(-8, 8)
        c = rng.choice([x for x in range(-8, 9) if (d + a + b + x) % 3 == 0])
        divisor = build_class(d, a, b, c, pic.ALL_TORSIONS[rng.randrange(64)])
        left = coh.h_all(divisor)
        right = coh.h_all(K - divisor)
        assert (left.h0, left.h1, left.h2) == (right.h2, right.h1, right.h0), divisor
    return "10000 random classes, h(D) = reverse(h(K-D))"


def _criterion_7() -> str:
    g = generator
    K = canonical_class()
    A0, B0, C0, A3, B3 = g("A0"), g("B0"), g("C0"), g("A3"), g("B3")
    checked = 0

    def expect(divisor, want):
        nonlocal checked
        got = coh.h_all(divisor).h0
        assert got == want, f"h0({divisor}) = {got}, expected {want}"
        checked += 1

    expect(2 * (A0 + g("C3") + B0), 3)
    for tau in _twists("00 ** **"):
        want = 3 if (tau.a, tau.b, tau.c) == (0, 2, 0) else 1 if tau.is_zero() else 2
        expect(A0 + K + tau.to_divisor(), want)
    for tau in _twists("00 00 **"):
        expect(A0 + B0 + K + tau.to_divisor(), 2 if tau.is_zero() else 3)
    for tau in _twists("00 *0 **"):
        want = 4 if (tau.a, tau.b, tau.c) == (0, 2, 0) else 2 if tau.is_zero() else 3
        expect(A0 + A3 + K + tau.to_divisor(), want)

    for ell in range(1, 11):
        for tau in _twists("00 00 **"):
            if (tau.c & 1) == (ell & 1):
                want = (ell // 2 + (1 if tau.c == 0 else 0)) if ell % 2 == 0 else (ell + 1) // 2
                expect(ell * (A0 + B3) + tau.to_divisor(), want)
            # All four twists of l(A0+B3)+C0 are covered, reduced or not.
            if ell == 1:
                want = 0 if tau.c == 0b10 else 1
            elif tau.c == 0:
                want = ell // 2 + 1
            elif tau.c & 1:
                want = (ell - 1) // 2 + 1
            else:
                want = ell // 2
            expect(ell * (A0 + B3) + C0 + tau.to_divisor(), want)
        for tau in _twists("00 *1 **"):
            if ell == 1 and tau.c:
                continue
            expect((ell - 1) * (A0 + B3) + (C0 + A3) + tau.to_divisor(),
                   ell - 1 if ell >= 2 else 1)
    for ell in range(3, 12):
        mask = "00 *1 **" if ell % 2 == 0 else "00 *0 **"
        for tau in _twists(mask):
            if ell % 2 == 0:
                want = ell // 2
            elif (tau.a, tau.b, tau.c) in coh._L0LM1_1_UPPER:
                want = (ell + 1) // 2
            else:
                want = (ell - 1) // 2
            expect((ell - 1) * (C0 + A3) + (A0 + B3) + tau.to_divisor(), want)
    for ell in range(1, 11):
        for tau in pic.ALL_TORSIONS:
            expect(ell * (A0 + B3) + K + tau.to_divisor(),
                   coh.base_case_h0(coh.L_00L_PLUS_K, ell, tau))

    for base, rows in ((CASE1_BASE, CASE1_ROWS), (CASE2_BASE, CASE2_ROWS),
                       (SIDE_BASE, SIDE_ROWS)):
        base_divisor = from_generators(base)
        for text, combo in rows:
            divisor = base_divisor + Torsion.from_string(text).to_divisor()
            assert from_generators(combo) == divisor, (base, text)
            assert coh.h_all(divisor).h0 >= 1, (base, text)
            checked += 1
    base_divisor = from_generators(TABLE_621_BASE)
    for text, combo, want in TABLE_621_ROWS:
        divisor = base_divisor + Torsion.from_string(text).to_divisor()
        assert from_generators(combo) == divisor, text
        expect(divisor, want)
    return f"{checked} frozen values reproduced exactly"


def _criterion_8() -> str:
    g = generator
    divisor = g("A0") + g("B0") + canonical_class() + g("B2") - g("B1")
    h_full = coh.h_all(divisor).h0
    h_less = coh.h_all(divisor - g("A0")).h0
    assert (h_full, h_less) == (3, 3), (h_full, h_less)
    return "h0(D) = h0(D - A0) = 3 at the d = 8 boundary"


def _criterion_9() -> str:
    start = time.perf_counter()
    report = ulrich.verify_section5_properties(20)
    elapsed = time.perf_counter() - start
    assert report.passed, report.violations[:3]
    assert elapsed < 300.0, f"took {elapsed:.0f}s, budget 300s"
    return (
        f"{report.chi_zero_classes_checked} chi=0 classes, "
        f"{report.trivial_divisors_found} trivial divisors, zero violations, {elapsed:.0f}s"
    )


def _criterion_10() -> str:
    report = ulrich.ulrich_line_search(3 * canonical_class(), -6, 24)
    assert report.is_empty, f"unexpected hits: {report.hits[:3]}"
    assert report.elapsed < 600.0, f"took {report.elapsed:.0f}s, budget 600s"
    return (
        f"window [-6,24]: {report.divisors_scanned} divisors scanned, "
        f"zero hits, {report.elapsed:.0f}s"
    )


def _criterion_11() -> str:
    report = ulrich.verify_rank2()
    failures = [c.name for c in report.checks if not c.passed]
    assert not failures, failures
    return "; ".join(f"{c.name}: ok" for c in report.checks)


def complexity_probe(degrees=(996, 9996, 99996)) -> list:
    """Step counts and wall times along a linear trim-and-peel chain.

    The probe divisor (d-8)*A0 + B0 + C0 + K needs about d trim steps,
    one peeling step and one closed-form base case, so the trace length
    tracks d and h0 stays 3 at every scale.
    """
    g = generator
    rows = []
    for d in degrees:
        divisor = (d - 8) * g("A0") + g("B0") + g("C0") + canonical_class()
        start = time.perf_counter()
        result = coh.h_all_with_budget(divisor, 2 * d + 50)
        elapsed = time.perf_counter() - start
        rows.append((d, len(result.trace), elapsed, result.h0))
    return rows


def _criterion_12() -> str:
    rows = complexity_probe()
    for d, steps, _, h0 in rows:
        assert h0 == 3, (d, h0)
        assert steps <= 2 * d, (d, steps)
    ratios = [steps / d for d, steps, _, _ in rows]
    assert max(ratios) <= 2 * min(ratios), ratios
    timing = ", ".join(f"d={d}: {steps} steps {t:.2f}s" for d, steps, t, _ in rows)
    # Wall time at d ~ 1e5 is a soft criterion; reported, not asserted.
    return f"linear: {timing}; ratio spread {max(ratios) / min(ratios):.2f}"


# ---------------------------------------------------------------------------
# Runner.


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


CRITERIA: dict = {
    1: ("generator table integrity", _criterion_1),
    2: ("intersection pairing vs configuration geometry", _criterion_2),
    3: ("canonical twist census", _criterion_3),
    4: ("effectiveness vs h0, exhaustive sweep", _criterion_4),
    5: ("e-number brute force vs closed forms", _criterion_5),
    6: ("Serre duality sweep", _criterion_6),
    7: ("base-case regression", _criterion_7),
    8: ("base-locus subtlety at d = 8", _criterion_8),
    9: ("chi = 0 property sweeps", _criterion_9),
    10: ("no Ulrich line bundles at 3K", _criterion_10),
    11: ("rank-2 construction data", _criterion_11),
    12: ("linear step complexity", _criterion_12),
}


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        detail = fn()
        passed = True
    except Exception as exc:  # report, never hide
        detail = f"{type(exc).__name__}: {exc}"
        passed = False
    return CriterionResult(number, name, passed, detail, time.perf_counter() - start)


def run(numbers: Optional[list] = None, echo: Optional[Callable] = print) -> list:
    results = []
    for number in numbers or sorted(CRITERIA):
        result = run_criterion(number)
        results.append(result)
        if echo is not None:
            status = "PASS" if result.passed else "FAIL"
            echo(f"[{result.number:2d}] {status} {result.name} ({result.seconds:.1f}s) - {result.detail}")
    return results
