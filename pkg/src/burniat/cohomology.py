"""Cohomology dimensions (h0, h1, h2) of arbitrary divisor classes.

The computation follows one deterministic flow: dispose of numerically
trivial classes, settle effectiveness (dualising through K - D when only
that side is effective), trim to the reduced form, then either conclude
by Kawamata-Viehweg vanishing, peel off base-point free elliptic curves
one at a time, or finish in one of the closed-form base-case families.
h1 always comes from the Euler characteristic at the very end.

Every step is recorded in a trace; replaying the trace reproduces h0 as
the terminal base-case value plus one for each peeling step.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .picard import (
    DivisorClass,
    IDENTITY,
    InternalInconsistencyError,
    NumClass,
    SLOT_LABELS,
    SYMMETRIES,
    Symmetry,
    TORSION_ZERO,
    Torsion,
    apply_symmetry,
    canonical_class,
    generator,
    torsion_between,
    torsion_part,
)
from .effectivity import (
    _subtract_slot_generator,
    _trim_scan,
    is_effective,
)


class ClassificationGapError(RuntimeError):
    """A reduced effective divisor matched no known family.

    This signals a discrepancy between the classification theory and the
    implementation; it is never guessed around.
    """


class InvalidTauError(ValueError):
    """Torsion twist violating the family's reduced-form constraint."""


class BudgetExceededError(RuntimeError):
    """The step budget ran out before the computation finished."""


class BranchStep(NamedTuple):
    tag: str
    info: tuple = ()


class CohResult(NamedTuple):
    h0: int
    h1: int
    h2: int
    trace: tuple


class Classification(NamedTuple):
    family: str
    ell: int
    tau: Torsion
    sym: Symmetry


# Family identifiers name the normalised numerical class they cover.
ZERO_CLASS = "zero"
TORSION_ONLY = "torsion"
K_TWIST = "k-twist"
SIX_000 = "[6;0,0,0]"
L_00L = "[2l;0,0,l]"
L_00L_M1 = "[2l+1;0,0,l-1]"
L_01L_M1 = "[2l;0,1,l-1]"
L_0LM1_1 = "[2l;0,l-1,1]"
L_00L_PLUS_K = "[2l;0,0,l]+K"
SEVEN_011 = "[7;0,1,1]"
EIGHT_001 = "[8;0,0,1]"
EIGHT_022 = "[8;0,2,2]"

BASE_FAMILIES = (K_TWIST, SIX_000, L_00L, L_00L_M1, L_01L_M1, L_0LM1_1)
SMALL_NEF64_FAMILIES = (SEVEN_011, EIGHT_001, EIGHT_022)

FLEXIBLE_TORSIONS = (Torsion(2, 0, 0), Torsion(0, 2, 0), Torsion(0, 0, 2))


def h0_canonical_twist(tau: Torsion) -> int:
    """h0 of K + tau: zero for tau = 0, two for the three flexible twists."""
    if tau.is_zero():
        return 0
    if tau in FLEXIBLE_TORSIONS:
        return 2
    return 1


def base_divisor(family: str, ell: int) -> DivisorClass:
    """The normalised representative the family formulas are written for."""
    A0, B0, C0, A3, B3 = (generator(z) for z in ("A0", "B0", "C0", "A3", "B3"))
    K = canonical_class()
    if family == K_TWIST:
        return K
    if family == SIX_000:
        return 2 * (A0 + generator("C3") + B0)
    if family == L_00L:
        return ell * (A0 + B3)
    if family == L_00L_M1:
        return ell * (A0 + B3) + C0
    if family == L_01L_M1:
        return (ell - 1) * (A0 + B3) + (C0 + A3)
    if family == L_0LM1_1:
        return (ell - 1) * (C0 + A3) + (A0 + B3)
    if family == L_00L_PLUS_K:
        return ell * (A0 + B3) + K
    if family == SEVEN_011:
        return A0 + K
    if family == EIGHT_001:
        return A0 + B0 + K
    if family == EIGHT_022:
        return A0 + A3 + K
    raise ValueError(f"family {family!r} has no base divisor")


def _match_pattern(nc: NumClass) -> Optional[tuple]:
    d, a, b, c = nc
    if (d, a, b, c) == (6, 1, 1, 1):
        return K_TWIST, 3
    if (d, a, b, c) == (6, 0, 0, 0):
        return SIX_000, 2
    if a == 0 and b == 0 and d % 2 == 0 and d == 2 * c and c >= 1:
        return L_00L, c
    if a == 0 and b == 0 and d % 2 == 1:
        ell = (d - 1) // 2
        if c == ell - 1 and ell >= 1:
            return L_00L_M1, ell
    if a == 0 and b == 1 and d % 2 == 0:
        ell = d // 2
        if c == ell - 1 and ell >= 1:
            return L_01L_M1, ell
    if a == 0 and c == 1 and d % 2 == 0:
        ell = d // 2
        if b == ell - 1 and ell >= 3:
            return L_0LM1_1, ell
    if a == 1 and b == 1 and d % 2 == 0 and d >= 8:
        ell = (d - 6) // 2
        if c == ell + 1:
            return L_00L_PLUS_K, ell
    if (d, a, b, c) == (7, 0, 1, 1):
        return SEVEN_011, 3
    if (d, a, b, c) == (8, 0, 0, 1):
        return EIGHT_001, 3
    if (d, a, b, c) == (8, 0, 2, 2):
        return EIGHT_022, 4
    return None


def _tau_admissible(family: str, ell: int, tau: Torsion) -> bool:
    """Reduced-form constraint on the twist, relative to the family base."""
    if family in (K_TWIST, L_00L_PLUS_K):
        return True
    if family == SIX_000:
        return tau.is_zero()
    if family == L_00L:
        return tau.a == 0 and tau.b == 0 and (tau.c & 1) == (ell & 1)
    if family == L_00L_M1:
        if tau.a or tau.b:
            return False
        return tau.c == 0b10 if ell == 1 else True
    if family == L_01L_M1:
        if tau.a or not (tau.b & 1):
            return False
        return tau.c == 0 if ell == 1 else True
    if family == L_0LM1_1:
        return tau.a == 0 and (tau.b & 1) == (1 - (ell & 1))
    if family == SEVEN_011:
        return tau.a == 0
    if family == EIGHT_001:
        return tau.a == 0 and tau.b == 0
    if family == EIGHT_022:
        return tau.a == 0 and (tau.b & 1) == 0
    raise ValueError(f"family {family!r} has no twist constraint")


def classify_reduced(divisor: DivisorClass, families: Optional[tuple] = None) -> Classification:
    """Match a reduced divisor against the family table.

    The symmetry orbit is searched in the fixed group order and the first
    numerical match wins; the twist is then read off against the family's
    base divisor.  Inputs violating the matched family's reduced-form
    constraint raise InvalidTauError (ClassificationGapError for the
    unique-reduced-form family [6;0,0,0], whose only reduced member is
    twist free).
    """
    for sym in SYMMETRIES:
        image = apply_symmetry(sym, divisor)
        match = _match_pattern(image.num_class())
        if match is None:
            continue
        family, ell = match
        if families is not None and family not in families:
            continue
        tau = torsion_between(base_divisor(family, ell), image)
        if tau is None:
            raise InternalInconsistencyError(
                f"{divisor} matched {family} numerically but not modulo torsion"
            )
        if family == SIX_000 and not tau.is_zero():
            raise ClassificationGapError(
                f"reduced member of [6;0,0,0] with nonzero twist {tau}: {divisor}"
            )
        if not _tau_admissible(family, ell, tau):
            raise InvalidTauError(
                f"twist {tau} of {family} (l={ell}) violates the reduced-form "
                f"constraint; {divisor} is not reduced"
            )
        return Classification(family, ell, tau, sym)
    raise ClassificationGapError(f"no family matches {divisor}")


# Twist tables for the base-case values.  Torsions are written as bit-pair
# triples, e.g. (0, 2, 0) is (00 10 00).

_L0LM1_1_UPPER = {(0, 0, 0), (0, 0, 1), (0, 0, 3), (0, 2, 2)}
_L0LM1_1_LOWER = {(0, 2, 0), (0, 2, 1), (0, 2, 3), (0, 0, 2)}

_L00LK_MID_HIGH = {(0, 2, 1), (0, 2, 3), (0, 0, 2)}
_L00LK_MID_LOW = {(0, 0, 1), (0, 0, 3), (0, 2, 2)}


def base_case_h0(family: str, ell: int, tau: Torsion) -> int:
    """h0 of (base divisor of the family) + tau, for admissible tau."""
    if not _tau_admissible(family, ell, tau):
        raise InvalidTauError(f"twist {tau} is not admissible for {family} (l={ell})")
    key = (tau.a, tau.b, tau.c)
    if family == K_TWIST:
        return h0_canonical_twist(tau)
    if family == SIX_000:
        return 3
    if family == SEVEN_011:
        if key == (0, 2, 0):
            return 3
        return 1 if tau.is_zero() else 2
    if family == EIGHT_001:
        return 2 if tau.is_zero() else 3
    if family == EIGHT_022:
        if key == (0, 2, 0):
            return 4
        return 2 if tau.is_zero() else 3
    if family == L_00L:
        if ell % 2 == 0:
            return ell // 2 + 1 if tau.c == 0 else ell // 2
        return (ell + 1) // 2
    if family == L_00L_M1:
        if tau.c == 0:
            return ell // 2 + 1
        if tau.c & 1:
            return (ell - 1) // 2 + 1
        return ell // 2
    if family == L_01L_M1:
        return ell - 1 if ell >= 2 else 1
    if family == L_0LM1_1:
        if ell % 2 == 0:
            return ell // 2
        return (ell + 1) // 2 if key in _L0LM1_1_UPPER else (ell - 1) // 2
    if family == L_00L_PLUS_K:
        if key == (0, 2, 0):
            return (3 * ell + 4) // 2
        if key in _L00LK_MID_HIGH:
            return (3 * ell + 3) // 2
        if key in _L00LK_MID_LOW:
            return (3 * ell + 2) // 2
        if key == (0, 0, 0):
            return (3 * ell + 1) // 2
        return ell + 1
    raise ValueError(f"family {family!r} has no base-case value")


# ---------------------------------------------------------------------------
# The main computation.

# First group element (rot-major order) moving the given slot to position A0.
_NORMALIZER = {0: Symmetry(0, 0), 1: Symmetry(2, 0), 2: Symmetry(1, 0),
               3: Symmetry(0, 1), 4: Symmetry(2, 1), 5: Symmetry(1, 1)}


def h_all(divisor: DivisorClass, max_steps: Optional[int] = None) -> CohResult:
    """Full cohomology (h0, h1, h2) with a replayable branch trace."""
    trace: list = []

    def record(tag: str, *info) -> None:
        if max_steps is not None and len(trace) >= max_steps:
            raise BudgetExceededError(
                f"budget of {max_steps} branch steps exhausted at {tag}"
            )
        trace.append(BranchStep(tag, info))

    chi0 = divisor.chi()

    if divisor.is_numerically_trivial():
        tau = torsion_part(divisor)
        if tau.is_zero():
            record("base-case", ZERO_CLASS, 0, tau, IDENTITY)
            return CohResult(1, 0, 0, tuple(trace))
        h2 = h0_canonical_twist(tau)
        record("base-case", TORSION_ONLY, 0, tau, IDENTITY)
        return CohResult(0, h2 - 1, h2, tuple(trace))

    if is_effective(divisor) is None:
        dual = canonical_class() - divisor
        if is_effective(dual) is None:
            if chi0 > 0:
                raise InternalInconsistencyError(
                    f"chi({divisor}) = {chi0} > 0 with h0 = h2 = 0"
                )
            record("not-effective")
            return CohResult(0, -chi0, 0, tuple(trace))
        record("duality-swap")
        remaining = None if max_steps is None else max_steps - len(trace)
        inner = h_all(dual, remaining)
        return CohResult(inner.h2, inner.h1, inner.h0, tuple(trace) + inner.trace)

    # Effective, so h2 vanishes and h0 comes from the reduction flow.
    h0 = _h0_of_effective(divisor, record)
    h1 = h0 - chi0
    if h1 < 0:
        raise InternalInconsistencyError(
            f"negative superabundance h1 = {h1} for {divisor}"
        )
    return CohResult(h0, h1, 0, tuple(trace))


def h_all_with_budget(divisor: DivisorClass, max_steps: int) -> CohResult:
    """h_all that aborts with BudgetExceededError past max_steps branch steps."""
    return h_all(divisor, max_steps)


def _h0_of_effective(divisor: DivisorClass, record) -> int:
    """h0 of an effective divisor: trim, then vanish, peel, or close a base case."""
    state = [divisor.d, *divisor.degs, *divisor.tors]
    peeled = 0
    while True:
        # Reduced form (h0 is unchanged by every trim).
        while True:
            if state[0] < 0:
                raise InternalInconsistencyError(
                    f"effective divisor {divisor} trimmed to negative degree"
                )
            slot, reason = _trim_scan(state)
            if slot < 0:
                break
            record("trim", SLOT_LABELS[slot], reason)
            _subtract_slot_generator(state, slot)

        d = state[0]
        if d == 0:
            # Nef with total degree zero and clean torsion: the zero class.
            record("base-case", ZERO_CLASS, 0, TORSION_ZERO, IDENTITY)
            return peeled + 1

        a, b, c = state[1], state[2], state[3]
        ell = (d + a + b + c) // 3
        full = d >= 7 and max(3, max(a, b, c) + 2) <= ell <= d - 3

        if not full:
            cls = _classify_state(state, BASE_FAMILIES)
            record("base-case", *cls)
            return peeled + base_case_h0(cls.family, cls.ell, cls.tau)

        # e-number 64 from here on.
        if all(x > 0 for x in state[1:7]) and ell * ell > a * a + b * b + c * c:
            # Ample; decide by the self-intersection of the K-shifted class.
            ak, bk, ck, ellk = a - 1, b - 1, c - 1, ell - 3
            square = ellk * ellk - ak * ak - bk * bk - ck * ck
            if square > 0:
                chi_here = (ell * ell - a * a - b * b - c * c - d) // 2 + 1
                record("kv-vanishing", chi_here)
                return peeled + chi_here
            if square < 0:
                raise InternalInconsistencyError(
                    f"ample 64-effective class [{d};{a},{b},{c}] with (D-K)^2 < 0"
                )
            cls = _classify_state(state, (L_00L_PLUS_K,))
            record("ample-boundary", *cls)
            return peeled + base_case_h0(cls.family, cls.ell, cls.tau)

        if d >= 9:
            # Strictly nef: peel the first degree-zero elliptic curve.
            slot = next((k for k in range(6) if state[1 + k] == 0), None)
            if slot is None:
                raise InternalInconsistencyError(
                    f"non-ample nef class [{d};{a},{b},{c}] without zero slot"
                )
            if state[7 + slot]:
                raise InternalInconsistencyError("peeling a slot with torsion")
            record("nef-reduce", SLOT_LABELS[slot], _NORMALIZER[slot])
            _subtract_slot_generator(state, slot)
            peeled += 1
            continue

        cls = _classify_state(state, SMALL_NEF64_FAMILIES)
        record("base-case", *cls)
        return peeled + base_case_h0(cls.family, cls.ell, cls.tau)


def _classify_state(state: list, families: tuple) -> Classification:
    current = DivisorClass(state[0], tuple(state[1:7]), tuple(state[7:13]))
    cls = classify_reduced(current, families)
    if cls.family not in families:
        raise InternalInconsistencyError(
            f"{current} classified as {cls.family}, expected one of {families}"
        )
    return cls
