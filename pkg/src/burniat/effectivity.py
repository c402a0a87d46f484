"""Effectiveness of divisor classes: witnesses, e-numbers, reduced forms.

A class is effective exactly when it is a nonnegative combination of the
twelve ramification curves.  The decision procedure runs in two stages:
a torsion stage that proposes up to eight index-1,2 candidate parts (one
per way of realising the truncated torsion bits), and an index-0,3 stage
that solves the remaining torsion-free system in closed form.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple, Optional

from .picard import (
    ALL_TORSIONS,
    DivisorClass,
    InternalInconsistencyError,
    MembershipError,
    NumClass,
    SLOT_LABELS,
    TORSION_DIVISORS,
    Torsion,
    canonical_class,
    from_generators,
    from_truncated,
    generator,
)


class EffWitness(NamedTuple):
    """Nonnegative generator combination summing to the queried class."""

    combo: dict


class TrimStep(NamedTuple):
    label: str
    reason: str  # "negative-degree" or "zero-degree-torsion"


class ReduceResult(NamedTuple):
    divisor: Optional[DivisorClass]  # None when trimming drove d below zero
    steps: tuple


def step1_solve(d: int, a: int, b: int, c: int) -> Optional[tuple]:
    """Nonnegative (a0, b0, c0, a3, b3, c3) realising [d;a,b,c] with no torsion.

    All of a3, b3, c3 must be even, otherwise the index-3 curves would
    contribute torsion bits.  Returns the witness with lexicographically
    smallest (b3, c3), or None.
    """
    s = d + a + b + c
    if s % 3:
        raise MembershipError(f"d + a + b + c = {s} is not divisible by 3")
    ell = s // 3
    if ell < 0 or ell % 2:
        return None
    lam = ell // 2
    # Work with beta = b3/2, gamma = c3/2; ceil-halved bounds keep exactness.
    ca, cb, cc = (a + 1) // 2, (b + 1) // 2, (c + 1) // 2
    if ca > lam or cc > lam:
        return None
    beta = max(0, ca + cc - lam)
    if beta > min(lam, lam - cb):
        return None
    gamma = max(0, ca - beta)
    b3, c3 = 2 * beta, 2 * gamma
    a3 = ell - b3 - c3
    return (b3 + c3 - a, ell - b3 - b, ell - c3 - c, a3, b3, c3)


def _letter_options(bits: int, one: str, two: str, three: str) -> tuple:
    """The two candidate parts fixing one 2-bit torsion component."""
    return {
        0b00: ({}, {one: 1, two: 1, three: 1}),
        0b01: ({one: 1}, {two: 1, three: 1}),
        0b11: ({two: 1}, {one: 1, three: 1}),
        0b10: ({three: 1}, {one: 1, two: 1}),
    }[bits]


def torsion_candidates(tau: Torsion) -> list:
    """The eight candidate combinations whose truncated torsion equals tau.

    The A0 bits are produced by C curves, the B0 bits by A curves, the C0
    bits by B curves.  Order is deterministic: the one-curve option comes
    before the two-curve option for each letter.
    """
    candidates = []
    for part_a, part_b, part_c in itertools.product(
        _letter_options(tau.a, "C1", "C2", "C3"),
        _letter_options(tau.b, "A1", "A2", "A3"),
        _letter_options(tau.c, "B1", "B2", "B3"),
    ):
        combo: dict = {}
        for part in (part_a, part_b, part_c):
            for label, z in part.items():
                combo[label] = combo.get(label, 0) + z
        candidates.append(combo)
    return candidates


def _candidate_table() -> dict:
    table = {}
    for tau in ALL_TORSIONS:
        table[(tau.a, tau.b, tau.c)] = tuple(
            (combo, from_generators(combo)) for combo in torsion_candidates(tau)
        )
    return table


_CANDIDATES = _candidate_table()


def is_effective(divisor: DivisorClass) -> Optional[EffWitness]:
    """A nonnegative generator witness for the class, or None.

    The witness is deterministic: first candidate in table order, then the
    lexicographically first index-0,3 completion.
    """
    for combo, part in _CANDIDATES[(divisor.tors[0], divisor.tors[1], divisor.tors[2])]:
        rest = divisor - part
        sol = step1_solve(rest.d, rest.degs[0], rest.degs[1], rest.degs[2])
        if sol is None:
            continue
        witness = {label: z for label, z in combo.items()}
        for label, z in zip(SLOT_LABELS, sol):
            if z:
                witness[label] = witness.get(label, 0) + z
        if from_generators(witness) != divisor:
            raise InternalInconsistencyError(
                f"witness {witness} does not reproduce {divisor}"
            )
        return EffWitness(witness)
    return None


def e_number(nc: NumClass) -> int:
    """Number of effective classes among the 64 torsion twists (brute force)."""
    base = from_truncated(nc.d, (nc.a, 0), (nc.b, 0), (nc.c, 0))
    return sum(1 for t in TORSION_DIVISORS if is_effective(base + t) is not None)


def e_positive(nc: NumClass) -> bool:
    """Whether some twist of [d;a,b,c] is effective.

    Closed form (M <= ell <= d) inside its hypothesis d > 0; brute force
    otherwise.
    """
    if not nc.is_integral():
        return False
    if nc.d <= 0:
        return e_number(nc) >= 1
    ell = nc.ell
    return max(0, nc.a, nc.b, nc.c) <= ell <= nc.d


def e_full(nc: NumClass) -> bool:
    """Whether all 64 twists of [d;a,b,c] are effective."""
    if not nc.is_integral():
        return False
    if nc.d <= 0:
        return e_number(nc) == 64
    ell = nc.ell
    return nc.d >= 7 and max(3, max(0, nc.a, nc.b, nc.c) + 2) <= ell <= nc.d - 3


# ---------------------------------------------------------------------------
# Reduced forms.  h^0 is invariant under every trim step: subtracting an
# elliptic generator whose restriction degree is negative, or zero with a
# nonzero torsion component, does not change the space of sections.

# Generator rows for the six index-0,3 curves, keyed by slot, as raw tuples
# for the in-place loop used here and by the cohomology routine.
_SLOT_ROWS = tuple(
    (generator(label).degs, generator(label).tors) for label in SLOT_LABELS
)


def _subtract_slot_generator(state: list, slot: int) -> None:
    degs, tors = _SLOT_ROWS[slot]
    state[0] -= 1
    for k in range(6):
        state[1 + k] -= degs[k]
        state[7 + k] ^= tors[k]


def _trim_scan(state: list) -> tuple:
    """(slot, reason) of the first trimmable slot in canonical order, or (-1, '')."""
    for k in range(6):
        deg = state[1 + k]
        if deg < 0:
            return k, "negative-degree"
        if deg == 0 and state[7 + k]:
            return k, "zero-degree-torsion"
    return -1, ""


def reduce_divisor(divisor: DivisorClass) -> ReduceResult:
    """Trim to the reduced form.

    Ends at a reduced divisor (nef, d > 0, zero-degree slots torsion free),
    at the zero class, or with divisor=None once d goes negative, which
    certifies the input was not effective.
    """
    state = [divisor.d, *divisor.degs, *divisor.tors]
    steps = []
    while True:
        if state[0] < 0:
            return ReduceResult(None, tuple(steps))
        slot, reason = _trim_scan(state)
        if slot < 0:
            reduced = DivisorClass(state[0], tuple(state[1:7]), tuple(state[7:13]))
            return ReduceResult(reduced, tuple(steps))
        steps.append(TrimStep(SLOT_LABELS[slot], reason))
        _subtract_slot_generator(state, slot)


def format_witness(witness: EffWitness) -> str:
    from .picard import format_combo

    return format_combo(witness.combo)
