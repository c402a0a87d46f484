"""Exact model of the Picard group of the primary Burniat surface (K^2 = 6).

A divisor class is stored in full symmetric coordinates: the degree d
against the canonical class, plus six slots, one for each elliptic
ramification curve in the canonical order (A0, B0, C0, A3, B3, C3).
Each slot holds an integer restriction degree and a 2-torsion point of
the curve, encoded as a pair of bits.  The last three slots carry no
independent information: both their degrees and their torsion bits are
determined by the first four coordinates, and this module derives them
with a fixed affine rule that is validated against the generator table
at import time.

Everything here is exact integer arithmetic; all values are immutable
and all operations are pure.
"""

from __future__ import annotations

import re
from typing import Mapping, NamedTuple, Optional


class MembershipError(ValueError):
    """Coordinates that do not describe a class of the Picard group."""


class InternalInconsistencyError(RuntimeError):
    """A structural invariant failed; the computation aborts loudly."""


class ParseError(ValueError):
    """Divisor expression that does not match the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# Bit pairs are stored as integers 0..3 with value (e1 << 1) | e2, so the
# written form "10" is the integer 2.  Addition of torsion points is XOR.

def bits_from_str(text: str) -> int:
    if len(text) != 2 or text.strip("01"):
        raise ValueError(f"bad bit pair {text!r}")
    return int(text, 2)


def bits_to_str(bits: int) -> str:
    return f"{bits >> 1 & 1}{bits & 1}"


LETTERS = ("A", "B", "C")
LABELS = tuple(f"{z}{i}" for z in LETTERS for i in range(4))

# Canonical slot order used everywhere, including tie breaking.
SLOT_LABELS = ("A0", "B0", "C0", "A3", "B3", "C3")
SLOT_INDEX = {label: k for k, label in enumerate(SLOT_LABELS)}


class NumClass(NamedTuple):
    """Numerical class [d; a, b, c]; torsion forgotten."""

    d: int
    a: int
    b: int
    c: int

    @property
    def ell(self) -> int:
        s = self.d + self.a + self.b + self.c
        if s % 3:
            raise MembershipError(f"{self} has non-integral ell: (d+a+b+c) = {s}")
        return s // 3

    def is_integral(self) -> bool:
        return (self.d + self.a + self.b + self.c) % 3 == 0

    def __str__(self) -> str:
        return f"[{self.d};{self.a},{self.b},{self.c}]"


class DivisorClass:
    """A linear-equivalence class in full symmetric coordinates."""

    __slots__ = ("d", "degs", "tors", "_hash")

    def __init__(self, d: int, degs: tuple, tors: tuple):
        if (d + degs[0] + degs[1] + degs[2]) % 3:
            raise MembershipError(
                f"d + a + b + c = {d + degs[0] + degs[1] + degs[2]} is not divisible by 3"
            )
        self.d = d
        self.degs = degs
        self.tors = tors
        self._hash = hash((d, degs, tors))

    # -- group arithmetic (componentwise; torsion bits add by XOR) --

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(
            self.d + other.d,
            tuple(x + y for x, y in zip(self.degs, other.degs)),
            tuple(x ^ y for x, y in zip(self.tors, other.tors)),
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(
            self.d - other.d,
            tuple(x - y for x, y in zip(self.degs, other.degs)),
            tuple(x ^ y for x, y in zip(self.tors, other.tors)),
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.d, tuple(-x for x in self.degs), self.tors)

    def __mul__(self, n: int) -> "DivisorClass":
        return DivisorClass(
            n * self.d,
            tuple(n * x for x in self.degs),
            tuple(x * (n & 1) for x in self.tors),
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.d == other.d and self.degs == other.degs and self.tors == other.tors

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"DivisorClass({format_divisor(self)!r})"

    def __str__(self) -> str:
        return format_divisor(self)

    # -- numerical data --

    def num_class(self) -> NumClass:
        return NumClass(self.d, self.degs[0], self.degs[1], self.degs[2])

    @property
    def ell(self) -> int:
        return (self.d + self.degs[0] + self.degs[1] + self.degs[2]) // 3

    def is_zero(self) -> bool:
        return self.d == 0 and not any(self.degs) and not any(self.tors)

    def is_numerically_trivial(self) -> bool:
        return self.d == 0 and not any(self.degs)

    def intersect(self, other: "DivisorClass") -> int:
        """Intersection number, bilinear in ell and the three index-0 degrees."""
        a, b, c = self.degs[0], self.degs[1], self.degs[2]
        a2, b2, c2 = other.degs[0], other.degs[1], other.degs[2]
        return self.ell * other.ell - a * a2 - b * b2 - c * c2

    def self_intersection(self) -> int:
        return self.intersect(self)

    def chi(self) -> int:
        """Holomorphic Euler characteristic by Riemann-Roch."""
        two_chi = self.self_intersection() - self.d + 2
        if two_chi % 2:
            raise MembershipError(f"Riemann-Roch parity failure for {self}")
        return two_chi // 2

    def restriction_degree(self, label: str) -> int:
        """Degree of the restriction to the named ramification curve."""
        k = SLOT_INDEX.get(label)
        if k is not None:
            return self.degs[k]
        ell = self.ell
        letter, index = label[0], label[1]
        if letter not in LETTERS or index not in "12":
            raise ValueError(f"unknown curve label {label!r}")
        # A1, A2 are numerically C0 + A3, and cyclically for B, C.
        if letter == "A":
            return ell - self.degs[1]
        if letter == "B":
            return ell - self.degs[2]
        return ell - self.degs[0]

    def is_nef(self) -> bool:
        """Nonnegative on the six elliptic generators (the rest follow)."""
        return all(x >= 0 for x in self.degs)

    def is_ample(self) -> bool:
        return all(x > 0 for x in self.degs) and self.self_intersection() > 0

    def truncated(self) -> tuple:
        """(d, (a, bits), (b, bits), (c, bits)) without the derived slots."""
        return (
            self.d,
            (self.degs[0], self.tors[0]),
            (self.degs[1], self.tors[1]),
            (self.degs[2], self.tors[2]),
        )


def _derived_slots(d: int, a: int, ta: int, b: int, tb: int, c: int, tc: int):
    """Degrees and torsion bits of the A3, B3, C3 slots.

    The degrees are forced by ell = (d+a+b+c)/3.  The torsion rule is the
    affine extension of the pure-torsion dependency; it is checked against
    all thirteen generator rows at import time.
    """
    ell = (d + a + b + c) // 3
    ta3 = (((ta >> 1) + (tb & 1) + c + ell) & 1) << 1 | (ta & 1)
    tb3 = (((tb >> 1) + (tc & 1) + a + ell) & 1) << 1 | (tb & 1)
    tc3 = (((tc >> 1) + (ta & 1) + b + ell) & 1) << 1 | (tc & 1)
    return (ell - b - c, ell - c - a, ell - a - b), (ta3, tb3, tc3)


def from_truncated(d: int, slot_a, slot_b, slot_c) -> DivisorClass:
    """Build a class from truncated coordinates, deriving the last three slots.

    Each slot is a pair (degree, bits) with bits an int 0..3 or a string
    like "10".  Raises MembershipError when 3 does not divide d+a+b+c.
    """
    (a, ta), (b, tb), (c, tc) = slot_a, slot_b, slot_c
    if isinstance(ta, str):
        ta = bits_from_str(ta)
    if isinstance(tb, str):
        tb = bits_from_str(tb)
    if isinstance(tc, str):
        tc = bits_from_str(tc)
    if (d + a + b + c) % 3:
        raise MembershipError(f"d + a + b + c = {d + a + b + c} is not divisible by 3")
    degs3, tors3 = _derived_slots(d, a, ta, b, tb, c, tc)
    return DivisorClass(d, (a, b, c) + degs3, (ta, tb, tc) + tors3)


def _row(d, *slots) -> DivisorClass:
    degs = tuple(deg for deg, _ in slots)
    tors = tuple(bits_from_str(bits) for _, bits in slots)
    return DivisorClass(d, degs, tors)


# Symmetric coordinates of the twelve ramification curves and of K, in
# slot order (A0, B0, C0, A3, B3, C3).
_GENERATORS = {
    "A0": _row(1, (-1, "00"), (0, "00"), (0, "00"), (0, "00"), (1, "10"), (1, "00")),
    "B0": _row(1, (0, "00"), (-1, "00"), (0, "00"), (1, "00"), (0, "00"), (1, "10")),
    "C0": _row(1, (0, "00"), (0, "00"), (-1, "00"), (1, "10"), (1, "00"), (0, "00")),
    "A3": _row(1, (0, "00"), (1, "10"), (1, "00"), (-1, "00"), (0, "00"), (0, "00")),
    "B3": _row(1, (1, "00"), (0, "00"), (1, "10"), (0, "00"), (-1, "00"), (0, "00")),
    "C3": _row(1, (1, "10"), (1, "00"), (0, "00"), (0, "00"), (0, "00"), (-1, "00")),
    "A1": _row(2, (0, "00"), (1, "01"), (0, "00"), (0, "00"), (1, "11"), (0, "00")),
    "A2": _row(2, (0, "00"), (1, "11"), (0, "00"), (0, "00"), (1, "01"), (0, "00")),
    "B1": _row(2, (0, "00"), (0, "00"), (1, "01"), (0, "00"), (0, "00"), (1, "11")),
    "B2": _row(2, (0, "00"), (0, "00"), (1, "11"), (0, "00"), (0, "00"), (1, "01")),
    "C1": _row(2, (1, "01"), (0, "00"), (0, "00"), (1, "11"), (0, "00"), (0, "00")),
    "C2": _row(2, (1, "11"), (0, "00"), (0, "00"), (1, "01"), (0, "00"), (0, "00")),
}

_CANONICAL = _row(6, *(((1, "00"),) * 6))

ZERO = DivisorClass(0, (0,) * 6, (0,) * 6)


def generator(label: str) -> DivisorClass:
    try:
        return _GENERATORS[label]
    except KeyError:
        raise ValueError(f"unknown curve label {label!r}") from None


def canonical_class() -> DivisorClass:
    return _CANONICAL


def zero_class() -> DivisorClass:
    return ZERO


def from_generators(combo: Mapping[str, int]) -> DivisorClass:
    """Sum of generator rows with integer coefficients."""
    result = ZERO
    for label, z in combo.items():
        if z:
            result = result + z * generator(label)
    return result


def format_combo(combo: Mapping[str, int]) -> str:
    """Human form of a generator combination, e.g. 'A0 + 2*B3 - C1'."""
    parts = []
    for label in LABELS:
        z = combo.get(label, 0)
        if not z:
            continue
        sign = "-" if z < 0 else "+"
        mag = abs(z)
        term = label if mag == 1 else f"{mag}*{label}"
        parts.append((sign, term))
    if not parts:
        return "0"
    first_sign, first_term = parts[0]
    text = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


# ---------------------------------------------------------------------------
# Torsion subgroup


class Torsion(NamedTuple):
    """Element of the 64-element torsion subgroup, as three truncated bit pairs."""

    a: int
    b: int
    c: int

    def full_bits(self) -> tuple:
        """All six bit pairs, the last three by the dependency rule."""
        _, tors3 = _derived_slots(0, 0, self.a, 0, self.b, 0, self.c)
        return (self.a, self.b, self.c) + tors3

    def to_divisor(self) -> DivisorClass:
        return DivisorClass(0, (0,) * 6, self.full_bits())

    def __add__(self, other: "Torsion") -> "Torsion":  # type: ignore[override]
        return Torsion(self.a ^ other.a, self.b ^ other.b, self.c ^ other.c)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c)

    def __str__(self) -> str:
        return f"({bits_to_str(self.a)} {bits_to_str(self.b)} {bits_to_str(self.c)})"

    @classmethod
    def from_string(cls, text: str) -> "Torsion":
        digits = text.strip().strip("()").replace(" ", "")
        if len(digits) != 6 or digits.strip("01"):
            raise ValueError(f"bad torsion literal {text!r}")
        return cls(int(digits[0:2], 2), int(digits[2:4], 2), int(digits[4:6], 2))


TORSION_ZERO = Torsion(0, 0, 0)


def enumerate_torsions() -> list:
    """All 64 torsion elements, in lexicographic bit order."""
    return [Torsion(a, b, c) for a in range(4) for b in range(4) for c in range(4)]


ALL_TORSIONS = tuple(enumerate_torsions())
TORSION_DIVISORS = tuple(t.to_divisor() for t in ALL_TORSIONS)


def torsion_between(base: DivisorClass, other: DivisorClass) -> Optional[Torsion]:
    """The torsion with other = base + t, or None if they differ numerically."""
    diff = other - base
    if not diff.is_numerically_trivial():
        return None
    return Torsion(diff.tors[0], diff.tors[1], diff.tors[2])


def torsion_part(divisor: DivisorClass) -> Torsion:
    """Truncated torsion bits of a class (its twist over the bits-free class)."""
    return Torsion(divisor.tors[0], divisor.tors[1], divisor.tors[2])


# ---------------------------------------------------------------------------
# The order-6 coordinate symmetry group


class Symmetry(NamedTuple):
    """rot cycles the letters A -> B -> C -> A, flip swaps indices i <-> 3-i.

    The two commute, so the group is cyclic of order six.  Letter swaps are
    not symmetries and are deliberately not representable.
    """

    rot: int
    flip: int

    def compose(self, other: "Symmetry") -> "Symmetry":
        return Symmetry((self.rot + other.rot) % 3, (self.flip + other.flip) % 2)

    def inverse(self) -> "Symmetry":
        return Symmetry((-self.rot) % 3, self.flip)

    def on_label(self, label: str) -> str:
        letter, index = label[0], int(label[1])
        letter = LETTERS[(LETTERS.index(letter) + self.rot) % 3]
        if self.flip:
            index = 3 - index
        return f"{letter}{index}"

    def __str__(self) -> str:
        return f"rot^{self.rot}*flip^{self.flip}"


IDENTITY = Symmetry(0, 0)
# Fixed enumeration order, rot-major; "first element achieving X" refers to it.
SYMMETRIES = tuple(Symmetry(r, f) for r in range(3) for f in range(2))

_ROT_PERM = (2, 0, 1, 5, 3, 4)   # new slot k takes the value of old slot perm[k]
_FLIP_PERM = (3, 4, 5, 0, 1, 2)


def apply_symmetry(sym: Symmetry, divisor: DivisorClass) -> DivisorClass:
    degs, tors = divisor.degs, divisor.tors
    for _ in range(sym.rot):
        degs = tuple(degs[k] for k in _ROT_PERM)
        tors = tuple(tors[k] for k in _ROT_PERM)
    if sym.flip:
        degs = tuple(degs[k] for k in _FLIP_PERM)
        tors = tuple(tors[k] for k in _FLIP_PERM)
    return DivisorClass(divisor.d, degs, tors)


def apply_symmetry_num(sym: Symmetry, nc: NumClass) -> NumClass:
    d, a, b, c = nc
    for _ in range(sym.rot):
        a, b, c = c, a, b
    if sym.flip:
        ell = NumClass(d, a, b, c).ell
        a, b, c = ell - b - c, ell - c - a, ell - a - b
    return NumClass(d, a, b, c)


def orbit(nc: NumClass) -> set:
    """The symmetry orbit of a numerical class (at most six elements)."""
    return {apply_symmetry_num(sym, nc) for sym in SYMMETRIES}


# ---------------------------------------------------------------------------
# Parsing and formatting

_TOKEN = re.compile(
    r"(?P<int>\d+)|(?P<gen>[ABC][0-3]|K)|(?P<op>[-+*])"
    r"|(?P<coord>\[[^][]*\])|(?P<tors>\([01 ]*\))"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos, n = 0, len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), pos))
        pos = m.end()
    return tokens


def _parse_coord_literal(text: str, offset: int) -> DivisorClass:
    body = text[1:-1]
    sections = body.split(";")
    if len(sections) not in (2, 3):
        raise ParseError("coordinate literal needs [d; a:bits, b:bits, c:bits]", offset)
    try:
        d = int(sections[0].strip())
    except ValueError:
        raise ParseError(f"bad degree {sections[0].strip()!r}", offset) from None

    def parse_slots(section: str) -> list:
        slots = []
        for piece in section.split(","):
            piece = piece.strip()
            m = re.fullmatch(r"(-?\d+)\s*:\s*([01]{2})", piece)
            if not m:
                raise ParseError(f"bad slot {piece!r}", offset)
            slots.append((int(m.group(1)), bits_from_str(m.group(2))))
        if len(slots) != 3:
            raise ParseError("expected three slots", offset)
        return slots

    slots = parse_slots(sections[1])
    divisor = from_truncated(d, *slots)
    if len(sections) == 3:
        # Starred slots are validated against the derived values, never trusted.
        starred = parse_slots(sections[2])
        for k, (deg, bits) in enumerate(starred):
            if divisor.degs[3 + k] != deg or divisor.tors[3 + k] != bits:
                raise MembershipError(
                    f"starred slot {SLOT_LABELS[3 + k]} should be "
                    f"({divisor.degs[3 + k]},{bits_to_str(divisor.tors[3 + k])}),"
                    f" got ({deg},{bits_to_str(bits)})"
                )
    return divisor


def parse_divisor(text: str) -> DivisorClass:
    """Parse 'A0 + 2*B3 - C1', 'K', '[7; 1:10, 2:01, 2:11]', '(10 01 11)', or sums."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty divisor expression", 0)
    total = ZERO
    i = 0
    first = True
    while i < len(tokens):
        kind, value, pos = tokens[i]
        sign = 1
        if kind == "op":
            if value == "*":
                raise ParseError("'*' without coefficient", pos)
            if first and value == "+":
                raise ParseError("leading '+' is not allowed", pos)
            sign = -1 if value == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", pos)
        if i >= len(tokens):
            raise ParseError("dangling operator", pos)
        kind, value, pos = tokens[i]
        coeff = 1
        if kind == "int":
            coeff = int(value)
            i += 1
            if i >= len(tokens) or tokens[i][:2] != ("op", "*"):
                raise ParseError("expected '*' after coefficient", pos)
            i += 1
            if i >= len(tokens):
                raise ParseError("coefficient without generator", pos)
            kind, value, pos = tokens[i]
        if kind == "gen":
            atom = _CANONICAL if value == "K" else generator(value)
        elif kind == "coord":
            atom = _parse_coord_literal(value, pos)
        elif kind == "tors":
            atom = Torsion.from_string(value).to_divisor()
        else:
            raise ParseError(f"expected a generator or literal, got {value!r}", pos)
        total = total + (sign * coeff) * atom
        i += 1
        first = False
    return total


def format_divisor(divisor: DivisorClass, starred: bool = False) -> str:
    """Canonical coordinate literal; parse_divisor round-trips it."""
    d = divisor.d
    head = ", ".join(
        f"{divisor.degs[k]}:{bits_to_str(divisor.tors[k])}" for k in range(3)
    )
    if not starred:
        return f"[{d}; {head}]"
    tail = ", ".join(
        f"{divisor.degs[k]}:{bits_to_str(divisor.tors[k])}" for k in range(3, 6)
    )
    return f"[{d}; {head}; {tail}]"


# ---------------------------------------------------------------------------
# Import-time validation of the derived-slot rule.  The full coordinates of
# the generators are data; the derivation must reproduce them, and the
# pure-torsion dependency must be its d = 0 specialisation.

def _validate_tables() -> None:
    for label, row in list(_GENERATORS.items()) + [("K", _CANONICAL)]:
        derived = from_truncated(row.d, *[(row.degs[k], row.tors[k]) for k in range(3)])
        if derived != row:
            raise AssertionError(f"derived slots disagree with table row {label}")
    for t in ALL_TORSIONS:
        a, b, c = t.a, t.b, t.c
        expected = (
            ((a >> 1) ^ (b & 1)) << 1 | (a & 1),
            ((b >> 1) ^ (c & 1)) << 1 | (b & 1),
            ((c >> 1) ^ (a & 1)) << 1 | (c & 1),
        )
        if t.full_bits()[3:] != expected:
            raise AssertionError(f"torsion dependency fails for {t}")


_validate_tables()
