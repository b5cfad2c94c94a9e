"""Ternary frontier states for domination counting on lattice strips.

A row of an m-column lattice is summarized by a *signature*: one cell state
per column, each Uncovered, Covered, or Occupied.  Signatures are stored as
little-endian base-3 integers (cell i contributes digit * 3**i, counting from
the left), which keeps them machine-word sized up to width 40 and gives a
canonical sort order.  Validity forbids an Uncovered cell directly next to an
Occupied one; the cyclic variant also applies that rule across the wrap from
the last column back to the first.

This module also carries the counting formulas for signatures: the Pell-style
recurrence for plain signatures, the cyclic recurrence, the kinked variant
used for partially filled rows, and the reflection-reduced count.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import mpmath
import numpy as np

MAX_WIDTH = 40  # 3**40 < 2**64: codes stay representable in a machine word


class CellState(IntEnum):
    """State of one column in a row signature; values are the base-3 digits."""

    UNCOVERED = 0
    COVERED = 1
    OCCUPIED = 2


_STATE_TO_CHAR = {CellState.UNCOVERED: "o", CellState.COVERED: "c", CellState.OCCUPIED: "x"}
_CHAR_TO_STATE = {v: k for k, v in _STATE_TO_CHAR.items()}


def _check_width(width: int) -> None:
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {width}")


def encode(cells: Sequence[CellState]) -> int:
    """Pack cell states into the little-endian base-3 integer code."""
    _check_width(len(cells))
    code = 0
    for i, cell in enumerate(cells):
        code += int(cell) * 3**i
    return code


def decode(code: int, width: int) -> tuple[CellState, ...]:
    """Unpack a code into its cell states (inverse of :func:`encode`)."""
    _check_width(width)
    if not 0 <= code < 3**width:
        raise ValueError(f"code {code} out of range for width {width}")
    cells = []
    for _ in range(width):
        cells.append(CellState(code % 3))
        code //= 3
    return tuple(cells)


@dataclass(frozen=True)
class Signature:
    """A row signature: width plus its integer code; cells are derived."""

    width: int
    code: int

    def __post_init__(self) -> None:
        _check_width(self.width)
        if not 0 <= self.code < 3**self.width:
            raise ValueError(f"code {self.code} out of range for width {self.width}")

    @classmethod
    def from_cells(cls, cells: Sequence[CellState]) -> "Signature":
        return cls(len(cells), encode(cells))

    @classmethod
    def from_text(cls, text: str) -> "Signature":
        """Parse the textual form: one of 'o', 'c', 'x' per column."""
        try:
            cells = [_CHAR_TO_STATE[ch] for ch in text]
        except KeyError as exc:
            raise ValueError(f"bad signature character {exc.args[0]!r}") from None
        return cls.from_cells(cells)

    @property
    def cells(self) -> tuple[CellState, ...]:
        return decode(self.code, self.width)

    def to_text(self) -> str:
        return "".join(_STATE_TO_CHAR[c] for c in self.cells)

    def __str__(self) -> str:
        return self.to_text()


def all_covered(width: int) -> Signature:
    """The start-of-sweep signature with every column Covered."""
    return Signature(width, (3**width - 1) // 2)


_FORBIDDEN = {(CellState.UNCOVERED, CellState.OCCUPIED),
              (CellState.OCCUPIED, CellState.UNCOVERED)}


def is_valid(sig: Signature, cyclic: bool = False, kink: Optional[int] = None) -> bool:
    """Check the no-(Uncovered,Occupied)-adjacency rule.

    With ``kink=c`` (1-indexed) the rule is suspended between positions c-1
    and c: those two cells belong to different rows of the lattice and are not
    actually adjacent.  ``kink=1`` suspends nothing and equals plain validity.
    """
    cells = sig.cells
    m = sig.width
    if kink is not None and not 1 <= kink <= m:
        raise ValueError(f"kink column must be in 1..{m}")
    for i in range(m - 1):
        if kink is not None and i == kink - 2:
            continue
        if (cells[i], cells[i + 1]) in _FORBIDDEN:
            return False
    if cyclic and m >= 2:
        if (cells[m - 1], cells[0]) in _FORBIDDEN:
            return False
    return True


def signature_codes(m: int, cyclic: bool = False) -> np.ndarray:
    """All valid signature codes of width m, ascending, as an int64 array."""
    _check_width(m)
    codes = np.arange(3, dtype=np.int64)  # single-cell codes 0, 1, 2
    last = codes.copy()                   # digit of the most recent cell
    for i in range(1, m):
        parts = []
        last_parts = []
        place = 3**i
        for d in range(3):
            if d == 0:
                keep = last != 2
            elif d == 2:
                keep = last != 0
            else:
                keep = np.ones(len(codes), dtype=bool)
            parts.append(codes[keep] + d * place)
            last_parts.append(np.full(int(keep.sum()), d, dtype=np.int64))
        codes = np.concatenate(parts)
        last = np.concatenate(last_parts)
    # blocks were emitted in increasing most-significant digit, so the
    # concatenation is already sorted
    if cyclic and m >= 2:
        first = codes % 3
        bad = ((first == 0) & (last == 2)) | ((first == 2) & (last == 0))
        codes = codes[~bad]
    return codes


def enumerate_signatures(m: int, cyclic: bool = False) -> list[Signature]:
    """The valid signatures of width m in ascending code order."""
    return [Signature(m, int(c)) for c in signature_codes(m, cyclic)]


def iter_signatures(m: int, cyclic: bool = False) -> Iterator[Signature]:
    for c in signature_codes(m, cyclic):
        yield Signature(m, int(c))


@lru_cache(maxsize=None)
def _plain_counts(limit: int) -> tuple[int, ...]:
    # a(m) = 2 a(m-1) + a(m-2), a(0) = 1, a(1) = 3
    vals = [1, 3]
    while len(vals) <= limit:
        vals.append(2 * vals[-1] + vals[-2])
    return tuple(vals)


@lru_cache(maxsize=None)
def _cyclic_counts(limit: int) -> tuple[int, ...]:
    # abar(m) = 3 abar(m-1) - abar(m-2) - abar(m-3), abar(0)=3, abar(1)=3, abar(2)=7
    vals = [3, 3, 7]
    while len(vals) <= limit:
        vals.append(3 * vals[-1] - vals[-2] - vals[-3])
    return tuple(vals)


def count_signatures(m: int, variant: str = "plain", c: Optional[int] = None) -> int:
    """Count signatures of width m by integer recurrence.

    variant: "plain", "cyclic", "kinked" (requires the kink column c), or
    "reflection_reduced" (signatures up to mirror image).
    """
    if m < 0:
        raise ValueError("width must be nonnegative")
    if variant == "plain":
        return _plain_counts(m)[m]
    if variant == "cyclic":
        return _cyclic_counts(m)[m]
    if variant == "kinked":
        if c is None or not 1 <= c <= max(m, 1):
            raise ValueError("kinked variant needs a column c in 1..m")
        # same Pell recurrence, except the step that crosses the kink loses
        # the adjacency constraint and all three states are allowed
        prev2, prev = 1, 1  # a_c(-1), a_c(0)
        for k in range(1, m + 1):
            cur = 3 * prev if k == c else 2 * prev + prev2
            prev2, prev = prev, cur
        return prev
    if variant == "reflection_reduced":
        # Burnside over {identity, reflection}: fixed points of the
        # reflection are the palindromes, determined by their first half
        return (_plain_counts(m)[m] + _plain_counts((m + 1) // 2)[(m + 1) // 2]) // 2
    raise ValueError(f"unknown variant {variant!r}")


#: growth base of the plain signature count, 1 + sqrt(2)
GROWTH_BASE = 1 + mpmath.sqrt(2)


def closed_form_count(m: int, variant: str = "plain") -> int:
    """Evaluate the closed-form count and round to the nearest integer.

    Cross-check only; the recurrences in :func:`count_signatures` are the
    source of truth.  Evaluated at 50 significant digits so rounding is exact
    for every width up to MAX_WIDTH.
    """
    if m < 0:
        raise ValueError("width must be nonnegative")
    with mpmath.workdps(50):
        lam = 1 + mpmath.sqrt(2)
        lam_conj = 1 - mpmath.sqrt(2)
        if variant == "plain":
            # coefficients (1 -+ sqrt 2)/2 of the two Pell eigenvalues
            val = (lam_conj * lam_conj**m + lam * lam**m) / 2
        elif variant == "cyclic":
            val = 1 + lam_conj**m + lam**m
        else:
            raise ValueError(f"no closed form for variant {variant!r}")
        return int(mpmath.nint(val))


def reflect(sig: Signature) -> Signature:
    """Mirror image; maps valid signatures to valid signatures."""
    return Signature.from_cells(tuple(reversed(sig.cells)))


def rotate(sig: Signature, k: int) -> Signature:
    """Cyclic shift by k positions; defined for cyclic-valid signatures."""
    if not is_valid(sig, cyclic=True):
        raise ValueError("rotate requires a cyclic-valid signature")
    cells = sig.cells
    k %= sig.width
    return Signature.from_cells(cells[k:] + cells[:k])


def uncovered_count(sig: Signature) -> int:
    return sum(1 for c in sig.cells if c is CellState.UNCOVERED)


def occupied_count(sig: Signature) -> int:
    return sum(1 for c in sig.cells if c is CellState.OCCUPIED)


def dihedral_orbits(m: int) -> list[tuple[int, int]]:
    """Orbits of the cyclic signatures under rotation and reflection.

    Returns (representative code, orbit size) pairs, representatives
    ascending.  The representative is the smallest code in its orbit.
    """
    seen: set[int] = set()
    orbits: list[tuple[int, int]] = []
    for code in signature_codes(m, cyclic=True):
        code = int(code)
        if code in seen:
            continue
        cells = decode(code, m)
        orbit = set()
        for k in range(m):
            shifted = cells[k:] + cells[:k]
            orbit.add(encode(shifted))
            orbit.add(encode(tuple(reversed(shifted))))
        seen |= orbit
        orbits.append((min(orbit), len(orbit)))
    return orbits
