"""Row-to-row transfer for domination sweeps.

Two equivalent views of the same step live here.  The explicit transfer
matrix A has one row and column per signature; entry (tau, sigma) is the
monomial z^(occupied in tau) when the new row tau is compatible with the old
row sigma, and absent otherwise.  The `extend` operation realizes the same
step one vertex at a time on a mixed-row window (a "kinked" state), which is
what the production sweep uses; materializing A is only feasible for small
widths and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GuardExceeded
from .rings import EXACT, Polynomial, poly_scale_shift_add
from .signatures import (
    CellState,
    Signature,
    count_signatures,
    enumerate_signatures,
    is_valid,
    occupied_count,
)

_UNC = CellState.UNCOVERED
_COV = CellState.COVERED
_OCC = CellState.OCCUPIED

MATRIX_GUARD = 100_000

FAMILIES_WITH_KERNEL = ("grid", "cylinder", "king")


def compatible(sigma: Signature, tau: Signature, cyclic: bool = False) -> bool:
    """Can row tau be placed directly below row sigma?

    Three conditions, checked per column i: an uncovered sigma cell forces
    tau_i occupied (nothing else can ever reach it); an occupied sigma cell
    forces tau_i covered or occupied; a covered tau cell needs a justifier,
    i.e. sigma_i occupied or a horizontally adjacent occupied cell in tau.
    Horizontal indices wrap when cyclic; otherwise boundary neighbors are
    simply ignored.
    """
    if sigma.width != tau.width:
        raise ValueError(f"width mismatch: {sigma.width} vs {tau.width}")
    s = sigma.cells
    t = tau.cells
    m = sigma.width
    for i in range(m):
        if s[i] is _UNC and t[i] is not _OCC:
            return False
        if s[i] is _OCC and t[i] is _UNC:
            return False
        if t[i] is _COV and s[i] is not _OCC:
            justified = (i > 0 and t[i - 1] is _OCC) or (i < m - 1 and t[i + 1] is _OCC)
            if cyclic and m >= 2 and not justified:
                justified = (i == 0 and t[m - 1] is _OCC) or (i == m - 1 and t[0] is _OCC)
            if not justified:
                return False
    return True


@dataclass(frozen=True)
class TransferMatrix:
    """Explicit transfer matrix for width m (plain or cyclic signatures).

    `exponents[ti][si]` is the monomial exponent for (tau, sigma) at
    positions ti, si of `signatures`, or None when incompatible.
    """

    width: int
    cyclic: bool
    signatures: tuple[Signature, ...]
    exponents: tuple[tuple[Optional[int], ...], ...]

    def index_of(self, sig: Signature) -> int:
        lo, hi = 0, len(self.signatures)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.signatures[mid].code < sig.code:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(self.signatures) or self.signatures[lo].code != sig.code:
            raise KeyError(f"signature {sig} not in matrix")
        return lo

    def entry(self, tau: Signature, sigma: Signature) -> Optional[int]:
        return self.exponents[self.index_of(tau)][self.index_of(sigma)]

    def to_json_entries(self) -> list[dict]:
        out = []
        for ti, tau in enumerate(self.signatures):
            for si, sigma in enumerate(self.signatures):
                e = self.exponents[ti][si]
                if e is not None:
                    out.append({"tau": tau.to_text(), "sigma": sigma.to_text(),
                                "exponent": e})
        return out

    def apply(self, vector: dict[int, Polynomial]) -> dict[int, Polynomial]:
        """One full row step: vector indexed by signature code -> A @ vector."""
        result: dict[int, Polynomial] = {}
        for ti, tau in enumerate(self.signatures):
            acc = Polynomial.zero(EXACT)
            for si, sigma in enumerate(self.signatures):
                e = self.exponents[ti][si]
                src = vector.get(sigma.code)
                if e is None or src is None:
                    continue
                shifted = src
                for _ in range(e):
                    shifted = poly_scale_shift_add(Polynomial.zero(EXACT), shifted, True)
                acc = poly_scale_shift_add(acc, shifted, False)
            if not acc.is_zero():
                result[tau.code] = acc
        return result


def build_transfer_matrix(m: int, cyclic: bool = False) -> TransferMatrix:
    count = count_signatures(m, "cyclic" if cyclic else "plain")
    if count > MATRIX_GUARD:
        raise GuardExceeded(
            f"{count} signatures at width {m} exceed the materialization "
            f"guard of {MATRIX_GUARD}")
    sigs = tuple(enumerate_signatures(m, cyclic))
    rows = []
    for tau in sigs:
        occ = occupied_count(tau)
        rows.append(tuple(occ if compatible(sigma, tau, cyclic) else None
                          for sigma in sigs))
    return TransferMatrix(m, cyclic, sigs, tuple(rows))


@dataclass(frozen=True)
class KinkedState:
    """Mixed-row frontier during a sweep.

    `column` (1-indexed) is the next cell of the current row to fill.  For
    grid and cylinder the window holds current-row cells at positions below
    `column` and previous-row cells at and above it.  The king window has one
    extra cell: positions 1..column-1 are the current row, position `column`
    remembers the previous row's cell at column-1 (the north-west neighbor of
    the cell about to be placed), and the rest is the previous row.  A
    completed row has column == 1 again.
    """

    family: str
    width: int
    column: int
    window: tuple[CellState, ...]

    def __post_init__(self) -> None:
        if self.family not in FAMILIES_WITH_KERNEL:
            raise ValueError(f"no vertex kernel for family {self.family!r}")
        expected = self.width + 1 if self.family == "king" else self.width
        if len(self.window) != expected:
            raise ValueError(
                f"window length {len(self.window)} != {expected} for "
                f"{self.family} width {self.width}")
        if not 1 <= self.column <= self.width:
            raise ValueError(f"column {self.column} out of range")

    @classmethod
    def fresh_row(cls, family: str, previous_row: Signature) -> "KinkedState":
        """State at the start of a new row below `previous_row`."""
        cells = previous_row.cells
        if family == "king":
            # the remembered north-west slot starts as a virtual boundary
            # cell that imposes no constraints
            return cls(family, previous_row.width, 1, (_COV,) + cells)
        return cls(family, previous_row.width, 1, cells)

    @property
    def first_cell_pending(self) -> bool:
        """Cylinder bookkeeping: is the current row's column-1 cell still
        Uncovered (i.e. waiting for the wrap-around placement or a later
        row)?  Derived from the window rather than stored."""
        return self.column >= 2 and self.window[0] is _UNC

    def completed_row(self) -> Signature:
        if self.column != 1:
            raise ValueError("row is not complete")
        cells = self.window[1:] if self.family == "king" else self.window
        return Signature.from_cells(cells)


def extend(state: KinkedState, occupy: bool) -> Optional[KinkedState]:
    """Fill the next cell of the current row; None when the move is illegal.

    The only illegal move is an unoccupied placement while a previous-row
    cell that leaves the window this step is still Uncovered: that cell's
    last potential dominator was the vertex being placed.  An occupied
    placement upgrades every Uncovered neighbor that stays in the window to
    Covered; an unoccupied new cell is Covered exactly when one of its
    already-known neighbors is occupied.
    """
    if state.family == "king":
        return _extend_king(state, occupy)
    return _extend_path_row(state, occupy)


def _extend_path_row(state: KinkedState, occupy: bool) -> Optional[KinkedState]:
    m = state.width
    c = state.column
    w = list(state.window)
    wrap = state.family == "cylinder" and c == m and m >= 2
    above = w[c - 1]
    if occupy:
        if c >= 2 and w[c - 2] is _UNC:
            w[c - 2] = _COV
        if wrap and w[0] is _UNC:
            w[0] = _COV
        new = _OCC
    else:
        if above is _UNC:
            return None  # the departing cell above can no longer be reached
        covered = above is _OCC or (c >= 2 and w[c - 2] is _OCC) \
            or (wrap and w[0] is _OCC)
        new = _COV if covered else _UNC
    w[c - 1] = new
    return KinkedState(state.family, m, c + 1 if c < m else 1, tuple(w))


def _extend_king(state: KinkedState, occupy: bool) -> Optional[KinkedState]:
    m = state.width
    c = state.column
    w = list(state.window)
    # window is 1-indexed conceptually; w[c-1] is the remembered north-west
    # cell, w[c] the cell straight above, w[c+1] its right neighbor
    north_west = w[c - 1]
    north = w[c]
    left = w[c - 2] if c >= 2 else None
    north_east = w[c + 1] if c <= m - 1 else None
    if occupy:
        if left is _UNC:
            w[c - 2] = _COV
        if north is _UNC:
            w[c] = _COV
        if north_east is _UNC:
            w[c + 1] = _COV
        new = _OCC
    else:
        if north_west is _UNC:
            return None
        if c == m and north is _UNC:
            return None  # the whole previous row leaves the window now
        covered = any(x is _OCC for x in (left, north_west, north, north_east))
        new = _COV if covered else _UNC
    if c < m:
        w[c - 1] = new
        return KinkedState(state.family, m, c + 1, tuple(w))
    row = w[: m - 1] + [new]
    return KinkedState(state.family, m, 1, (_COV, *row))


def sweep_row(family: str, vector: dict[int, Polynomial], m: int) -> dict[int, Polynomial]:
    """Advance every configuration by one full row via repeated extend.

    `vector` maps full-row signature codes to polynomials; the result is the
    same kind of map for the next row.  This is the transparent reference
    path; the production engine computes the identical map with compiled
    tables.
    """
    states: dict[KinkedState, Polynomial] = {
        KinkedState.fresh_row(family, Signature(m, code)): poly
        for code, poly in vector.items()
    }
    for _ in range(m):
        nxt: dict[KinkedState, Polynomial] = {}
        for state, poly in states.items():
            for occupy in (False, True):
                succ = extend(state, occupy)
                if succ is None:
                    continue
                acc = nxt.get(succ, Polynomial.zero(poly.ring))
                nxt[succ] = poly_scale_shift_add(acc, poly, occupy)
        states = nxt
    return {s.completed_row().code: p for s, p in states.items()
            if not p.is_zero()}


def row_step_equivalence_check(m: int, cyclic: bool,
                               vector: dict[int, Polynomial]) -> bool:
    """Does one extend-sweep equal one multiplication by the explicit matrix?"""
    if count_signatures(m, "cyclic" if cyclic else "plain") > 10_000:
        raise GuardExceeded(f"width {m} too large for the equivalence check")
    family = "cylinder" if cyclic else "grid"
    swept = sweep_row(family, vector, m)
    matrix = build_transfer_matrix(m, cyclic)
    multiplied = matrix.apply(vector)
    if swept.keys() != multiplied.keys():
        return False
    return all(swept[k].trimmed() == multiplied[k].trimmed() for k in swept)
