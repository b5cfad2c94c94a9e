"""Command-line interface: polynomials, tables, growth reports, sequence
export, and self-verification.

Exit codes: 0 success, 2 resource guard exceeded (or a run that refused to
converge), 3 verification mismatch, 4 bad arguments.  All data output goes
to stdout and is byte-deterministic for a fixed request; progress and
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from math import ceil
from typing import Callable, Optional, Sequence

from . import analysis, engine
from .errors import GuardExceeded, VerificationError
from .oracle import brute_force_polynomial
from .rings import EXACT, Polynomial, Ring
from .signatures import count_signatures, dihedral_orbits

EXIT_OK = 0
EXIT_GUARD = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 4

_PROGRESS_CELLS = 400  # emit per-row progress past this instance size


@dataclass(frozen=True)
class RunRequest:
    """A parsed, validated invocation."""

    command: str
    family: Optional[str] = None
    m: Optional[int] = None
    n: Optional[int] = None
    m_range: Optional[tuple[int, int]] = None
    n_range: Optional[tuple[int, int]] = None
    modulus: Optional[int] = None
    crt: bool = False
    bits: int = 16
    fmt: str = "text"
    workers: int = 0
    max_states: int = engine.DEFAULT_GUARDS.max_states
    max_memory: int = engine.DEFAULT_GUARDS.max_memory_bytes
    checkpoint_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.modulus is not None and self.crt:
            raise ValueError("pick one of --mod and --crt")
        if not 8 <= self.bits <= 31:
            raise ValueError("--bits must be in 8..31")
        for rng in (self.m_range, self.n_range):
            if rng is not None and rng[0] > rng[1]:
                raise ValueError("empty range")

    @property
    def guards(self) -> engine.Guards:
        return engine.Guards(self.max_states, self.max_memory)

    @property
    def effective_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)

    @property
    def ring(self) -> Ring:
        return EXACT if self.modulus is None else Ring(self.modulus)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve that
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return (int(lo), int(hi)) if hi else (int(lo), int(lo))
    except ValueError:
        raise ValueError(f"bad range {text!r}, expected LO:HI") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="domcount",
                     description="Exact domination polynomial counting on "
                                 "grid, cylinder, torus, and king lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ranges=False):
        p.add_argument("--family", required=True,
                       choices=("grid", "cylinder", "torus", "king"))
        if ranges:
            p.add_argument("--m-range", default=None)
            p.add_argument("--n-range", default=None)
        else:
            p.add_argument("-m", type=int, required=True)
            p.add_argument("-n", type=int, required=True)
        p.add_argument("--workers", type=int, default=0,
                       help="0 = use available parallelism")
        p.add_argument("--max-states", type=int,
                       default=engine.DEFAULT_GUARDS.max_states)
        p.add_argument("--max-mem", type=int,
                       default=engine.DEFAULT_GUARDS.max_memory_bytes,
                       help="bytes; DOMCOUNT_MAX_MEM overrides")

    p = sub.add_parser("poly", help="full domination polynomial")
    common(p)
    ring = p.add_mutually_exclusive_group()
    ring.add_argument("--mod", type=int, default=None, metavar="P")
    ring.add_argument("--crt", action="store_true")
    p.add_argument("--bits", type=int, default=16)
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.add_argument("--checkpoint-dir", default=None)

    p = sub.add_parser("count", help="number of dominating sets")
    common(p)

    p = sub.add_parser("table", help="gamma / ngamma / total over ranges")
    p.add_argument("kind", choices=("gamma", "ngamma", "total"))
    common(p, ranges=True)
    p.add_argument("--format", default="csv", choices=("csv", "json"))

    p = sub.add_parser("growth", help="growth constant estimate")
    p.add_argument("--family", required=True,
                   choices=("grid", "cylinder", "torus", "king"))
    p.add_argument("--m-range", default="3:12")
    p.add_argument("--digits", type=int, default=13)
    p.add_argument("--n-cap", type=int, default=400)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--format", default="json", choices=("json", "text"))

    p = sub.add_parser("oeis", help="emit a registered sequence as b-file lines")
    p.add_argument("id")
    p.add_argument("--limit", type=int, default=8)

    p = sub.add_parser("verify", help="self-check against oracle and tables")
    p.add_argument("--max-cells", type=int, default=16)
    return parser


def _request_from_args(args: argparse.Namespace) -> RunRequest:
    max_memory = getattr(args, "max_mem", engine.DEFAULT_GUARDS.max_memory_bytes)
    env = os.environ.get("DOMCOUNT_MAX_MEM")
    if env is not None:
        max_memory = int(env)
    return RunRequest(
        command=args.command,
        family=getattr(args, "family", None),
        m=getattr(args, "m", None),
        n=getattr(args, "n", None),
        m_range=_parse_range(args.m_range) if getattr(args, "m_range", None) else None,
        n_range=_parse_range(args.n_range) if getattr(args, "n_range", None) else None,
        modulus=getattr(args, "mod", None),
        crt=getattr(args, "crt", False),
        bits=getattr(args, "bits", 16),
        fmt=getattr(args, "format", "text"),
        workers=getattr(args, "workers", 0),
        max_states=getattr(args, "max_states", engine.DEFAULT_GUARDS.max_states),
        max_memory=max_memory,
        checkpoint_dir=getattr(args, "checkpoint_dir", None),
    )


# ------------------------------------------------------------------ output

def _render_poly(poly: Polynomial, fmt: str) -> str:
    poly = poly.trimmed()
    if fmt == "text":
        return poly.to_text() + "\n"
    md = poly.min_degree()
    md = 0 if md is None else md
    coeffs = list(poly.coefficients)[md:]
    if fmt == "json":
        return json.dumps({"minDegree": md,
                           "coefficients": [str(c) for c in coeffs]}) + "\n"
    lines = ["degree,coefficient"]
    lines += [f"{md + i},{c}" for i, c in enumerate(coeffs)]
    return "\n".join(lines) + "\n"


def _progress_printer(cells: int) -> Optional[Callable[[int, int], None]]:
    if cells < _PROGRESS_CELLS:
        return None
    return lambda r, n: print(f"row {r}/{n}", file=sys.stderr, flush=True)


def cmd_poly(req: RunRequest) -> int:
    spec = engine.GraphSpec(req.family, req.m, req.n)
    if req.checkpoint_dir is not None:
        if req.family == "torus":
            raise ValueError("checkpointing applies to open-row sweeps, "
                             "not the torus trace loop")
        from .signatures import Signature, all_covered, uncovered_count
        state = engine.run_sweep(spec, all_covered(spec.m), ring=req.ring,
                                 guards=req.guards,
                                 checkpoint_dir=req.checkpoint_dir)
        acc = Polynomial.zero(req.ring)
        from .rings import poly_add
        for code, p in state.items():
            if uncovered_count(Signature(spec.m, code)) == 0:
                acc = poly_add(acc, p)
        poly = acc
    elif req.crt:
        poly, _ = engine.crt_domination_polynomial(
            spec, b=req.bits, workers=req.effective_workers, guards=req.guards)
    else:
        poly = engine.domination_polynomial(
            spec, ring=req.ring, guards=req.guards,
            workers=req.effective_workers,
            progress=_progress_printer(spec.cells))
    sys.stdout.write(_render_poly(poly, req.fmt))
    return EXIT_OK


def cmd_count(req: RunRequest) -> int:
    spec = engine.GraphSpec(req.family, req.m, req.n)
    sys.stdout.write(f"{engine.count_dominating(spec, guards=req.guards)}\n")
    return EXIT_OK


def _table_values(kind: str, family: str, m: int, n_max: int,
                  guards: engine.Guards) -> list:
    if kind == "gamma":
        return engine.gamma_series(family, m, n_max, guards=guards)
    if kind == "ngamma":
        return [cnt for _, cnt in
                engine.mincount_series(family, m, n_max, guards=guards)]
    return engine.count_series(family, m, n_max, guards=guards)


def cmd_table(req: RunRequest, kind: str) -> int:
    m_lo, m_hi = req.m_range or (1, 8)
    n_lo, n_hi = req.n_range or (1, 8)
    cols = {}
    for m in range(m_lo, m_hi + 1):
        cols[m] = _table_values(kind, req.family, m, n_hi, req.guards)[n_lo - 1:]
    ms = list(range(m_lo, m_hi + 1))
    ns = list(range(n_lo, n_hi + 1))
    if req.fmt == "json":
        rows = [[cols[m][i] if kind == "gamma" else str(cols[m][i]) for m in ms]
                for i in range(len(ns))]
        sys.stdout.write(json.dumps(
            {"kind": kind, "family": req.family, "m_values": ms,
             "n_values": ns, "rows": rows}) + "\n")
        return EXIT_OK
    lines = ["n/m," + ",".join(str(m) for m in ms)]
    for i, n in enumerate(ns):
        lines.append(f"{n}," + ",".join(str(cols[m][i]) for m in ms))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_growth(req: RunRequest, digits: int, n_cap: int) -> int:
    m_lo, m_hi = req.m_range
    est = analysis.estimate_growth(req.family, m_lo, m_hi,
                                   precision_digits=digits, n_cap=n_cap,
                                   workers=req.effective_workers,
                                   guards=req.guards)
    if req.fmt == "json":
        sys.stdout.write(json.dumps(est.to_json()) + "\n")
        return EXIT_OK
    import mpmath
    lines = [f"m={s.m} n_used={s.n_used} mu_m={mpmath.nstr(s.mu, 20)}"
             for s in est.samples]
    lines.append(f"mu = {mpmath.nstr(est.mu, 20)} (error ~ "
                 f"{mpmath.nstr(est.error, 5)})")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# ------------------------------------------------------------ OEIS registry

def _diag(kind: str, family: str):
    def gen(limit: int) -> list[int]:
        out = []
        for n in range(1, limit + 1):
            out.append(_table_values(kind, family, n, n,
                                     engine.DEFAULT_GUARDS)[-1])
        return out
    return gen


def _antidiag(kind: str, family: str):
    def gen(limit: int) -> list[int]:
        out = []
        d = 2
        while len(out) < limit:
            for m in range(1, d):
                if len(out) >= limit:
                    break
                out.append(_table_values(kind, family, m, d - m,
                                         engine.DEFAULT_GUARDS)[-1])
            d += 1
        return out
    return gen


def _king_gamma_antidiag(limit: int) -> list[int]:
    out = []
    d = 2
    while len(out) < limit:
        for m in range(1, d):
            if len(out) >= limit:
                break
            out.append(ceil(m / 3) * ceil((d - m) / 3))
        d += 1
    return out


# id -> (first index, generator, description)
OEIS_REGISTRY: dict[str, tuple[int, Callable[[int], list[int]], str]] = {
    "A001333": (1, lambda k: [count_signatures(m) for m in range(1, k + 1)],
                "signature counts a(m), m >= 1"),
    "A078057": (0, lambda k: [count_signatures(m) for m in range(0, k)],
                "signature counts a(m), m >= 0"),
    "A030270": (1, lambda k: [count_signatures(m, "reflection_reduced")
                              for m in range(1, k + 1)],
                "signatures up to reflection"),
    "A124696": (1, lambda k: [count_signatures(m, "cyclic")
                              for m in range(1, k + 1)],
                "cyclic signature counts"),
    "A208716": (1, lambda k: [len(dihedral_orbits(m)) for m in range(1, k + 1)],
                "cyclic signatures up to rotation and reflection"),
    "A104519": (1, _diag("gamma", "grid"), "gamma of the n x n grid"),
    "A094087": (1, _diag("gamma", "torus"), "gamma of the n x n torus"),
    "A075561": (1, _king_gamma_antidiag, "gamma of the m x n king lattice"),
    "A133515": (1, _diag("total", "grid"), "dominating sets of the n x n grid"),
    "A133791": (1, _diag("total", "king"), "dominating sets of the n x n king"),
    "A303334": (1, _diag("total", "torus"), "dominating sets of the n x n torus"),
    "A286914": (1, _diag("total", "cylinder"),
                "dominating sets of the n x n cylinder"),
    "A218354": (1, _antidiag("total", "grid"),
                "dominating sets of the m x n grid, antidiagonals"),
    "A218663": (1, _antidiag("total", "king"),
                "dominating sets of the m x n king, antidiagonals"),
    "A286514": (1, _antidiag("total", "cylinder"),
                "dominating sets of the m x n cylinder, antidiagonals"),
    "A347632": (1, _diag("ngamma", "grid"), "minimum dominating sets, n x n grid"),
    "A347554": (1, _diag("ngamma", "king"), "minimum dominating sets, n x n king"),
    "A347557": (1, _diag("ngamma", "torus"),
                "minimum dominating sets, n x n torus"),
    "A350820": (1, _antidiag("ngamma", "grid"),
                "minimum dominating sets, m x n grid, antidiagonals"),
    "A350815": (1, _antidiag("ngamma", "king"),
                "minimum dominating sets, m x n king, antidiagonals"),
}


def cmd_oeis(seq_id: str, limit: int) -> int:
    entry = OEIS_REGISTRY.get(seq_id)
    if entry is None:
        raise ValueError(f"unknown sequence id {seq_id!r}; known: "
                         + ", ".join(sorted(OEIS_REGISTRY)))
    offset, gen, _ = entry
    values = gen(limit)
    for i, v in enumerate(values, start=offset):
        sys.stdout.write(f"{i} {v}\n")
    return EXIT_OK


# ----------------------------------------------------------------- verify

def _load_fixture(name: str) -> dict:
    return json.loads(resources.files("domcount.data").joinpath(name).read_text())


def _fixture_poly(data: dict, family: str, n: int) -> Optional[tuple[int, list[int], list[str]]]:
    fix = data["polynomials"][family].get(str(n))
    if fix is None:
        return None
    coeffs = list(fix["coefficients"])
    md = fix["min_degree"]
    notes = []
    for e in data.get("errata", []):
        if e["family"] == family and e["n"] == n and md <= e["degree"] < md + len(coeffs):
            coeffs[e["degree"] - md] = e["corrected"]
            notes.append(f"known erratum at z^{e['degree']}: printed "
                         f"{e['printed']}, corrected {e['corrected']}")
    return md, coeffs, notes


def cmd_verify(max_cells: int) -> int:
    if max_cells > 24:
        raise ValueError("--max-cells is capped at 24")
    report = []
    failures = []

    def check(label: str, got, want, note: str = "") -> None:
        if got == want:
            suffix = f" ({note})" if note else ""
            report.append(f"ok {label}{suffix}")
        else:
            failures.append((label, got, want))
            report.append(f"FAIL {label}: got {got}, want {want}")

    for family in engine.FAMILIES:
        for m in range(1, max_cells + 1):
            for n in range(1, max_cells // m + 1):
                spec = engine.GraphSpec(family, m, n)
                got = engine.domination_polynomial(spec).trimmed()
                want = brute_force_polynomial(spec, cell_guard=max_cells).trimmed()
                if got.coefficients != want.coefficients:
                    diff = next(d for d in range(max(got.degree(), want.degree()) + 1)
                                if got.coefficient(d) != want.coefficient(d))
                    check(f"oracle {family} {m}x{n}",
                          f"z^{diff} coefficient {got.coefficient(diff)}",
                          f"{want.coefficient(diff)}")
                else:
                    check(f"oracle {family} {m}x{n}", True, True)

    appendix = _load_fixture("appendix_polynomials.json")
    for family in engine.FAMILIES:
        for n in range(1, 7):
            fix = _fixture_poly(appendix, family, n)
            if fix is None:
                continue
            md, coeffs, notes = fix
            got = engine.domination_polynomial(engine.GraphSpec(family, n, n)).trimmed()
            check(f"appendix {family} {n}x{n}",
                  (got.min_degree(), list(got.coefficients)[md:]),
                  (md, coeffs), "; ".join(notes))

    totals = _load_fixture("grid_totals.json")
    for n in range(1, 7):
        check(f"totals grid {n}x{n}",
              engine.count_dominating(engine.GraphSpec("grid", n, n)),
              totals[str(n)])

    gamma_rows = _load_fixture("cylinder_gamma.json")["rows"]
    for m in range(1, 9):
        series = engine.gamma_series("cylinder", m, 8)
        check(f"gamma cylinder column m={m}",
              series, [gamma_rows[n - 1][m - 1] for n in range(1, 9)])

    mindom = _load_fixture("mindom.json")
    merr = {(e["family"], e["n"]): e for e in mindom.get("errata", [])}
    for family in engine.FAMILIES:
        for n in range(2, 9):
            want = mindom[family].get(str(n))
            if want is None:
                continue
            note = ""
            if (family, n) in merr:
                e = merr[(family, n)]
                want = e["corrected"]
                note = (f"known erratum: table prints {e['printed']}, "
                        f"corrected {e['corrected']}")
            _, cnt = engine.mincount_series(family, n, n)[-1]
            check(f"ngamma {family} {n}x{n}", cnt, want, note)

    for line in report:
        sys.stdout.write(line + "\n")
    sys.stdout.write(f"{len(report) - len(failures)}/{len(report)} checks passed\n")
    if failures:
        label, got, want = failures[0]
        raise VerificationError(f"{label}: got {got}, want {want}")
    return EXIT_OK


# ------------------------------------------------------------------- main

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        req = _request_from_args(args)
        if req.command == "poly":
            return cmd_poly(req)
        if req.command == "count":
            return cmd_count(req)
        if req.command == "table":
            return cmd_table(req, args.kind)
        if req.command == "growth":
            return cmd_growth(req, args.digits, args.n_cap)
        if req.command == "oeis":
            return cmd_oeis(args.id, args.limit)
        return cmd_verify(args.max_cells)
    except GuardExceeded as exc:
        print(f"domcount: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except VerificationError as exc:
        print(f"domcount: verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"domcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"domcount: aborted: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
