from itertools import islice

import pytest

from domcount.engine import (
    DEFAULT_GUARDS,
    FAMILIES,
    GraphSpec,
    Guards,
    count_dominating,
    count_series,
    crt_domination_polynomial,
    domination_polynomial,
    gamma_series,
    iter_counts,
    load_checkpoint,
    mincount_series,
    polynomial_series,
    run_sweep,
    save_checkpoint,
    torus_polynomial,
    torus_polynomial_series,
)
from domcount.errors import GuardExceeded
from domcount.oracle import brute_force_polynomial
from domcount.rings import EXACT, Polynomial, Ring, eval_at_one, poly_add
from domcount.signatures import Signature, all_covered
from domcount.transfer import build_transfer_matrix


def named(result, m):
    return {Signature(m, code).to_text(): poly.coefficients
            for code, poly in result.items()}


def test_graph_spec_validation():
    assert GraphSpec("grid", 3, 7).cells == 21
    with pytest.raises(ValueError):
        GraphSpec("hex", 2, 2)
    with pytest.raises(ValueError):
        GraphSpec("grid", 0, 2)
    with pytest.raises(ValueError):
        GraphSpec("grid", 41, 2)
    with pytest.raises(ValueError):
        GraphSpec("grid", 2, 0)


def test_single_row_from_covered_start():
    out = run_sweep(GraphSpec("grid", 2, 1), all_covered(2))
    assert named(out, 2) == {"oo": (1,), "xc": (0, 1), "cx": (0, 1),
                             "xx": (0, 0, 1)}


def test_two_rows_width_one():
    out = run_sweep(GraphSpec("grid", 1, 2), all_covered(1))
    # states that still contain an uncovered cell drop out of the final sum
    assert named(out, 1) == {"c": (0, 1), "x": (0, 1, 1)}
    assert poly_add(out[1], out[2]).coefficients == (0, 2, 1)


def test_one_cylinder_row_equals_a_matrix_column():
    start = all_covered(3)
    out = run_sweep(GraphSpec("cylinder", 3, 1), start)
    mat = build_transfer_matrix(3, cyclic=True)
    for tau in mat.signatures:
        e = mat.entry(tau, start)
        if e is None:
            assert tau.code not in out
        else:
            assert out[tau.code] == Polynomial.monomial(e)


def test_one_king_row_is_a_complete_graph():
    out = run_sweep(GraphSpec("king", 2, 1), all_covered(2))
    assert named(out, 2) == {"oo": (1,), "xc": (0, 1), "cx": (0, 1),
                             "xx": (0, 0, 1)}


def test_run_sweep_rejects_bad_starts():
    with pytest.raises(ValueError):
        run_sweep(GraphSpec("torus", 2, 2), all_covered(2))
    with pytest.raises(ValueError):
        run_sweep(GraphSpec("grid", 2, 1), all_covered(3))
    with pytest.raises(ValueError):
        run_sweep(GraphSpec("grid", 2, 1), Signature.from_text("xo"))
    with pytest.raises(ValueError):
        # valid on a strip but not around the wrap
        run_sweep(GraphSpec("cylinder", 3, 1), Signature.from_text("xco"))


def test_sweep_degrees_never_exceed_placed_vertices():
    for rows in (1, 2, 3):
        out = run_sweep(GraphSpec("grid", 3, rows), all_covered(3))
        assert all(p.degree() <= 3 * rows for p in out.values())


def test_known_polynomials():
    assert domination_polynomial(GraphSpec("grid", 2, 2)).coefficients == \
        (0, 0, 6, 4, 1)
    assert domination_polynomial(GraphSpec("cylinder", 3, 3)).coefficients == \
        (0, 0, 0, 34, 99, 120, 84, 36, 9, 1)
    assert domination_polynomial(GraphSpec("king", 2, 2)).coefficients == \
        (0, 4, 6, 4, 1)


def test_grid_4x4_lowest_term_and_total():
    poly = domination_polynomial(GraphSpec("grid", 4, 4))
    assert poly.min_degree() == 4
    assert poly.coefficient(4) == 2
    assert eval_at_one(poly) == 28661


def test_torus_polynomials():
    assert torus_polynomial(3, 3).coefficients == \
        (0, 0, 0, 48, 117, 126, 84, 36, 9, 1)
    assert torus_polynomial(2, 2) == domination_polynomial(GraphSpec("grid", 2, 2))
    poly = torus_polynomial(4, 4)
    assert poly.min_degree() == 4
    assert poly.coefficient(4) == 40


def test_known_counts():
    assert count_dominating(GraphSpec("grid", 1, 1)) == 1
    assert count_dominating(GraphSpec("grid", 3, 3)) == 291
    assert count_dominating(GraphSpec("grid", 6, 6)) == 16031828359


@pytest.mark.parametrize("family", FAMILIES)
def test_series_matches_the_oracle_prefix(family):
    if family == "torus":
        series = torus_polynomial_series(3, 4)
    else:
        series = polynomial_series(family, 3, 4)
    for n, poly in enumerate(series, start=1):
        assert poly == brute_force_polynomial(GraphSpec(family, 3, n))


@pytest.mark.parametrize("family", ("grid", "torus", "king"))
def test_transpose_symmetry(family):
    assert domination_polynomial(GraphSpec(family, 5, 2)) == \
        domination_polynomial(GraphSpec(family, 2, 5))


def test_short_cylinders_are_tori():
    # a cylinder one or two rows long gains nothing from the open direction
    for m, n in ((4, 1), (5, 2)):
        cyl = domination_polynomial(GraphSpec("cylinder", m, n))
        assert cyl == domination_polynomial(GraphSpec("torus", m, n))
        assert cyl == brute_force_polynomial(GraphSpec("cylinder", m, n))


@pytest.mark.parametrize("spec", [
    GraphSpec("grid", 4, 5),
    GraphSpec("cylinder", 4, 4),
    GraphSpec("torus", 3, 4),
    GraphSpec("king", 3, 5),
])
def test_count_mode_agrees_with_polynomial_mode(spec):
    assert count_dominating(spec) == eval_at_one(domination_polynomial(spec))


@pytest.mark.parametrize("spec", [
    GraphSpec("grid", 4, 5),
    GraphSpec("torus", 3, 3),
    GraphSpec("king", 3, 4),
])
def test_mod_p_run_equals_reduced_exact_run(spec):
    p = 65521
    exact = domination_polynomial(spec)
    residue = domination_polynomial(spec, ring=Ring(p))
    assert residue.ring.modulus == p
    assert residue.coefficients == tuple(c % p for c in exact.coefficients)


def test_torus_scheduling_does_not_change_the_result():
    base = torus_polynomial(4, 5)
    assert torus_polynomial(4, 5, workers=2) == base
    assert torus_polynomial(4, 5, orbit_grouping=False) == base
    assert torus_polynomial(5, 4) == base


def test_stat_series_agree_with_the_full_polynomial():
    for family in FAMILIES:
        if family == "torus":
            polys = torus_polynomial_series(3, 4)
        else:
            polys = polynomial_series(family, 3, 4)
        gammas = gamma_series(family, 3, 4)
        mincounts = mincount_series(family, 3, 4)
        totals = count_series(family, 3, 4)
        for i, poly in enumerate(polys):
            md = poly.min_degree()
            assert gammas[i] == md
            assert mincounts[i] == (md, poly.coefficient(md))
            assert totals[i] == eval_at_one(poly)


def test_iter_counts_streams_the_count_series():
    assert list(islice(iter_counts("cylinder", 3), 6)) == \
        count_series("cylinder", 3, 6)
    with pytest.raises(ValueError):
        next(iter_counts("torus", 3))


def test_guards_trip_before_big_allocations():
    with pytest.raises(GuardExceeded):
        domination_polynomial(GraphSpec("grid", 12, 12),
                              guards=Guards(max_states=100))
    with pytest.raises(GuardExceeded):
        domination_polynomial(GraphSpec("king", 8, 8),
                              guards=Guards(max_memory_bytes=1000))
    assert DEFAULT_GUARDS.max_states > 10**6


def test_crt_pipeline_reconstructs_the_exact_polynomial():
    spec = GraphSpec("grid", 5, 5)
    poly, moduli = crt_domination_polynomial(spec)
    assert poly == domination_polynomial(spec)
    assert moduli.product() >= 1 << (spec.cells + 1)
    assert all(p < 1 << 16 for p in moduli.primes)
    poly2, _ = crt_domination_polynomial(spec, workers=2)
    assert poly2 == poly


def test_crt_respects_the_bit_width():
    spec = GraphSpec("cylinder", 3, 4)
    poly, moduli = crt_domination_polynomial(spec, b=11)
    assert poly == domination_polynomial(spec)
    assert all(p < 1 << 11 for p in moduli.primes)


def test_checkpoints_record_every_row(tmp_path):
    spec = GraphSpec("grid", 3, 4)
    direct = run_sweep(spec, all_covered(3))
    checkpointed = run_sweep(spec, all_covered(3), checkpoint_dir=tmp_path)
    assert checkpointed == direct
    files = sorted(f.name for f in tmp_path.glob("*.chk"))
    assert files == [f"row_{r:04d}.chk" for r in range(1, 5)]
    header, items = load_checkpoint(tmp_path / "row_0004.chk")
    assert header == {"version": 1, "family": "grid", "m": 3, "n": 4,
                      "row": 4, "ring": "exact"}
    rebuilt = {code: Polynomial.from_coefficients(coeffs).trimmed()
               for code, coeffs in items}
    assert rebuilt == direct


def test_checkpoint_files_round_trip_big_coefficients(tmp_path):
    header = {"version": 1, "label": "scratch"}
    items = [(5, (0, 1, 12345678901234567890123456789)), (9, (3,))]
    path = tmp_path / "snap.chk"
    save_checkpoint(path, header, items)
    got_header, got_items = load_checkpoint(path)
    assert got_header == header
    assert got_items == items


def test_progress_reports_once_per_row():
    calls = []
    polynomial_series("grid", 2, 3, progress=lambda r, n: calls.append((r, n)))
    assert calls == [(1, 3), (2, 3), (3, 3)]
