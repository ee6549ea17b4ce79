"""Closed-form spectra: frozen examples, merge algebra, numeric cross-checks.

Expected multiplicities below were derived by enumerating the eigenvalue
families by hand and are confirmed against the quantum-graph eigensolver
(small levels here; the deeper oracle runs live in the acceptance suite).
"""

import math

import pytest

from laakso import (
    JSequence,
    MERGED,
    PER_FAMILY,
    PlateConfig,
    Potential,
    SpectrumQuery,
    build_graph,
    cluster,
    discretize,
    free_spectrum,
    interior_shape_counts,
    merge_lines,
    plates_spectrum,
    shape_census,
    solve_lowest,
    square_well_spectrum,
)

PI2 = math.pi**2
SEQ2 = JSequence((2,), periodic=True)
SEQ3 = JSequence((3,), periodic=True)
SEQ23 = JSequence((2, 3), periodic=True)


def as_pairs(lines):
    return [(line.lam, line.multiplicity) for line in lines]


# ---------------------------------------------------------------------------
# free Laplacian

def test_free_low_lines_j2():
    lines = free_spectrum(SEQ2, SpectrumQuery(10.0))
    assert as_pairs(lines) == [(0.0, 1), (pytest.approx(PI2), 3)]


def test_free_only_zero_below_pi_squared():
    lines = free_spectrum(SEQ23, SpectrumQuery(1.0))
    assert as_pairs(lines) == [(0.0, 1)]


def test_free_j3_loop_line():
    lines = free_spectrum(SEQ3, SpectrumQuery(100.0))
    by_val = {round(l.lam, 6): l for l in lines}
    line = by_val[round(9 * PI2, 6)]
    # level-1 loop family contributes multiplicity 2^0 (3-2) I_0 = 1
    assert any(s.family == "loop" and s.n == 1 and s.k == 1 for s in line.sources)


def test_free_merged_multiplicities_j2():
    lines = free_spectrum(SEQ2, SpectrumQuery(300.0))
    assert [(round(l.lam / PI2), l.multiplicity) for l in lines] == [
        (0, 1), (1, 3), (4, 6), (9, 3), (16, 18), (25, 3)]


def test_free_multiplicities_nonnegative_sweep():
    for seq in (SEQ2, SEQ3, SEQ23, JSequence((5, 2), periodic=True)):
        for line in free_spectrum(seq, SpectrumQuery(5e4, PER_FAMILY)):
            assert line.multiplicity >= 1


def test_free_matches_eigensolve_level3():
    # every analytic line of the j=2 space below 150 is resolved by F_3
    seq, lam_max = SEQ2, 150.0
    lines = free_spectrum(seq, SpectrumQuery(lam_max))
    lines = [l for l in lines if all(s.n <= 3 for s in l.sources)]
    op = discretize(build_graph(seq, 3), 12, Potential("free"))
    count = sum(l.multiplicity for l in lines)
    result = solve_lowest(op, count + 3)
    clusters = cluster(result, 1e-2)
    for lam, mult in as_pairs(lines):
        matched = [c for c in clusters if abs(c[0] - lam) <= max(0.01 * lam, 1e-6)]
        assert matched, f"no numeric cluster near {lam}"
        assert sum(c[1] for c in matched) == mult


# ---------------------------------------------------------------------------
# square well

def test_well_table_lines_alternating():
    lines = square_well_spectrum(SEQ23, SpectrumQuery(160.0))
    assert [(round(l.lam, 2), l.multiplicity) for l in lines] == [
        (39.48, 1), (88.83, 1), (157.91, 3)]


def test_well_expected_column_exact():
    lines = square_well_spectrum(SEQ23, SpectrumQuery(700.0))
    assert [l.lam / PI2 for l in lines] == pytest.approx([4, 9, 16, 36, 64])
    assert [l.multiplicity for l in lines] == [1, 1, 3, 10, 3]


def test_well_interval_family_k2_included():
    # 4 pi^2 k^2 for k = 1, 2 both land below 160
    lines = square_well_spectrum(SEQ23, SpectrumQuery(160.0, PER_FAMILY))
    level0 = [(l.sources[0].k, l.lam) for l in lines if l.sources[0].family == "level0"]
    assert (1, pytest.approx(4 * PI2)) in level0
    assert (2, pytest.approx(16 * PI2)) in level0


def test_well_wall_vee_has_level1_distance_rate():
    # d_1 = 1/4 for j_1 = 2 gives the 16 pi^2 k^2 family with multiplicity 2
    lines = square_well_spectrum(SEQ23, SpectrumQuery(160.0, PER_FAMILY))
    wall = [l for l in lines if l.sources[0].family == "wall_vee"]
    assert wall and wall[0].lam == pytest.approx(16 * PI2)
    assert wall[0].multiplicity == 2


def test_well_j3_level1_loop():
    lines = square_well_spectrum(SEQ3, SpectrumQuery(100.0, PER_FAMILY))
    fams = {l.sources[0].family for l in lines}
    assert "loop_level1" in fams       # j_1 = 3 activates the interior loop
    loop1 = [l for l in lines if l.sources[0].family == "loop_level1"][0]
    assert loop1.lam == pytest.approx(9 * PI2)
    assert loop1.multiplicity == 1


def test_well_zero_multiplicity_suppressed():
    for line in square_well_spectrum(SEQ23, SpectrumQuery(2000.0, PER_FAMILY)):
        assert line.multiplicity >= 1


def test_well_matches_eigensolve_level4():
    lines = square_well_spectrum(SEQ23, SpectrumQuery(700.0))
    op = discretize(build_graph(SEQ23, 4), 8, Potential("square_well"))
    result = solve_lowest(op, 20)
    clusters = cluster(result, 1.2e-2)
    for lam, mult in as_pairs(lines):
        matched = [c for c in clusters if abs(c[0] - lam) <= 0.05 * lam]
        assert matched, f"no numeric cluster near {lam}"
        assert sum(c[1] for c in matched) == mult


# ---------------------------------------------------------------------------
# interior shape counts

def test_interior_counts_level2_alternating():
    assert interior_shape_counts(SEQ23, 2) == (1, 0, 0)


def test_interior_counts_wall_on_center():
    # wall exactly on a cross center: intact crosses drop by m 2^(n-1)
    # per wall and 2^(n-1) half-crosses appear
    assert interior_shape_counts(JSequence((4,), periodic=True), 2) == (1, 2, 8)


def test_interior_counts_no_loops_at_binary_level():
    full, half, loops = interior_shape_counts(SEQ2, 4)
    assert loops == 0


@pytest.mark.parametrize("values,n", [
    ((2,), 3), ((3,), 2), ((2, 3), 3), ((3, 2), 3), ((5,), 2), ((2, 3), 5),
])
def test_interior_counts_match_region_census(values, n):
    seq = JSequence(values, periodic=True)
    census = shape_census(build_graph(seq, n), region="well")
    full, half, loops = interior_shape_counts(seq, n)
    assert census.split["cross"].interior == full
    assert census.half_crosses_interior == half
    assert census.split["loop"].interior == loops


# ---------------------------------------------------------------------------
# plates

def test_plates_lowest_line_natural_position():
    cfg = PlateConfig(4, 1, 0.25)
    lines = plates_spectrum(cfg, SpectrumQuery(50.0))
    assert [(round(l.lam, 2), l.multiplicity) for l in lines] == [
        (39.48, 4), (39.48, 1)]   # exterior (level0 + vee) and interior lines


def test_plates_interior_scaling_invariant():
    # interior eigenvalues times (2 x0)^2 do not depend on x0
    q = SpectrumQuery(4000.0, PER_FAMILY)
    for x0 in (0.2, 0.3, 0.4):
        lines = plates_spectrum(PlateConfig(4, 1, x0), q)
        ks = sorted(l.lam * (2 * x0) ** 2 for l in lines
                    if l.sources[0].family == "interior_level0")
        assert ks == pytest.approx([PI2 * k * k for k in range(1, len(ks) + 1)])


def test_plates_match_eigensolve():
    cfg = PlateConfig(5, 2, 0.35)    # stretched interior
    seq = JSequence((5,), periodic=True)
    lines = plates_spectrum(cfg, SpectrumQuery(500.0))
    op = discretize(build_graph(seq, 3, plates=cfg), 8, Potential("free"))
    count = sum(l.multiplicity for l in lines)
    result = solve_lowest(op, count + 3)
    clusters = cluster(result, 1e-2)
    for lam, mult in as_pairs(lines):
        matched = [c for c in clusters if abs(c[0] - lam) <= 0.02 * lam]
        assert matched, f"no numeric cluster near {lam}"
        assert sum(c[1] for c in matched) == mult


def test_plates_structural_match_with_free_at_natural_position():
    # level-1 interior loop line [k pi (Z+1)/(2 x0)]^2 = k^2 pi^2 I_1^2
    cfg = PlateConfig(4, 1, 0.25)
    lines = plates_spectrum(cfg, SpectrumQuery(2000.0, PER_FAMILY))
    il = sorted(l.lam for l in lines if l.sources[0].family == "interior_loop_level1")
    assert il == pytest.approx([PI2 * 16 * k * k for k in (1, 2, 3)])


# ---------------------------------------------------------------------------
# merge algebra

def test_merge_additivity_and_idempotence():
    lines = square_well_spectrum(SEQ23, SpectrumQuery(700.0, PER_FAMILY))
    merged = merge_lines(lines)
    assert merge_lines(merged) == merged
    assert sum(l.multiplicity for l in merged) == sum(l.multiplicity for l in lines)
    by_key = {}
    for line in lines:
        by_key[line.key] = by_key.get(line.key, 0) + line.multiplicity
    assert {l.key: l.multiplicity for l in merged} == by_key


def test_merge_empty():
    assert merge_lines([]) == []


def test_merge_never_compares_floats():
    # two numerically identical lines with different exact keys stay apart
    lines = plates_spectrum(PlateConfig(4, 1, 0.25), SpectrumQuery(50.0))
    assert len(lines) == 2
    assert lines[0].lam == pytest.approx(lines[1].lam)
    assert lines[0].key != lines[1].key


def test_query_validation():
    with pytest.raises(ValueError):
        SpectrumQuery(0.0)
    with pytest.raises(ValueError):
        SpectrumQuery(10.0, "sorted")
