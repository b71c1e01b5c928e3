"""Boundary matrices, cohomology dimensions, Euler-characteristic series."""

import random

import pytest
from fractions import Fraction

from chiralg.charges import (
    Potential,
    StructureConstants,
    chiral_de_rham,
    combine,
    default_torus_weights,
    lie_charge,
    potential_charge,
)
from chiralg.cohomology import (
    CohomologyError,
    boundary_matrix,
    chi_van,
    cohomology_dims,
    cohomology_dims_capped,
    cohomology_dims_torus,
    euler_series,
)
from chiralg.fock import BiGrade, Side, TorusWeights, enumerate_basis, make_space
from chiralg.linalg import intersection_dim, kernel_basis, rank

THETA1 = make_space(Side.THETA, 1)
OMEGA1 = make_space(Side.OMEGA, 1)
THETA3 = make_space(Side.THETA, 3)


def test_boundary_matrix_multiplication_pattern():
    """iota_df for f = z^3 at weight 0 is multiplication by 3 x0^2."""
    charge = potential_charge(Potential.single_variable(3), Side.THETA)
    block = boundary_matrix(charge, THETA1, BiGrade(0, -1), x0_cap=3)
    assert block.shape == (4, 4)
    assert {m.text() for m in block.domain} == {
        "psi_0", "x_0 psi_0", "x_0 x_0 psi_0", "x_0 x_0 x_0 psi_0"
    }
    # entries: x0^k psi_0 -> 3 x0^{k+2}, truncated by the cap
    entries = {}
    dom = {m.x0_degree(): c for c, m in enumerate(block.domain)}
    cod = {m.x0_degree(): r for r, m in enumerate(block.codomain)}
    for k in (0, 1):
        entries[(cod[k + 2], dom[k])] = Fraction(3)
    assert block.entries == entries


def test_boundary_matrix_empty_domain():
    charge = potential_charge(Potential.single_variable(2), Side.THETA)
    block = boundary_matrix(charge, THETA1, BiGrade(0, 5), x0_cap=2)
    assert block.domain == [] and block.entries == {}


def test_boundary_matrix_block_dims_match_basis():
    charge = chiral_de_rham(1)
    for k in (-1, 0, 1):
        block = boundary_matrix(charge, OMEGA1, BiGrade(1, k), x0_cap=1)
        assert len(block.domain) == len(
            enumerate_basis(OMEGA1, 1, degree=k, x0_cap=1)
        )
        assert len(block.codomain) == len(
            enumerate_basis(OMEGA1, 1, degree=k + 1, x0_cap=1)
        )


def test_consecutive_boundary_matrices_compose_to_zero():
    f = Potential.single_variable(3)
    charge = potential_charge(f, Side.THETA)
    tw = default_torus_weights(f)
    for q in (0, 1, 2):
        for t in (-1, 0, 1):
            for k in (-2, -1, 0):
                first = boundary_matrix(
                    charge, THETA1, BiGrade(q, k, t), torus_weights=tw
                )
                second = boundary_matrix(
                    charge, THETA1, BiGrade(q, k + 1, t), torus_weights=tw
                )
                # sparse product second * first
                prod = {}
                for (r1, c1), v1 in first.entries.items():
                    for (r2, c2), v2 in second.entries.items():
                        if c2 == r1:
                            key = (r2, c1)
                            prod[key] = prod.get(key, Fraction(0)) + v1 * v2
                assert all(v == 0 for v in prod.values())


def test_linalg_rank_shuffle_invariance():
    rng = random.Random(3)
    cols = [
        {"a": Fraction(1), "b": Fraction(2)},
        {"b": Fraction(1)},
        {"a": Fraction(2), "b": Fraction(5)},
        {},
    ]
    base = rank(cols)
    assert base == 2
    for _ in range(5):
        shuffled = cols[:]
        rng.shuffle(shuffled)
        assert rank(shuffled) == base
    kern = kernel_basis(cols)
    assert len(kern) == 2
    assert intersection_dim(cols[:2], cols[2:3]) == 1


def test_jacobian_ring_dims_small():
    for d in (1, 2):
        charge = potential_charge(Potential.single_variable(d + 1), Side.THETA)
        table = cohomology_dims(charge, THETA1, 0, x0_cap=2 * d)
        assert table.dims == {(0, 0): d}
        assert table.stabilization[0]


def test_chiral_de_rham_weight0_and_1():
    table = cohomology_dims(chiral_de_rham(1), OMEGA1, 1, x0_cap=2)
    assert table.dims == {(0, 0): 1}
    assert all(table.stabilization.values())


def test_twisted_de_rham_weight0():
    for d in (1, 2):
        charge = combine(
            chiral_de_rham(1),
            potential_charge(Potential.single_variable(d + 1), Side.OMEGA),
        )
        table = cohomology_dims(charge, OMEGA1, 0, x0_cap=2 * d)
        assert table.dims == {(0, 1): d}
        assert table.euler(0) == -d


def test_cap_stability_chain():
    charge = potential_charge(Potential.single_variable(2), Side.THETA)
    tables = [
        cohomology_dims_capped(charge, THETA1, 2, cap, stabilize=False)
        for cap in (2, 3, 4)
    ]
    assert tables[0].dims == tables[1].dims == tables[2].dims


def test_euler_series_q0_row():
    for d in (1, 2):
        f = Potential.single_variable(d + 1)
        tw = default_torus_weights(f)
        es = euler_series(OMEGA1, 0, (-2 * d, 2), tw)
        assert es.rows[0] == {e: -1 for e in range(-d, 0)}


def test_euler_series_empty_window():
    tw = default_torus_weights(Potential.single_variable(2))
    es = euler_series(OMEGA1, 1, (3, 4), tw)
    assert es.rows == {}


def test_chi_van_q0_coefficients():
    f3 = Potential.single_variable(3)
    charge = combine(chiral_de_rham(1), potential_charge(f3, Side.OMEGA))
    series, _ = chi_van(charge, OMEGA1, 0, x0_cap=4)
    assert series.rows[0] == {0: -2}
    f2 = Potential.single_variable(2)
    charge2 = combine(chiral_de_rham(1), potential_charge(f2, Side.OMEGA))
    series2, _ = chi_van(charge2, OMEGA1, 1, x0_cap=2)
    assert series2.rows.get(0) == {0: -1}
    assert series2.rows.get(1) is None


def test_chi_van_zero_charge_counts_chains():
    """With a zero differential, chi_van is the alternating chain count."""
    charge = lie_charge(StructureConstants.abelian(1))
    tw = TorusWeights.x_count(1)
    series, table = chi_van(
        charge, THETA1, 1, torus_weights=tw, torus_window=(0, 2)
    )
    for q in (0, 1):
        chi = 0
        for t in range(3):
            for mono in enumerate_basis(THETA1, q, torus=t, torus_weights=tw):
                chi += -1 if mono.degree % 2 else 1
        assert series.rows.get(q, {}).get(0, 0) == chi


def test_torus_mode_detects_non_nilpotent_charge():
    bad = StructureConstants.from_entries(
        3, [(3, 1, 2, 1), (1, 3, 1, 2), (2, 3, 2, -1)], validate=False
    )
    with pytest.raises(CohomologyError):
        cohomology_dims_torus(
            lie_charge(bad), THETA3, 0, TorusWeights.x_count(3), (0, 1)
        )


def test_torus_mode_rejects_inhomogeneous_charge():
    f = Potential.single_variable(2)
    charge = combine(chiral_de_rham(1), potential_charge(f, Side.OMEGA))
    tw = default_torus_weights(f)
    with pytest.raises(CohomologyError):
        cohomology_dims_torus(charge, OMEGA1, 0, tw, (-1, 1))


def test_cohomology_requires_cap_or_torus():
    charge = chiral_de_rham(1)
    with pytest.raises(CohomologyError):
        cohomology_dims(charge, OMEGA1, 1)


def test_capped_and_torus_regimes_agree():
    """For f = z^2 the weight <= 2 dimensions agree between regimes."""
    f = Potential.single_variable(2)
    charge = potential_charge(f, Side.THETA)
    tw = default_torus_weights(f)
    capped = cohomology_dims(charge, THETA1, 2, x0_cap=3)
    torus = cohomology_dims_torus(charge, THETA1, 2, tw, (-4, 4))
    assert capped.dims == torus.dims


def test_table_determinism():
    charge = potential_charge(Potential.single_variable(3), Side.THETA)
    a = cohomology_dims(charge, THETA1, 1, x0_cap=3)
    b = cohomology_dims(charge, THETA1, 1, x0_cap=3)
    assert a.dims == b.dims and a.stabilization == b.stabilization
