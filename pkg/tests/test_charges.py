"""Named differentials and their checks: de Rham, potential twists, Lie charge."""

import random

import pytest
from fractions import Fraction

from chiralg.charges import (
    Potential,
    StructureConstants,
    check_anticommute,
    check_nilpotent,
    chiral_de_rham,
    combine,
    default_torus_weights,
    lie_charge,
    potential_charge,
    random_potential,
    validate_homogeneity,
)
from chiralg.fock import (
    FockError,
    Side,
    State,
    TorusWeights,
    enumerate_basis,
    make_space,
)
from chiralg.oper import charge_operator, instantiate_charge
from conftest import X, Y, PHI, PSI, st

THETA1 = make_space(Side.THETA, 1)
OMEGA1 = make_space(Side.OMEGA, 1)
THETA3 = make_space(Side.THETA, 3)

BAD_JACOBI = [(3, 1, 2, 1), (1, 3, 1, 2), (2, 3, 2, -1)]


def test_potential_validation():
    with pytest.raises(FockError):
        Potential.from_terms(1, [(1, (-1,))])
    with pytest.raises(FockError):
        Potential.from_terms(2, [(1, (1,))])
    with pytest.raises(FockError):
        Potential.from_terms(1, [(1, (2,)), (3, (2,))])


def test_quasi_degree():
    f = Potential.from_terms(2, [(1, (2, 1))])
    assert f.quasi_degree((1, 2)) == 4
    g = Potential.from_terms(1, [(1, (2,)), (1, (3,))])
    with pytest.raises(FockError):
        g.quasi_degree((1,))


def test_default_torus_weights_z3():
    tw = default_torus_weights(Potential.single_variable(3))
    assert tw.wx == (1,) and tw.wphi == (-2,) and tw.wpsi == (2,)


def test_chiral_de_rham_weight0():
    op = charge_operator(chiral_de_rham(1), OMEGA1, 1)
    assert op(st(OMEGA1, X(0))) == st(OMEGA1, PHI(0))
    assert op(st(OMEGA1, PSI(1))) == st(OMEGA1, Y(1))
    assert op(State.vacuum()).is_zero()


def test_potential_theta_weight0_contraction():
    f = Potential.single_variable(2)
    op = charge_operator(potential_charge(f, Side.THETA), THETA1, 0)
    assert op(st(THETA1, PSI(0))) == st(THETA1, X(0), coeff=2)


def test_potential_omega_weight0_wedge():
    for d in (1, 2):
        f = Potential.single_variable(d + 1)
        op = charge_operator(potential_charge(f, Side.OMEGA), OMEGA1, 0)
        for k in range(3):
            v = st(OMEGA1, *([X(0)] * k))
            want = st(OMEGA1, *([X(0)] * (k + d) + [PHI(0)]), coeff=d + 1)
            assert op(v) == want


def test_potential_omega_weight1():
    f = Potential.single_variable(2)
    op = charge_operator(potential_charge(f, Side.OMEGA), OMEGA1, 1)
    got = op(st(OMEGA1, PSI(1)))
    want = st(OMEGA1, X(1), coeff=2) + st(OMEGA1, X(0), PHI(0), PSI(1), coeff=2)
    assert got == want


def test_structure_constants_antisymmetry_enforced():
    with pytest.raises(FockError):
        StructureConstants(1, (((Fraction(1),),),))


def test_structure_constants_jacobi_enforced():
    with pytest.raises(FockError):
        StructureConstants.from_entries(3, BAD_JACOBI)
    # the bypass constructor skips the check
    StructureConstants.from_entries(3, BAD_JACOBI, validate=False)


def test_named_algebras_are_valid():
    StructureConstants.sl2()
    StructureConstants.heisenberg3()
    StructureConstants.abelian(4)


def test_lie_weight0_heisenberg():
    charge = lie_charge(StructureConstants.heisenberg3())
    op = charge_operator(charge, THETA3, 0)
    # adjoint action: Q(x^1) = c^k_{j1} x^k psi^j = -x^3 psi^2
    assert op(st(THETA3, X(0, 1))) == st(THETA3, X(0, 3), PSI(0, 2), coeff=-1)
    assert op(st(THETA3, X(0, 3))).is_zero()  # center


def test_lie_weight0_sl2():
    charge = lie_charge(StructureConstants.sl2())
    op = charge_operator(charge, THETA3, 0)
    # Q(x^1) = -x^3 psi^2 + 2 x^1 psi^3  (basis e, f, h)
    want = st(THETA3, X(0, 3), PSI(0, 2), coeff=-1) + st(
        THETA3, X(0, 1), PSI(0, 3), coeff=2
    )
    assert op(st(THETA3, X(0, 1))) == want


def test_check_nilpotent_potential():
    f = Potential.from_terms(2, [(3, (1, 2)), (-1, (2, 0))])
    space = make_space(Side.THETA, 2)
    assert check_nilpotent(potential_charge(f, Side.THETA), space, 3)


def test_check_nilpotent_lie_sl2_small():
    assert check_nilpotent(lie_charge(StructureConstants.sl2()), THETA3, 2)


def test_check_nilpotent_detects_jacobi_violation():
    bad = StructureConstants.from_entries(3, BAD_JACOBI, validate=False)
    report = check_nilpotent(lie_charge(bad), THETA3, 1)
    assert not report
    assert report.witness is not None
    assert not report.image.is_zero()
    # the witness is genuine: applying the charge twice reproduces the image
    op = charge_operator(lie_charge(bad), THETA3, 1)
    assert op(op(State.of(report.witness))) == report.image


def test_check_nilpotent_basis_method_agrees():
    bad = StructureConstants.from_entries(3, BAD_JACOBI, validate=False)
    assert not check_nilpotent(lie_charge(bad), THETA3, 1, method="basis", x0_cap=1)
    f = Potential.single_variable(3)
    assert check_nilpotent(
        potential_charge(f, Side.THETA), THETA1, 2, method="basis"
    )


def test_check_anticommute_examples():
    f2 = potential_charge(Potential.single_variable(2), Side.OMEGA)
    f3 = potential_charge(Potential.single_variable(3), Side.OMEGA)
    cdr = chiral_de_rham(1)
    assert check_anticommute(cdr, f2, OMEGA1, 2)
    assert check_anticommute(cdr, cdr, OMEGA1, 2)
    assert check_anticommute(f2, f3, OMEGA1, 2)


def test_validate_homogeneity_examples():
    f = Potential.single_variable(3)
    good = TorusWeights.from_x_and_phi((1,), (-2,))
    assert validate_homogeneity(potential_charge(f, Side.THETA), good)
    bad = TorusWeights.from_x_and_phi((1,), (-1,))
    assert not validate_homogeneity(potential_charge(f, Side.THETA), bad)
    g = Potential.from_terms(2, [(1, (2, 1))])
    tw = default_torus_weights(g, wx=(1, 2))
    assert tw.wpsi == (3, 2)
    assert validate_homogeneity(potential_charge(g, Side.OMEGA), tw)


def test_degree_shift_constants():
    assert chiral_de_rham(2).degree_shift() == 1
    f = Potential.single_variable(2)
    assert potential_charge(f, Side.THETA).degree_shift() == 1
    # the Lie charge multiplies by psi (degree -1), so its shift is -1
    assert lie_charge(StructureConstants.sl2()).degree_shift() == -1


def test_charges_preserve_weight():
    f = Potential.single_variable(3)
    combos = [
        (potential_charge(f, Side.THETA), THETA1),
        (combine(chiral_de_rham(1), potential_charge(f, Side.OMEGA)), OMEGA1),
        (lie_charge(StructureConstants.sl2()), THETA3),
    ]
    for charge, space in combos:
        op = charge_operator(charge, space, 2)
        for q in range(3):
            for mono in enumerate_basis(space, q, x0_cap=1):
                out = op(State.of(mono))
                assert all(m.weight == q for m in out.terms)


def test_combine_weight_shift_guard():
    from chiralg.oper import SymbolicCharge

    c1 = chiral_de_rham(1)
    c2 = SymbolicCharge(patterns=c1.patterns, weight_shift=1)
    with pytest.raises(FockError):
        combine(c1, c2)


def test_random_potentials_are_nilpotent():
    rng = random.Random(11)
    for d in (1, 2):
        f = random_potential(rng, d, 3)
        space = make_space(Side.THETA, d)
        assert check_nilpotent(potential_charge(f, Side.THETA), space, 2)
