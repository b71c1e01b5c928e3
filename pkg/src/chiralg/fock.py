"""Graded Fock spaces of free-field vertex superalgebras on affine d-space.

A space is the polynomial superalgebra on its *creator* modes applied to the
vacuum.  There are four families of generators per direction: two bosonic
(x, y) and two fermionic (psi of cohomological degree -1, phi of degree +1).
Which modes are creators depends on the side:

    polyvector side (THETA):  x_{>=0}, y_{>=1}, psi_{>=0}, phi_{>=1}
    form side      (OMEGA):   x_{>=0}, y_{>=1}, phi_{>=0}, psi_{>=1}

The conformal weight of a mode equals its index.  All coefficients are exact
rationals; nothing in this module ever touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence


class FockError(ValueError):
    pass


class UnboundedBasisError(FockError):
    """A basis request whose answer would be infinite."""


class Family(enum.Enum):
    X = "x"
    Y = "y"
    PHI = "phi"
    PSI = "psi"

    @property
    def fermionic(self) -> bool:
        return self in (Family.PHI, Family.PSI)

    @property
    def cohomological_degree(self) -> int:
        if self is Family.PHI:
            return 1
        if self is Family.PSI:
            return -1
        return 0


# Global total order on modes: family, then direction, then index.  The choice
# is a convention; any fixed order with consistent Koszul signs gives an
# isomorphic algebra.
_FAMILY_ORDER = {Family.X: 0, Family.Y: 1, Family.PSI: 2, Family.PHI: 3}


@dataclass(frozen=True, order=False)
class ModeKey:
    family: Family
    direction: int
    index: int

    @property
    def fermionic(self) -> bool:
        return self.family.fermionic

    @property
    def weight(self) -> int:
        return self.index

    @property
    def degree(self) -> int:
        return self.family.cohomological_degree

    def sort_key(self) -> tuple:
        return (_FAMILY_ORDER[self.family], self.direction, self.index)

    def __lt__(self, other: "ModeKey") -> bool:
        return self.sort_key() < other.sort_key()

    def text(self, dim: int = 1) -> str:
        if dim == 1:
            return f"{self.family.value}_{self.index}"
        return f"{self.family.value}{self.direction}_{self.index}"


class Side(enum.Enum):
    THETA = "theta"  # polyvector side
    OMEGA = "omega"  # differential form side


_THRESHOLDS = {
    Side.THETA: {Family.X: 0, Family.Y: 1, Family.PSI: 0, Family.PHI: 1},
    Side.OMEGA: {Family.X: 0, Family.Y: 1, Family.PHI: 0, Family.PSI: 1},
}


@dataclass(frozen=True)
class SpaceSpec:
    side: Side
    dim: int

    def creator_threshold(self, family: Family) -> int:
        return _THRESHOLDS[self.side][family]

    def is_creator(self, mode: ModeKey) -> bool:
        return mode.index >= self.creator_threshold(mode.family)

    @property
    def zero_fermion_family(self) -> Family:
        """The fermionic family with a weight-0 creator mode."""
        return Family.PSI if self.side is Side.THETA else Family.PHI

    def check_direction(self, mode: ModeKey) -> None:
        if not 1 <= mode.direction <= self.dim:
            raise FockError(
                f"mode direction {mode.direction} outside 1..{self.dim}"
            )


def make_space(side: Side, dim: int) -> SpaceSpec:
    if dim < 1:
        raise FockError(f"dimension must be >= 1, got {dim}")
    return SpaceSpec(side=side, dim=dim)


@dataclass(frozen=True)
class TorusWeights:
    """Integer torus weights per direction.

    Bosonic pairs are forced conjugate (wy = -wx) and the fermionic weights
    must satisfy wphi + wpsi = 0 in each direction.
    """

    wx: tuple
    wphi: tuple
    wpsi: tuple

    def __post_init__(self):
        if not (len(self.wx) == len(self.wphi) == len(self.wpsi)):
            raise FockError("torus weight tuples must have equal length")
        for j, (a, b) in enumerate(zip(self.wphi, self.wpsi)):
            if a + b != 0:
                raise FockError(
                    f"wphi[{j}] + wpsi[{j}] = {a + b}, expected 0"
                )

    @property
    def dim(self) -> int:
        return len(self.wx)

    def of_mode(self, mode: ModeKey) -> int:
        j = mode.direction - 1
        if mode.family is Family.X:
            return self.wx[j]
        if mode.family is Family.Y:
            return -self.wx[j]
        if mode.family is Family.PHI:
            return self.wphi[j]
        return self.wpsi[j]

    @staticmethod
    def from_x_and_phi(wx: Sequence[int], wphi: Sequence[int]) -> "TorusWeights":
        return TorusWeights(tuple(wx), tuple(wphi), tuple(-a for a in wphi))

    @staticmethod
    def x_count(dim: int) -> "TorusWeights":
        """Grading by (number of x letters) - (number of y letters)."""
        return TorusWeights((1,) * dim, (0,) * dim, (0,) * dim)


@dataclass(frozen=True)
class BiGrade:
    weight: int
    degree: int
    torus: Optional[int] = None


@dataclass(frozen=True)
class Monomial:
    """Canonically ordered product of creator modes applied to the vacuum.

    The empty monomial is the vacuum.  Fermionic modes never repeat.
    """

    modes: tuple = ()

    @property
    def weight(self) -> int:
        return sum(m.index for m in self.modes)

    @property
    def degree(self) -> int:
        return sum(m.degree for m in self.modes)

    @property
    def parity(self) -> int:
        return sum(1 for m in self.modes if m.fermionic) % 2

    def torus(self, weights: TorusWeights) -> int:
        return sum(weights.of_mode(m) for m in self.modes)

    def grade(self, weights: Optional[TorusWeights] = None) -> BiGrade:
        t = self.torus(weights) if weights is not None else None
        return BiGrade(self.weight, self.degree, t)

    def x0_degree(self, direction: Optional[int] = None) -> int:
        return sum(
            1
            for m in self.modes
            if m.family is Family.X
            and m.index == 0
            and (direction is None or m.direction == direction)
        )

    def sort_key(self) -> tuple:
        return tuple(m.sort_key() for m in self.modes)

    def text(self, dim: int = 1) -> str:
        if not self.modes:
            return "1"
        return " ".join(m.text(dim) for m in self.modes)


VACUUM = Monomial()


class State:
    """Finite rational-linear combination of monomials.  Immutable in use."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    cleaned[mono] = c
        self.terms = cleaned

    @staticmethod
    def zero() -> "State":
        return State()

    @staticmethod
    def of(monomial: Monomial, coeff=1) -> "State":
        return State({monomial: Fraction(coeff)})

    @staticmethod
    def vacuum(coeff=1) -> "State":
        return State.of(VACUUM, coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "State") -> "State":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return State(out)

    def __sub__(self, other: "State") -> "State":
        return self + other.scale(-1)

    def scale(self, coeff) -> "State":
        c = Fraction(coeff)
        if not c:
            return State()
        return State({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, State) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def monomials(self):
        return self.terms.keys()

    def weights(self) -> set:
        return {m.weight for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def text(self, dim: int = 1) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=Monomial.sort_key):
            parts.append(f"{self.terms[mono]}*{mono.text(dim)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"State({self.text()})"


def _fermion_sort_sign(fermions: Sequence[ModeKey]):
    """Parity sign of sorting the fermionic letters; None if one repeats."""
    keys = [f.sort_key() for f in fermions]
    if len(set(keys)) != len(keys):
        return None
    inversions = 0
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if keys[i] > keys[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def normalize(space: SpaceSpec, modes: Iterable[ModeKey], coeff=1) -> State:
    """Canonical form of a raw creator product, with the Koszul sign.

    Bosons commute freely; each transposition of two fermionic letters flips
    the sign, and a repeated fermionic letter gives zero.
    """
    modes = tuple(modes)
    for m in modes:
        space.check_direction(m)
        if not space.is_creator(m):
            raise FockError(f"{m.text(space.dim)} is not a creator in {space.side.value}")
    sign = _fermion_sort_sign([m for m in modes if m.fermionic])
    if sign is None:
        return State.zero()
    ordered = tuple(sorted(modes, key=ModeKey.sort_key))
    return State.of(Monomial(ordered), Fraction(coeff) * sign)


def grade(monomial: Monomial, weights: Optional[TorusWeights] = None) -> BiGrade:
    """Bigrade of a normalized monomial."""
    return monomial.grade(weights)


def _positive_weight_creators(space: SpaceSpec, weight: int):
    gens = []
    for direction in range(1, space.dim + 1):
        for family in Family:
            lo = max(1, space.creator_threshold(family))
            for index in range(lo, weight + 1):
                gens.append(ModeKey(family, direction, index))
    return gens


def _positive_multisets(gens, weight: int) -> Iterator[tuple]:
    """All creator multisets of positive-index modes with the given weight."""

    def rec(pos: int, remaining: int, acc: list):
        if remaining == 0:
            yield tuple(acc)
            return
        if pos == len(gens):
            return
        g = gens[pos]
        yield from rec(pos + 1, remaining, acc)
        max_mult = 1 if g.fermionic else remaining // g.index
        for mult in range(1, max_mult + 1):
            if mult * g.index > remaining:
                break
            yield from rec(pos + 1, remaining - mult * g.index, acc + [g] * mult)

    yield from rec(0, weight, [])


def _x0_exponent_vectors(
    wx: Sequence[int], target: int, dim: int
) -> Iterator[tuple]:
    """Solutions k >= 0 of sum_j k_j * wx[j] = target.

    Requires every wx[j] nonzero and of one common sign, so the solution set
    is finite.
    """
    if any(w == 0 for w in wx):
        j = next(j for j, w in enumerate(wx) if w == 0)
        raise UnboundedBasisError(
            f"torus weight of x{j + 1}_0 is zero; weight-0 piece unbounded"
        )
    if len({w > 0 for w in wx}) > 1:
        raise UnboundedBasisError(
            "mixed-sign torus weights on x_0 generators; weight-0 piece unbounded"
        )
    flip = -1 if wx[0] < 0 else 1
    weights = [flip * w for w in wx]
    goal = flip * target

    def rec(j: int, remaining: int, acc: list):
        if j == dim:
            if remaining == 0:
                yield tuple(acc)
            return
        w = weights[j]
        for k in range(remaining // w + 1):
            yield from rec(j + 1, remaining - k * w, acc + [k])

    if goal < 0:
        return
    yield from rec(0, goal, [])


def enumerate_basis(
    space: SpaceSpec,
    weight: int,
    *,
    degree: Optional[int] = None,
    torus: Optional[int] = None,
    torus_weights: Optional[TorusWeights] = None,
    x0_cap: Optional[int] = None,
    zero_fermion_allowed: bool = True,
) -> list:
    """Exhaustive, canonically ordered basis of a graded piece.

    The weight-0 generators x_0 (and the weight-0 fermion) make fixed-weight
    pieces infinite dimensional, so every query must either cap the x_0 degree
    (per direction) or fix a torus weight under a regularizing assignment.
    """
    if weight < 0:
        return []
    if torus is not None and torus_weights is None:
        raise FockError("torus constraint requires a TorusWeights assignment")
    if x0_cap is None and torus is None:
        raise UnboundedBasisError(
            "unbounded request: no x_0 degree cap and no torus constraint "
            "(runaway generator x_0)"
        )

    zero_fam = space.zero_fermion_family
    out = []
    for pos in _positive_multisets(_positive_weight_creators(space, weight), weight):
        for fermion_mask in range(2**space.dim if zero_fermion_allowed else 1):
            zf = tuple(
                ModeKey(zero_fam, j + 1, 0)
                for j in range(space.dim)
                if fermion_mask >> j & 1
            )
            base = pos + zf
            if x0_cap is not None:
                ranges = _cartesian_exponents(space.dim, x0_cap)
            else:
                partial = sum(torus_weights.of_mode(m) for m in base)
                ranges = _x0_exponent_vectors(
                    torus_weights.wx, torus - partial, space.dim
                )
            for exps in ranges:
                x0s = tuple(
                    ModeKey(Family.X, j + 1, 0)
                    for j in range(space.dim)
                    for _ in range(exps[j])
                )
                mono = Monomial(tuple(sorted(base + x0s, key=ModeKey.sort_key)))
                if degree is not None and mono.degree != degree:
                    continue
                if torus is not None and mono.torus(torus_weights) != torus:
                    continue
                out.append(mono)
    out.sort(key=Monomial.sort_key)
    return out


def _cartesian_exponents(dim: int, cap: int) -> Iterator[tuple]:
    def rec(j: int, acc: list):
        if j == dim:
            yield tuple(acc)
            return
        for k in range(cap + 1):
            yield from rec(j + 1, acc + [k])

    yield from rec(0, [])
