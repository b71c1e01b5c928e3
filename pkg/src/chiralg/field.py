"""Reconstruction of the full field of a composite state and its modes.

Conventions.  Fields are expanded as a(z) = sum_n a_(n) z^n, and the mode
a_(n) of a state of conformal weight q raises conformal weight by q + n.  The
generator field attached to the minimal creator u_h is therefore

    G_u(z) = sum_n u_{n+h} z^n,

and u_k with k > h carries the derivative field (1/(k-h)!) d_z^{k-h} G_u(z).
The field of a product state is the normally ordered product of the leading
generator field with the field of the rest, split by the creator/annihilator
classification with Koszul signs.  On fixed-weight arguments every mode sum
truncates exactly.

Under these conventions the residue mode a_(-1) of a weight-1 vector is
weight preserving, which is the BRST contract.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .fock import FockError, ModeKey, Monomial, SpaceSpec, State
from .oper import apply_mode


def _genbinom(m: int, j: int) -> Fraction:
    """Generalized binomial C(m, j) for integer m (possibly negative), j >= 0."""
    num = 1
    for t in range(j):
        num *= m - t
    den = 1
    for t in range(1, j + 1):
        den *= t
    return Fraction(num, den)


def _state_min_weight(v: State) -> int:
    return min((m.weight for m in v.terms), default=0)


def _monomial_field_mode(space: SpaceSpec, modes: tuple, n: int, v: State) -> State:
    """Mode at z-power n of the reconstructed field of the monomial state."""
    if v.is_zero():
        return State.zero()
    if not modes:
        return v if n == 0 else State.zero()
    u = modes[0]
    rest = modes[1:]
    h = space.creator_threshold(u.family)
    k = u.index
    j = k - h  # derivative order
    rest_weight = sum(m.index for m in rest)
    rest_parity = sum(1 for m in rest if m.fermionic) % 2
    koszul = -1 if (u.fermionic and rest_parity) else 1
    wv = max((m.weight for m in v.terms), default=0)
    out = State.zero()
    # Creator part of the generator field, applied after the tail field.
    for i in range(-j, n + wv + rest_weight + 1):
        c = _genbinom(i + j, j)
        if not c:
            continue
        inner = _monomial_field_mode(space, rest, n - i, v)
        if inner.is_zero():
            continue
        out = out + apply_mode(space, ModeKey(u.family, u.direction, i + k), inner).scale(c)
    # Annihilator part, moved right past the tail field with the Koszul sign.
    for i in range(-k - wv, -j):
        c = _genbinom(i + j, j)
        if not c:
            continue
        hit = apply_mode(space, ModeKey(u.family, u.direction, i + k), v)
        if hit.is_zero():
            continue
        out = out + _monomial_field_mode(space, rest, n - i, hit).scale(c * koszul)
    return out


def field_mode(space: SpaceSpec, a: State, n: int, v: State) -> State:
    """The operator a_(n) applied to v; raises conformal weight by w(a) + n."""
    if not a.is_homogeneous():
        raise FockError("field reconstruction requires a homogeneous state")
    out = State.zero()
    for mono, coeff in a.terms.items():
        out = out + _monomial_field_mode(space, mono.modes, n, v).scale(coeff)
    return out


class ResidueCharge:
    """The BRST operator v -> a_(-1) v of a weight-1, degree +1 vector."""

    def __init__(self, space: SpaceSpec, a: State):
        if a.is_zero():
            self.space, self.vector = space, a
            return
        weights = a.weights()
        degrees = {m.degree for m in a.terms}
        if weights != {1}:
            raise FockError(f"BRST vector must have conformal weight 1, got {weights}")
        if degrees != {1}:
            raise FockError(f"BRST vector must have cohomological degree +1, got {degrees}")
        self.space = space
        self.vector = a

    def __call__(self, v: State) -> State:
        if self.vector.is_zero():
            return State.zero()
        return field_mode(self.space, self.vector, -1, v)


def residue_charge(space: SpaceSpec, a: State) -> ResidueCharge:
    return ResidueCharge(space, a)
