"""Zero-mode modules, induction to vertex modules, singular vectors.

A ZeroModeModule is a finite, degree-capped approximation of a module over
the zero-mode algebra on the odd cotangent bundle of the affine line
(generators x0, y0, phi0, psi0 with [y0, x0] = 1 and {psi0, phi0} = 1).
Induction adjoins free positive modes of all four families; negative modes
act by derivations pairing against the positive creators and never touch the
zero-mode factor.  Only d = 1 is implemented; products of lines reduce to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fock import Family, FockError, ModeKey
from .linalg import kernel_basis, rank

Vector = Dict[int, Fraction]  # basis index -> coefficient


class ModuleError(ValueError):
    pass


_ZERO_MODE_NAMES = ("x0", "y0", "phi0", "psi0")


@dataclass
class ZeroModeModule:
    """Finite graded basis with zero-mode action matrices.

    ``actions[name]`` maps a basis index to a sparse column.  Relations are
    verified truncation-aware: only on basis vectors whose images provably
    stay below the degree cap.
    """

    labels: tuple
    degrees: tuple
    parities: tuple
    cap: int
    actions: Dict[str, List[Vector]]

    def __post_init__(self):
        n = len(self.labels)
        if not (len(self.degrees) == len(self.parities) == n):
            raise ModuleError("label/degree/parity lengths differ")
        for name in _ZERO_MODE_NAMES:
            if name not in self.actions or len(self.actions[name]) != n:
                raise ModuleError(f"missing or misshaped action matrix for {name}")
        self._check_relations()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def apply(self, name: str, vec: Vector) -> Vector:
        mat = self.actions[name]
        out: Vector = {}
        for i, c in vec.items():
            for r, v in mat[i].items():
                out[r] = out.get(r, Fraction(0)) + c * v
        return {r: v for r, v in out.items() if v}

    def _check_relations(self):
        def commutator(a, b, i, sign):
            # a(b(e_i)) + sign * b(a(e_i))
            va = self.apply(a, self.apply(b, {i: Fraction(1)}))
            vb = self.apply(b, self.apply(a, {i: Fraction(1)}))
            out = dict(va)
            for r, v in vb.items():
                out[r] = out.get(r, Fraction(0)) + sign * v
            return {r: v for r, v in out.items() if v}

        unit = lambda i: {i: Fraction(1)}
        for i in range(self.dim):
            # [y0, x0] = 1, checked where x0's image stays under the cap
            if self.degrees[i] < self.cap:
                if commutator("y0", "x0", i, -1) != unit(i):
                    raise ModuleError(
                        f"[y0, x0] != 1 on basis vector {self.labels[i]}"
                    )
            # {psi0, phi0} = 1; fermion directions do not escape the cap
            if commutator("psi0", "phi0", i, +1) != unit(i):
                raise ModuleError(
                    f"{{psi0, phi0}} != 1 on basis vector {self.labels[i]}"
                )
            for name, odd in (("x0", 0), ("y0", 0), ("phi0", 1), ("psi0", 1)):
                img = self.apply(name, unit(i))
                for r in img:
                    if (self.parities[r] - self.parities[i] - odd) % 2:
                        raise ModuleError(
                            f"{name} breaks parity on {self.labels[i]}"
                        )


def polynomial_zero_modes(cap: int) -> ZeroModeModule:
    """C[x0, psi0] with x-degree <= cap: the vacuum zero-mode data."""
    labels, degrees, parities = [], [], []
    index = {}
    for k in range(cap + 1):
        for eps in (0, 1):
            index[(k, eps)] = len(labels)
            labels.append(f"x0^{k}" + (" psi0" if eps else ""))
            degrees.append(k)
            parities.append(eps)
    x0 = [dict() for _ in labels]
    y0 = [dict() for _ in labels]
    phi0 = [dict() for _ in labels]
    psi0 = [dict() for _ in labels]
    for (k, eps), i in index.items():
        if k + 1 <= cap:
            x0[i] = {index[(k + 1, eps)]: Fraction(1)}
        if k >= 1:
            y0[i] = {index[(k - 1, eps)]: Fraction(k)}
        if eps == 0:
            psi0[i] = {index[(k, 1)]: Fraction(1)}
        else:
            phi0[i] = {index[(k, 0)]: Fraction(1)}
    return ZeroModeModule(
        tuple(labels), tuple(degrees), tuple(parities), cap,
        {"x0": x0, "y0": y0, "phi0": phi0, "psi0": psi0},
    )


def delta_zero_modes(cap: int) -> ZeroModeModule:
    """The delta module C[y0] psi0^eps delta with x0 delta = 0, y-degree <= cap."""
    labels, degrees, parities = [], [], []
    index = {}
    for k in range(cap + 1):
        for eps in (0, 1):
            index[(k, eps)] = len(labels)
            labels.append(f"y0^{k}" + (" psi0" if eps else "") + " delta")
            degrees.append(k)
            parities.append(eps)
    x0 = [dict() for _ in labels]
    y0 = [dict() for _ in labels]
    phi0 = [dict() for _ in labels]
    psi0 = [dict() for _ in labels]
    for (k, eps), i in index.items():
        if k + 1 <= cap:
            y0[i] = {index[(k + 1, eps)]: Fraction(1)}
        if k >= 1:
            x0[i] = {index[(k - 1, eps)]: Fraction(-k)}
        if eps == 0:
            psi0[i] = {index[(k, 1)]: Fraction(1)}
        else:
            phi0[i] = {index[(k, 0)]: Fraction(1)}
    return ZeroModeModule(
        tuple(labels), tuple(degrees), tuple(parities), cap,
        {"x0": x0, "y0": y0, "phi0": phi0, "psi0": psi0},
    )


def zero_modes_from_json(doc: dict) -> ZeroModeModule:
    """Build a ZeroModeModule from dense rational matrices.

    Expected keys: labels, degrees, parities, cap, and actions {name: rows},
    each matrix dense with decimal-string rational entries, rows indexed by
    target basis vector.
    """
    try:
        labels = tuple(str(s) for s in doc["labels"])
        degrees = tuple(int(v) for v in doc["degrees"])
        parities = tuple(int(v) for v in doc["parities"])
        cap = int(doc["cap"])
        raw = doc["actions"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleError(f"malformed zero-mode module: {exc}")
    n = len(labels)
    actions = {}
    for name in _ZERO_MODE_NAMES:
        if name not in raw:
            raise ModuleError(f"missing action matrix for {name}")
        mat = raw[name]
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ModuleError(f"action matrix for {name} is not {n}x{n}")
        cols: List[Vector] = [dict() for _ in range(n)]
        for r, row in enumerate(mat):
            for c, entry in enumerate(row):
                v = Fraction(str(entry))
                if v:
                    cols[c][r] = v
        actions[name] = cols
    return ZeroModeModule(labels, degrees, parities, cap, actions)


def _positive_monomials(weight: int) -> List[tuple]:
    """Sorted tuples of positive modes (all four families, d = 1)."""
    gens = []
    for fam in (Family.X, Family.Y, Family.PSI, Family.PHI):
        for idx in range(1, weight + 1):
            gens.append(ModeKey(fam, 1, idx))

    out = []

    def rec(pos, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if pos == len(gens):
            return
        g = gens[pos]
        rec(pos + 1, remaining, acc)
        cap = 1 if g.fermionic else remaining // g.index
        for mult in range(1, cap + 1):
            if mult * g.index > remaining:
                break
            rec(pos + 1, remaining - mult * g.index, acc + [g] * mult)

    rec(0, weight, [])
    out.sort(key=lambda mono: tuple(m.sort_key() for m in mono))
    return out


_PAIRING = {
    Family.Y: (Family.X, 1),
    Family.X: (Family.Y, -1),
    Family.PHI: (Family.PSI, 1),
    Family.PSI: (Family.PHI, 1),
}


class InducedTruncation:
    """Weight-capped induction of a ZeroModeModule to a vertex module."""

    def __init__(self, base: ZeroModeModule, weight_cap: int):
        self.base = base
        self.weight_cap = weight_cap
        self.bases: Dict[int, List[tuple]] = {}  # weight -> [(pos_mono, base_idx)]
        self.index: Dict[tuple, int] = {}
        for q in range(weight_cap + 1):
            items = []
            for pos in _positive_monomials(q):
                for b in range(base.dim):
                    items.append((pos, b))
            self.bases[q] = items
            for i, it in enumerate(items):
                self.index[it] = i

    def dim(self, weight: int) -> int:
        return len(self.bases.get(weight, []))

    def element_weight(self, element: tuple) -> int:
        pos, _ = element
        return sum(m.index for m in pos)

    def apply_mode(self, mode: ModeKey, weight: int, vec: Vector) -> Tuple[int, Vector]:
        """Apply one mode to a vector in the weight-q piece.

        Returns (new_weight, vector).  Raises if the image escapes the cap.
        """
        basis = self.bases[weight]
        new_weight = weight + mode.index
        if new_weight < 0:
            return new_weight, {}
        if new_weight > self.weight_cap:
            raise ModuleError(
                f"cap {self.weight_cap} too small for mode of index {mode.index}"
            )
        out: Vector = {}

        def emit(element, coeff):
            j = self.index[element]
            out[j] = out.get(j, Fraction(0)) + coeff

        for i, c in vec.items():
            if not c:
                continue
            pos, b = basis[i]
            if mode.index > 0:
                sign, merged = _insert_positive(pos, mode)
                if merged is None:
                    continue
                emit((merged, b), c * sign)
            elif mode.index == 0:
                name = {
                    Family.X: "x0", Family.Y: "y0",
                    Family.PHI: "phi0", Family.PSI: "psi0",
                }[mode.family]
                odd = mode.fermionic
                sign = 1
                if odd and sum(1 for m in pos if m.fermionic) % 2:
                    sign = -1
                img = self.base.apply(name, {b: Fraction(1)})
                for r, v in img.items():
                    emit((pos, r), c * sign * v)
            else:
                fam, rule_sign = _PAIRING[mode.family]
                target = ModeKey(fam, 1, -mode.index)
                if target.fermionic:
                    passed = 0
                    for p, m in enumerate(pos):
                        if m == target:
                            s = -1 if passed % 2 else 1
                            emit((pos[:p] + pos[p + 1 :], b), c * s * rule_sign)
                            break
                        if m.fermionic:
                            passed += 1
                else:
                    mult = sum(1 for m in pos if m == target)
                    if mult:
                        p = pos.index(target)
                        emit((pos[:p] + pos[p + 1 :], b), c * mult * rule_sign)
        return new_weight, {j: v for j, v in out.items() if v}


def _insert_positive(pos: tuple, mode: ModeKey):
    if mode.fermionic and mode in pos:
        return 1, None
    merged = list(pos)
    # insertion position by the global order
    p = 0
    while p < len(merged) and merged[p].sort_key() <= mode.sort_key():
        p += 1
    sign = 1
    if mode.fermionic:
        crossed = sum(1 for m in merged[:p] if m.fermionic)
        sign = -1 if crossed % 2 else 1
    merged.insert(p, mode)
    return sign, tuple(merged)


def induce(base: ZeroModeModule, weight_cap: int) -> InducedTruncation:
    return InducedTruncation(base, weight_cap)


def singular_vectors(module: InducedTruncation, weight: int) -> List[Vector]:
    """Exact basis of the joint kernel of all negative modes at fixed weight.

    Modes of index < -weight automatically kill the whole piece, so indices
    -1..-weight suffice.  Requires head-room: weight <= cap.
    """
    if weight > module.weight_cap:
        raise ModuleError(
            f"insufficient head-room: weight {weight} > cap {module.weight_cap}"
        )
    n = module.dim(weight)
    if n == 0:
        return []
    columns = [dict() for _ in range(n)]
    for idx in range(1, weight + 1):
        for fam in (Family.X, Family.Y, Family.PHI, Family.PSI):
            mode = ModeKey(fam, 1, -idx)
            for i in range(n):
                _, img = module.apply_mode(mode, weight, {i: Fraction(1)})
                for j, v in img.items():
                    columns[i][(fam, idx, j)] = v
    kern = kernel_basis(columns, n_cols=n)
    return [{i: v for i, v in enumerate(vec) if v} for vec in kern]


@dataclass
class EpsilonReport:
    passed: bool
    details: dict

    def __bool__(self):
        return self.passed


def check_epsilon(base: ZeroModeModule, weight_cap: int) -> EpsilonReport:
    """Truncated check that induction from the singular vectors recovers M.

    For M = induce(N): the weight-0 singular vectors must span exactly N,
    there must be none in weights 1..cap, and the multiplication map from
    (free positive monomials) x (singular vectors) to M must be bijective
    weight by weight.
    """
    module = induce(base, weight_cap)
    details = {"weights": {}}
    ok = True
    sing0 = singular_vectors(module, 0)
    d0 = len(sing0)
    details["singular_dim_0"] = d0
    if d0 != base.dim:
        ok = False
    for q in range(1, weight_cap + 1):
        dq = len(singular_vectors(module, q))
        details["weights"][q] = {"singular_dim": dq}
        if dq != 0:
            ok = False
    # epsilon: positive monomials applied to weight-0 singular vectors
    for q in range(weight_cap + 1):
        cols = []
        for pos in _positive_monomials(q):
            for vec in sing0:
                w, cur = 0, dict(vec)
                for mode in reversed(pos):
                    w, cur = module.apply_mode(mode, w, cur)
                cols.append({j: v for j, v in cur.items()})
        r = rank(cols)
        full = module.dim(q)
        info = details["weights"].setdefault(q, {})
        info["epsilon_rank"] = r
        info["module_dim"] = full
        info["epsilon_cols"] = len(cols)
        if not (r == full == len(cols)):
            ok = False
    return EpsilonReport(ok, details)
