"""Batch front-end: JSON problem specs in, machine-readable results out.

Exit codes: 0 = computation ran and every requested check passed; 1 = the
computation ran but a check failed (a witness is included in the payload);
2 = invalid input.  All emitted numbers are integers or decimal-string
rationals, and rerunning the same spec produces a byte-identical payload
section regardless of --threads.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .charges import (
    Potential,
    StructureConstants,
    check_anticommute,
    check_nilpotent,
    chiral_de_rham,
    combine,
    default_torus_weights,
    lie_charge,
    potential_charge,
)
from .cohomology import CohomologyError, chi_van, cohomology_dims, euler_series
from .field import residue_charge
from .fock import (
    Family,
    FockError,
    ModeKey,
    Side,
    State,
    TorusWeights,
    UnboundedBasisError,
    enumerate_basis,
    make_space,
    normalize,
)
from .modfun import (
    ModuleError,
    check_epsilon,
    delta_zero_modes,
    induce,
    polynomial_zero_modes,
    singular_vectors,
    zero_modes_from_json,
)
from .oper import apply_terms, instantiate_charge
from .qseries import SeriesError, chi_closed_form, compare

# Fixed conventions the numbers depend on; hashed into every result document
# so downstream comparisons can detect a convention drift.
_CONVENTIONS = "\n".join(
    [
        "mode order: family x < y < psi < phi, then direction, then index",
        "creators theta: x>=0 y>=1 psi>=0 phi>=1; omega: x>=0 y>=1 phi>=0 psi>=1",
        "annihilators: y_{-m}=+d/dx_m, x_{-m}=-d/dy_m, phi_{-m}=+d/dpsi_m, psi_{-m}=+d/dphi_m",
        "field modes: a(z) = sum_n a_(n) z^n with a_(n) raising weight by wt(a)+n",
        "theta product: prod_{n>=0} (1-q^n z)(1-q^{n+1}/z); 1/(1-z) expands in z>=0",
    ]
)
LEDGER_HASH = hashlib.sha256(_CONVENTIONS.encode()).hexdigest()


class SpecError(ValueError):
    """Invalid problem spec; the message names the offending field."""


def _field(doc, key, typ, where, required=True, default=None):
    if key not in doc:
        if required:
            raise SpecError(f"{where}: missing required field '{key}'")
        return default
    val = doc[key]
    if typ is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise SpecError(f"{where}.{key}: expected integer, got {val!r}")
    elif not isinstance(val, typ):
        raise SpecError(f"{where}.{key}: expected {typ.__name__}, got {val!r}")
    return val


def _fraction(val, where):
    try:
        if isinstance(val, float):
            raise ValueError("floats are not exact")
        return Fraction(str(val))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: not an exact rational: {val!r} ({exc})")


class ProblemSpec:
    """Validated problem description parsed from the spec JSON file."""

    def __init__(self, doc: dict, validate_lie: bool = True):
        if not isinstance(doc, dict):
            raise SpecError("spec root: expected a JSON object")
        self.doc = doc
        self.dim = _field(doc, "dim", int, "spec")
        if self.dim < 1:
            raise SpecError("spec.dim: must be >= 1")
        side = _field(doc, "side", str, "spec", required=False, default="theta")
        try:
            self.side = Side(side)
        except ValueError:
            raise SpecError(f"spec.side: expected 'theta' or 'omega', got {side!r}")

        self.potential = None
        if "potential" in doc:
            pot = _field(doc, "potential", dict, "spec")
            terms = _field(pot, "terms", list, "spec.potential")
            parsed = []
            for i, term in enumerate(terms):
                where = f"spec.potential.terms[{i}]"
                if not isinstance(term, dict):
                    raise SpecError(f"{where}: expected an object")
                coeff = _fraction(_field(term, "coeff", object, where), where + ".coeff")
                exps = _field(term, "exps", list, where)
                if len(exps) != self.dim or not all(
                    isinstance(e, int) and not isinstance(e, bool) and e >= 0
                    for e in exps
                ):
                    raise SpecError(
                        f"{where}.exps: expected {self.dim} nonnegative integers"
                    )
                parsed.append((coeff, tuple(exps)))
            try:
                self.potential = Potential.from_terms(self.dim, parsed)
            except FockError as exc:
                raise SpecError(f"spec.potential: {exc}")

        self.lie = None
        if "lie" in doc:
            lie = _field(doc, "lie", dict, "spec")
            n = _field(lie, "dim", int, "spec.lie")
            entries = []
            for i, row in enumerate(_field(lie, "c", list, "spec.lie")):
                where = f"spec.lie.c[{i}]"
                if not (isinstance(row, list) and len(row) == 4):
                    raise SpecError(f"{where}: expected [k, i, j, value]")
                k, a, b = row[:3]
                for name, v in (("k", k), ("i", a), ("j", b)):
                    if not isinstance(v, int) or not 1 <= v <= n:
                        raise SpecError(f"{where}.{name}: index out of 1..{n}")
                entries.append((k, a, b, _fraction(row[3], where + ".value")))
            if n != self.dim:
                raise SpecError("spec.lie.dim: must equal spec.dim")
            try:
                self.lie = StructureConstants.from_entries(
                    n, entries, validate=validate_lie
                )
            except FockError as exc:
                raise SpecError(f"spec.lie: {exc}")

        if self.potential is not None and self.lie is not None:
            raise SpecError("spec: give at most one of 'potential' and 'lie'")

        self.torus_weights = None
        if "torus_weights" in doc:
            tw = _field(doc, "torus_weights", dict, "spec")
            wx = _field(tw, "x", list, "spec.torus_weights")
            wphi = _field(tw, "phi", list, "spec.torus_weights")
            wpsi = _field(
                tw, "psi", list, "spec.torus_weights",
                required=False, default=[-a for a in wphi],
            )
            for name, vec in (("x", wx), ("phi", wphi), ("psi", wpsi)):
                if len(vec) != self.dim or not all(isinstance(v, int) for v in vec):
                    raise SpecError(
                        f"spec.torus_weights.{name}: expected {self.dim} integers"
                    )
            try:
                self.torus_weights = TorusWeights(tuple(wx), tuple(wphi), tuple(wpsi))
            except FockError as exc:
                raise SpecError(f"spec.torus_weights: {exc}")

        caps = _field(doc, "caps", dict, "spec", required=False, default={})
        self.weight_max = _field(caps, "weight_max", int, "spec.caps", False, 4)
        self.x0_cap = _field(caps, "x0_cap", int, "spec.caps", False, None)
        self.q_max = _field(caps, "q_max", int, "spec.caps", False, self.weight_max)
        zw = _field(caps, "z_window", list, "spec.caps", False, None)
        if zw is not None:
            if len(zw) != 2 or not all(isinstance(v, int) for v in zw) or zw[0] > zw[1]:
                raise SpecError("spec.caps.z_window: expected [lo, hi] with lo <= hi")
            zw = tuple(zw)
        self.z_window = zw
        for name, val in (("weight_max", self.weight_max), ("q_max", self.q_max)):
            if val < 0:
                raise SpecError(f"spec.caps.{name}: must be >= 0")
        if self.x0_cap is not None and self.x0_cap < 0:
            raise SpecError("spec.caps.x0_cap: must be >= 0")

        self.zero_modes = doc.get("zero_modes")

    # -- derived objects -------------------------------------------------------

    def space(self):
        return make_space(self.side, self.dim)

    def default_weights(self) -> TorusWeights:
        if self.torus_weights is not None:
            return self.torus_weights
        if self.potential is not None:
            return default_torus_weights(self.potential)
        raise SpecError("spec: need torus_weights or a potential to derive them")

    def charge(self):
        if self.lie is not None:
            if self.side is not Side.THETA:
                raise SpecError("spec.side: the Lie charge lives on the theta side")
            return lie_charge(self.lie)
        if self.potential is not None:
            tw = potential_charge(self.potential, self.side)
            if self.side is Side.OMEGA:
                return combine(chiral_de_rham(self.dim), tw)
            return tw
        if self.side is Side.OMEGA:
            return chiral_de_rham(self.dim)
        raise SpecError("spec: no differential (need potential, lie, or side=omega)")

    def zero_mode_module(self):
        zm = self.zero_modes
        if zm is None:
            raise SpecError("spec: missing 'zero_modes' for this command")
        if not isinstance(zm, dict):
            raise SpecError("spec.zero_modes: expected an object")
        if "builtin" in zm:
            cap = _field(zm, "cap", int, "spec.zero_modes", False, 2)
            name = zm["builtin"]
            if name == "polynomial":
                return polynomial_zero_modes(cap)
            if name == "delta":
                return delta_zero_modes(cap)
            raise SpecError(
                f"spec.zero_modes.builtin: expected 'polynomial' or 'delta', got {name!r}"
            )
        try:
            return zero_modes_from_json(zm)
        except (ModuleError, ValueError) as exc:
            raise SpecError(f"spec.zero_modes: {exc}")


# -- payload helpers -----------------------------------------------------------


def _state_json(space, state):
    return [
        [str(c), mono.text(space.dim)]
        for mono, c in sorted(state.terms.items(), key=lambda kv: kv[0].sort_key())
    ]


def _table_json(table):
    return {
        "dims": {f"{q},{k}": v for (q, k), v in sorted(table.dims.items())},
        "stabilization": {str(q): bool(ok) for q, ok in sorted(table.stabilization.items())},
        "euler": {
            str(q): table.euler(q)
            for q in sorted({q for q, _ in table.dims})
        },
        "metadata": table.metadata,
    }


def _table_csv(table) -> str:
    lines = ["weight,degree,dim,stable"]
    for (q, k), v in sorted(table.dims.items()):
        lines.append(f"{q},{k},{v},{int(table.stabilization.get(q, True))}")
    return "\n".join(lines) + "\n"


def _series_csv(series, zwindow) -> str:
    lines = ["q,z,coeff"]
    doc = series.to_json_dict(zwindow)
    for j, row in doc["rows"].items():
        for e, v in row.items():
            lines.append(f"{j},{e},{v}")
    return "\n".join(lines) + "\n"


# -- commands -------------------------------------------------------------------


def cmd_basis(spec: ProblemSpec):
    space = spec.space()
    dims = {}
    for q in range(spec.weight_max + 1):
        if spec.x0_cap is not None:
            basis = enumerate_basis(space, q, x0_cap=spec.x0_cap)
            for mono in basis:
                key = (q, mono.degree)
                dims[key] = dims.get(key, 0) + 1
        else:
            tw = spec.default_weights()
            lo, hi = spec.z_window or (-2 * spec.weight_max - 2, spec.weight_max + 2)
            for t in range(lo, hi + 1):
                for mono in enumerate_basis(space, q, torus=t, torus_weights=tw):
                    key = (q, mono.degree)
                    dims[key] = dims.get(key, 0) + 1
    payload = {
        "dims": {f"{q},{k}": v for (q, k), v in sorted(dims.items())},
        "regularization": "x0_cap" if spec.x0_cap is not None else "torus",
    }
    return payload, 0, None


def cmd_char(spec: ProblemSpec):
    space = spec.space()
    tw = spec.default_weights()
    zwindow = spec.z_window
    if zwindow is None:
        raise SpecError("spec.caps.z_window: required for 'char'")
    series = euler_series(space, spec.q_max, zwindow, tw)
    return {"series": series.to_json_dict(zwindow)}, 0, series


def cmd_theta_check(spec: ProblemSpec):
    if spec.potential is None:
        raise SpecError("spec.potential: required for 'theta-check'")
    d = spec.potential.quasi_degree((1,) * spec.dim) - 1
    if d < 1:
        raise SpecError("spec.potential: degree must be >= 2 for the theta oracle")
    payload, _, series = cmd_char(spec)
    oracle = chi_closed_form(d, spec.q_max, spec.z_window)
    report = compare(series, oracle, zwindow=spec.z_window, qmax=spec.q_max)
    payload["oracle"] = oracle.to_json_dict(spec.z_window)
    payload["equal"] = bool(report)
    if not report:
        j, e, va, vb = report.first_mismatch
        payload["witness"] = {"q": j, "z": e, "computed": str(va), "oracle": str(vb)}
    return payload, 0 if report else 1, None


def cmd_cohomology(spec: ProblemSpec):
    space = spec.space()
    charge = spec.charge()
    kwargs = {}
    if spec.torus_weights is not None and spec.z_window is not None:
        kwargs = {"torus_weights": spec.torus_weights, "torus_window": spec.z_window}
    elif spec.x0_cap is not None:
        kwargs = {"x0_cap": spec.x0_cap}
    else:
        raise SpecError(
            "spec.caps: need x0_cap, or torus_weights with z_window, for 'cohomology'"
        )
    table = cohomology_dims(charge, space, spec.weight_max, **kwargs)
    code = 0 if all(table.stabilization.values()) else 1
    return {"table": _table_json(table)}, code, table


def cmd_chi_van(spec: ProblemSpec, oracle: str):
    space = spec.space()
    charge = spec.charge()
    kwargs = {}
    if spec.torus_weights is not None and spec.z_window is not None:
        kwargs = {"torus_weights": spec.torus_weights, "torus_window": spec.z_window}
    elif spec.x0_cap is not None:
        kwargs = {"x0_cap": spec.x0_cap}
    else:
        raise SpecError(
            "spec.caps: need x0_cap, or torus_weights with z_window, for 'chi-van'"
        )
    series, table = chi_van(
        charge, space, spec.weight_max, require_stable=False, **kwargs
    )
    payload = {
        "series": series.to_json_dict((0, 0)),
        "table": _table_json(table),
    }
    code = 0 if all(table.stabilization.values()) else 1
    if oracle == "theta":
        if spec.potential is None:
            raise SpecError("spec.potential: required for the theta oracle")
        d = spec.potential.quasi_degree((1,) * spec.dim) - 1
        oracle_series = chi_closed_form(d, spec.weight_max, (-(d + 1), 1))
        # z-collapse of the oracle: total Euler number per q row
        collapsed = {
            j: sum(oracle_series.rows.get(j, {}).values())
            for j in range(spec.weight_max + 1)
        }
        mism = [
            (j, series.rows.get(j, {}).get(0, 0), collapsed[j])
            for j in range(spec.weight_max + 1)
            if series.rows.get(j, {}).get(0, 0) != collapsed[j]
        ]
        payload["oracle_rows"] = {str(j): v for j, v in collapsed.items()}
        if mism:
            j, got, want = mism[0]
            payload["witness"] = {"q": j, "computed": got, "oracle": want}
            code = 1
    return payload, code, table


def cmd_nilpotency(spec: ProblemSpec):
    # The spec is parsed with validate_lie=False for this command, so a
    # Jacobi-violating tensor reaches the operator check and is witnessed
    # there instead of being rejected as an invalid spec.
    space = spec.space()
    charge = spec.charge()
    cap = spec.x0_cap if spec.x0_cap is not None else 2
    report = check_nilpotent(charge, space, spec.weight_max, x0_cap=cap)
    payload = {"nilpotent": bool(report)}
    if not report:
        payload["witness"] = {
            "state": report.witness.text(space.dim),
            "square": _state_json(space, report.image),
        }
    return payload, 0 if report else 1, None


def cmd_anticommute(spec: ProblemSpec):
    if spec.potential is None:
        raise SpecError("spec.potential: required for 'anticommute'")
    if spec.side is not Side.OMEGA:
        raise SpecError("spec.side: 'anticommute' compares charges on the omega side")
    space = spec.space()
    c1 = chiral_de_rham(spec.dim)
    c2 = potential_charge(spec.potential, Side.OMEGA)
    cap = spec.x0_cap if spec.x0_cap is not None else 2
    report = check_anticommute(c1, c2, space, spec.weight_max, x0_cap=cap)
    payload = {"anticommute": bool(report)}
    if not report:
        payload["witness"] = {
            "state": report.witness.text(space.dim),
            "bracket": _state_json(space, report.image),
        }
    return payload, 0 if report else 1, None


def _brst_vector(spec: ProblemSpec, space):
    """The defining weight-1 vector of the spec's differential."""
    if spec.potential is not None and spec.side is Side.THETA:
        out = State.zero()
        for j in range(1, spec.dim + 1):
            for coeff, exps in spec.potential.partial(j - 1):
                modes = [ModeKey(Family.PHI, j, 1)]
                for direction in range(1, spec.dim + 1):
                    modes.extend(
                        [ModeKey(Family.X, direction, 0)] * exps[direction - 1]
                    )
                out = out + normalize(space, modes, coeff)
        return out
    if spec.side is Side.OMEGA and spec.potential is None:
        out = State.zero()
        for j in range(1, spec.dim + 1):
            out = out + normalize(
                space, (ModeKey(Family.Y, j, 1), ModeKey(Family.PHI, j, 0))
            )
        return out
    raise SpecError(
        "spec: 'reconstruct-check' needs a theta-side potential or a bare omega side"
    )


def cmd_reconstruct_check(spec: ProblemSpec):
    space = spec.space()
    charge = spec.charge()
    brst = residue_charge(space, _brst_vector(spec, space))
    cap = spec.x0_cap if spec.x0_cap is not None else 2
    terms = instantiate_charge(charge, space, spec.weight_max)
    for q in range(spec.weight_max + 1):
        for mono in enumerate_basis(space, q, x0_cap=cap):
            v = State.of(mono)
            via_field = brst(v)
            via_charge = apply_terms(space, terms, v)
            if via_field != via_charge:
                return (
                    {
                        "agrees": False,
                        "witness": {
                            "state": mono.text(space.dim),
                            "field_mode": _state_json(space, via_field),
                            "charge": _state_json(space, via_charge),
                        },
                    },
                    1,
                    None,
                )
    return {"agrees": True, "weight_max": spec.weight_max}, 0, None


def cmd_singular(spec: ProblemSpec):
    base = spec.zero_mode_module()
    module = induce(base, spec.weight_max)
    dims = {}
    for q in range(spec.weight_max + 1):
        dims[str(q)] = len(singular_vectors(module, q))
    expected = dims["0"] == base.dim and all(
        v == 0 for q, v in dims.items() if q != "0"
    )
    payload = {
        "singular_dims": dims,
        "base_dim": base.dim,
        "induced_recovers_base": expected,
    }
    return payload, 0 if expected else 1, None


def cmd_epsilon_check(spec: ProblemSpec):
    base = spec.zero_mode_module()
    report = check_epsilon(base, spec.weight_max)
    payload = {"passed": bool(report), "details": report.details}
    return payload, 0 if report else 1, None


_COMMANDS = (
    "basis",
    "char",
    "theta-check",
    "cohomology",
    "chi-van",
    "nilpotency",
    "anticommute",
    "reconstruct-check",
    "singular",
    "epsilon-check",
)


def _dispatch(command: str, spec: ProblemSpec, oracle: str):
    if command == "basis":
        return cmd_basis(spec)
    if command == "char":
        payload, code, _ = cmd_char(spec)
        return payload, code, None
    if command == "theta-check":
        return cmd_theta_check(spec)
    if command == "cohomology":
        return cmd_cohomology(spec)
    if command == "chi-van":
        return cmd_chi_van(spec, oracle)
    if command == "nilpotency":
        return cmd_nilpotency(spec)
    if command == "anticommute":
        return cmd_anticommute(spec)
    if command == "reconstruct-check":
        return cmd_reconstruct_check(spec)
    if command == "singular":
        return cmd_singular(spec)
    if command == "epsilon-check":
        return cmd_epsilon_check(spec)
    raise SpecError(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chiralg",
        description="Exact chiral characters and BRST cohomology at desk scale.",
    )
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--spec", required=True, help="path to the problem spec JSON")
    parser.add_argument("--out", default=None, help="write the result document here")
    parser.add_argument("--oracle", choices=["theta", "none"], default="none")
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="bigrade parallelism; the payload is identical for any value",
    )
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    args = parser.parse_args(argv)

    try:
        with open(args.spec) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read spec: {exc}", file=sys.stderr)
        return 2
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2

    start = time.monotonic()
    try:
        spec = ProblemSpec(doc, validate_lie=(args.command != "nilpotency"))
        payload, code, extra = _dispatch(args.command, spec, args.oracle)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FockError, SeriesError, CohomologyError, ModuleError, UnboundedBasisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = int((time.monotonic() - start) * 1000)

    if args.format == "csv" and extra is not None and hasattr(extra, "dims"):
        text = _table_csv(extra)
    elif args.format == "csv" and extra is not None:
        text = _series_csv(extra, spec.z_window)
    else:
        result = {
            "command": args.command,
            "spec": doc,
            "payload": payload,
            "exit_code": code,
            "timing_ms": elapsed_ms,
            "version": __version__,
            "conventions_sha256": LEDGER_HASH,
        }
        text = json.dumps(result, sort_keys=True, indent=2) + "\n"

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
