"""Command-line front end.

Input is one JSON document with a ``kind`` tag:

* ``polymatrix``: ``coeffs[i][row][col]`` with ``i`` the power of lambda.
* ``rationalmatrix``: ``num`` and ``den`` grids of ascending coefficient lists.
* ``pencil``: ``M`` and ``N`` for ``M - lam*N``.
* ``realization``: any of ``A, E, B, F, C, G, D, H`` (``E`` defaults to the
  identity, the rest to zero).
* ``polysystemmatrix``: ``T, U, V, W`` as coefficient arrays.

Optional top-level ``grade``, ``atol`` and ``rtol`` are used unless given
on the command line.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import analysis as an
from .errors import GradeTooSmall, RaggedGrid, StructureError
from .linearize import (PencilRealization, PolySystemMatrix, build_companion,
                        rm_linearize, spm_linearize)
from .oracle import ExactPolyMatrix, exact_smith
from .polymat import PolyMatrix, RationalMatrix
from .realize import lpsminreal, lsminreal

COMMANDS = ("kstruct", "eigvals", "zeros", "poles", "roots", "rank", "regular",
            "unimodular", "smith", "minindices", "linearize", "minreal")
KINDS = ("polymatrix", "rationalmatrix", "pencil", "realization", "polysystemmatrix")
DIGITS = 10

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3


class InputError(Exception):
    """Malformed input document or unsupported command for its kind."""


# ---------------------------------------------------------------------------
# loading

def _array3(x, name: str) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3:
        raise InputError(f"{name} must be a coefficient array coeff[i][row][col]")
    return a


def load_document(path: str) -> dict:
    """Parse an input file into a dict with the decoded payload under ``obj``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") not in KINDS:
        raise InputError(f"'kind' must be one of {', '.join(KINDS)}")
    kind = doc["kind"]
    try:
        if kind == "polymatrix":
            obj = PolyMatrix(_array3(doc["coeffs"], "coeffs"))
        elif kind == "rationalmatrix":
            obj = RationalMatrix(doc["num"], doc["den"])
        elif kind == "pencil":
            M = np.atleast_2d(np.asarray(doc["M"], dtype=float))
            N = np.atleast_2d(np.asarray(doc["N"], dtype=float))
            if M.shape != N.shape:
                raise InputError("M and N must have the same shape")
            obj = PolyMatrix(np.stack([M, -N]))
        elif kind == "realization":
            blocks = {k: doc[k] for k in "AEBFCGDH" if k in doc}
            obj = PencilRealization.build(**blocks)
        else:
            obj = PolySystemMatrix(*(PolyMatrix(_array3(doc[k], k)) for k in "TUVW"))
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    except (ValueError, TypeError, ZeroDivisionError, RaggedGrid) as exc:
        raise InputError(str(exc)) from exc
    return {"kind": kind, "obj": obj, "raw": doc}


# ---------------------------------------------------------------------------
# serialization

def _num(x: float) -> float:
    v = round(float(x), DIGITS)
    return v + 0.0  # no negative zero


def _value(v):
    v = complex(v)
    if v.imag == 0 or abs(v.imag) < 0.5 * 10 ** -DIGITS:
        return _num(v.real)
    return {"re": _num(v.real), "im": _num(v.imag)}


def _matrix(a) -> list:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return [[_value(x) for x in row] for row in a]
    return [[_num(x) for x in row] for row in a]


def _points(finite, infinite) -> list:
    out = [{"value": _value(v), "multiplicities": list(map(int, m))} for v, m in finite]
    if infinite:
        out.append({"value": "inf", "multiplicities": sorted(map(int, infinite))})
    return out


def _report_dict(rep: an.StructureReport, verbose: bool) -> dict:
    d = {
        "method": rep.method,
        "grade": rep.grade,
        "rank": rep.rank,
        "right_indices": list(rep.right_indices),
        "left_indices": list(rep.left_indices),
        "zeros": _points(rep.finite_zeros, rep.inf_zeros),
        "poles": _points(rep.finite_poles, rep.inf_poles),
        "infinite_structural_indices": list(rep.inf_indices),
        "infinite_multiplicities": list(rep.inf_mults) if rep.inf_mults is not None else None,
        "delta_fin": rep.delta_fin,
        "delta_inf": rep.delta_inf if rep.grade is not None else None,
        "mu": rep.mu,
        "zero_degree": rep.zero_degree,
        "mcmillan_degree": rep.pole_degree,
    }
    if verbose:
        d["finite_multiplicities_full"] = [
            {"value": _value(v), "multiplicities": [0] * (rep.rank - len(m)) + list(m)}
            for v, m in rep.finite_zeros]
        d["realization_order"] = rep.order
    return d


def _realization_dict(L: PencilRealization) -> dict:
    d = {"order": L.order, "descriptor": bool(L.is_descriptor)}
    for k in "AEBFCGDH":
        d[k] = _matrix(getattr(L, k))
    return d


def _fraction_str(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# text rendering

def _fmt_value(v) -> str:
    if isinstance(v, dict):
        sign = "+" if v["im"] >= 0 else "-"
        return f"{v['re']:g}{sign}{abs(v['im']):g}j"
    return f"{v:g}" if isinstance(v, float) else str(v)


def _fmt_points(points: list) -> str:
    fin = [p for p in points if p["value"] != "inf"]
    inf = [p for p in points if p["value"] == "inf"]
    head = "finite: " + (", ".join(
        f"{_fmt_value(p['value'])} (x{sum(p['multiplicities'])})" for p in fin) or "none")
    tail = "infinite: " + ("mult " + ", ".join(map(str, inf[0]["multiplicities"]))
                           if inf else "none")
    return f"{head}; {tail}"


def _fmt_partials(points: list) -> str:
    return ", ".join(f"{_fmt_value(p['value'])}: {p['multiplicities']}"
                     for p in points if p["value"] != "inf")


def render_text(command: str, payload: dict) -> str:
    lines = []
    for key, val in payload.items():
        if key in ("zeros", "poles"):
            line = _fmt_points(val)
            if key == "poles" and "mcmillan_degree" in payload:
                line += f"; McMillan degree {payload['mcmillan_degree']}"
            elif key == "zeros" and "zero_degree" in payload:
                line += f"; degree {payload['zero_degree']}"
            lines.append(line if command == key else f"{key}: {line}")
            partials = _fmt_partials(val)
            if partials:
                lines.append(f"{key} partial multiplicities: {partials}")
        elif key in ("mcmillan_degree", "zero_degree") and command in ("poles", "zeros"):
            continue
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.append(f"{key}:")
            lines.extend("  " + " ".join(_fmt_value(x) for x in row) for row in val)
        elif isinstance(val, list):
            lines.append(f"{key}: [" + ", ".join(_fmt_value(x) if not isinstance(x, dict)
                                                 or "value" not in x else
                                                 f"{_fmt_value(x['value'])}: {x['multiplicities']}"
                                                 for x in val) + "]")
        else:
            lines.append(f"{key}: {_fmt_value(val)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands

def _route(kind: str, via: str | None) -> str:
    if via is not None:
        return via
    return "cf1" if kind in ("polymatrix", "pencil") else "ls"


def _analyze(doc: dict, args) -> an.StructureReport:
    kind, obj = doc["kind"], doc["obj"]
    route = _route(kind, args.via)
    tol = dict(atol=args.atol, rtol=args.rtol)
    if kind in ("polymatrix", "pencil"):
        return an.pm_kstruct(obj, args.grade, route, **tol)
    if route in ("cf1", "cf2"):
        raise InputError(f"--via {route} applies to polynomial matrices only")
    if kind == "rationalmatrix":
        return an.rm_kstruct(obj, "descriptor_lin" if route == "ls" else "pencil_lin", **tol)
    if kind == "realization":
        return an.realization_kstruct(obj, True, **tol)
    L = spm_linearize(obj, "descriptor" if route == "ls" else "pencil", True, **tol)
    return an.realization_kstruct(L, False, **tol)


def _require_poly(doc: dict, command: str) -> PolyMatrix:
    if doc["kind"] not in ("polymatrix", "pencil"):
        raise InputError(f"'{command}' needs a polynomial matrix or pencil input")
    return doc["obj"]


def run_command(command: str, doc: dict, args) -> dict:
    kind, obj = doc["kind"], doc["obj"]
    tol = dict(atol=args.atol, rtol=args.rtol)
    out: dict = {"command": command, "kind": kind}
    if command == "kstruct":
        out.update(_report_dict(_analyze(doc, args), args.verbose))
    elif command in ("zeros", "poles", "minindices"):
        rep = _analyze(doc, args)
        out["method"] = rep.method
        if command == "zeros":
            out["zeros"] = _points(rep.finite_zeros, rep.inf_zeros)
            out["zero_degree"] = rep.zero_degree
        elif command == "poles":
            out["poles"] = _points(rep.finite_poles, rep.inf_poles)
            out["mcmillan_degree"] = rep.pole_degree
        else:
            out["right_indices"] = list(rep.right_indices)
            out["left_indices"] = list(rep.left_indices)
    elif command == "eigvals":
        rep = an.pm_kstruct(_require_poly(doc, command), args.grade,
                            _route(kind, args.via), **tol)
        out["grade"] = rep.grade
        out["finite"] = [{"value": _value(v), "multiplicities": list(m)}
                         for v, m in rep.finite_zeros]
        out["infinite_multiplicities"] = list(rep.inf_mults)
        out["delta_fin"] = rep.delta_fin
        out["delta_inf"] = rep.delta_inf
    elif command == "roots":
        P = _require_poly(doc, command)
        out["roots"] = [_value(v) for v in an.pm_roots(P, **tol)]
    elif command == "rank":
        if kind in ("polymatrix", "pencil"):
            out["rank"] = an.pm_rank(obj, **tol)
            if args.verbose:
                out["rank_by_evaluation"] = an.pm_rank(obj, "evaluation", seed=args.seed, **tol)
        else:
            out["rank"] = _analyze(doc, args).rank
    elif command == "regular":
        out["regular"] = an.is_pm_regular(_require_poly(doc, command), **tol)
    elif command == "unimodular":
        out["unimodular"] = an.is_pm_unimodular(_require_poly(doc, command), **tol)
    elif command == "smith":
        _require_poly(doc, command)
        raw = doc["raw"]
        if kind == "polymatrix":
            E = ExactPolyMatrix.from_coeffs(_exact_coeffs(raw["coeffs"]))
        else:
            M, N = _exact_coeffs([raw["M"]])[0], _exact_coeffs([raw["N"]])[0]
            E = ExactPolyMatrix.from_coeffs([M, [[-x for x in row] for row in N]])
        sm = exact_smith(E)
        out["rank"] = sm.rank
        out["invariant_polynomials"] = [[_fraction_str(c) for c in d.c]
                                        for d in sm.invariant_polys]
    elif command == "linearize":
        route = _route(kind, args.via)
        if route in ("cf1", "cf2"):
            P = _require_poly(doc, command)
            if args.grade is not None:
                P = P.with_grade(args.grade)
            C = build_companion(P, route.upper())
            out.update({"form": route, "M": _matrix(C.M), "N": _matrix(C.N)})
        else:
            out["form"] = route
            out.update(_realization_dict(_linearize(doc, route, False, tol)))
    elif command == "minreal":
        route = _route(kind, args.via)
        if kind == "realization":
            L = lsminreal(obj, **tol) if obj.is_descriptor else lpsminreal(obj, **tol)
        else:
            if route in ("cf1", "cf2"):
                route = "ls"
            L = _linearize(doc, route, True, tol)
        out["form"] = "ls" if L.is_descriptor else "lps"
        out.update(_realization_dict(L))
    return out


def _exact_coeffs(c):
    def conv(x):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError("coefficients must be numbers")
        return Fraction(x) if isinstance(x, int) else Fraction(repr(x))
    if c and not isinstance(c[0][0], list):
        c = [c]
    return [[[conv(x) for x in row] for row in Ci] for Ci in c]


def _linearize(doc: dict, route: str, minimal: bool, tol: dict) -> PencilRealization:
    kind, obj = doc["kind"], doc["obj"]
    form = "descriptor" if route == "ls" else "pencil"
    if kind == "realization":
        return obj
    if kind == "polysystemmatrix":
        return spm_linearize(obj, form, minimal, **tol)
    return rm_linearize(obj, form, minimal, **tol)


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polystruct",
                                description="Structural analysis of polynomial and "
                                            "rational matrices.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="JSON input document")
    p.add_argument("--grade", type=int, default=None)
    p.add_argument("--atol", type=float, default=None)
    p.add_argument("--rtol", type=float, default=None)
    p.add_argument("--via", choices=("cf1", "cf2", "ls", "lps"), default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        doc = load_document(args.input)
        raw = doc["raw"]
        if args.grade is None and "grade" in raw:
            args.grade = int(raw["grade"])
        if args.atol is None:
            args.atol = float(raw.get("atol", 0.0))
        if args.rtol is None and raw.get("rtol") is not None:
            args.rtol = float(raw["rtol"])
        payload = run_command(args.command, doc, args)
    except (InputError, GradeTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(args.command, payload))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
