"""Command-line front end.

Exit codes: 0 all checks certified, 2 verification failure, 3 inconclusive
certificate, 4 invalid input.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import boxspline as bs
from .certify import InconclusiveCertificate
from .laurent import VARIABLE_NAMES, LaurentPoly
from .prewavelet import (
    SingularBasisError,
    construct_family,
    support_stats,
    symmetry_orbits,
    valpha_pathway,
    verify_basis,
    verify_orthogonality,
)
from .render import dump_family, load_family, mask_name, render_matrix

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_INCONCLUSIVE = 3
EXIT_INPUT = 4


class InputError(Exception):
    pass


def _source(args):
    if args.preset and args.matrix:
        raise InputError("give either a preset name or --matrix, not both")
    if args.matrix:
        try:
            return bs.DirectionMatrix.parse(args.matrix)
        except ValueError as exc:
            raise InputError(f"invalid direction matrix: {exc}") from None
    if not args.preset:
        raise InputError("a preset name or --matrix is required")
    try:
        return bs.get_preset(args.preset)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


def _matrix_of(src) -> bs.DirectionMatrix:
    return src.matrix if isinstance(src, bs.Preset) else src


def _pivot(text: Optional[str]):
    if text is None:
        return None
    bits = text.replace(",", "").replace(" ", "")
    if not bits or set(bits) - {"0", "1"}:
        raise InputError(f"pivot must be a bit string such as 11, got {text!r}")
    return tuple(int(b) for b in bits)


def _names(d: int):
    return VARIABLE_NAMES.get(d)


def _out(lines: List[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _phi(src) -> LaurentPoly:
    try:
        return bs.autocorrelation_phi(_matrix_of(src))
    except bs.NotUnimodularError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_presets(args) -> int:
    lines = []
    for p in bs.PRESETS.values():
        lines.append(f"{p.name:15s} [{p.matrix}]  pivot {''.join(map(str, p.pivot))}  {p.description}")
    _out(lines)
    return EXIT_OK


def cmd_phi(args) -> int:
    src = _source(args)
    xi = _matrix_of(src)
    Phi = _phi(src)
    den = Phi.denominators_lcm()
    lines = [f"Phi for [{xi}]: {len(Phi)} terms, common denominator {den}"]
    for k, c in Phi.sorted_terms():
        lines.append(f"  {' '.join(f'{v:3d}' for v in k)}   {Fraction(c)}")
    at_one = Phi.value_at_one()
    symmetric = Phi.conjugate() == Phi
    shift = bs.center_shift(xi)
    dbl = xi.doubled()
    worst = 0.0
    for k, c in Phi.items():
        # nudge off the knot planes; the doubled box spline is continuous there
        x = [a + b + 1e-9 * (i + 1) * 0.7071 for i, (a, b) in enumerate(zip(k, shift))]
        worst = max(worst, abs(bs.numeric_box_spline_eval(dbl, x) - float(c)))
    ok_oracle = worst < 1e-8
    lines += [
        f"Phi(1,...,1) = {at_one}",
        f"conjugate symmetric: {'yes' if symmetric else 'no'}",
        f"numeric oracle max deviation: {worst:.3e} ({'ok' if ok_oracle else 'FAIL'})",
    ]
    _out(lines)
    return EXIT_OK if at_one == 1 and symmetric and ok_oracle else EXIT_VERIFY


def _family_lines(fam) -> List[str]:
    names = _names(fam.d)
    lines = [
        f"direction matrix: [{fam.xi}]" if fam.xi is not None else f"dimension: {fam.d}",
        f"scale c = {fam.c}",
        f"pivot s0 = {fam.s0}",
    ]
    if fam.pivot_certificate is not None:
        lines.append(f"pivot certificate: {fam.pivot_certificate.summary()}")
    sizes, N = support_stats(fam)
    for s, m in fam.masks.items():
        lines.append("")
        lines.append(f"{mask_name(s)}  (|supp| = {sizes[s]})")
        lines.append(render_matrix(m).rstrip("\n"))
        if fam.d <= 3 and len(m) <= 12:
            lines.append(f"  = {m.to_string(names)}")
    lines.append("")
    lines.append("supports: " + ", ".join(f"{mask_name(s)}={n}" for s, n in sizes.items()))
    lines.append(f"N = {N}")
    return lines


def _verify_lines(fam, grid_cap) -> (List[str], int):
    lines = []
    report = verify_orthogonality(fam)
    if not report.ok:
        for s, r in report.failures.items():
            shown = r.to_string(_names(fam.d)) if len(r) <= 6 else f"{len(r)} nonzero terms"
            lines.append(f"orthogonality FAILED for {mask_name(s)}: residual {shown}")
        return lines, EXIT_VERIFY
    lines.append(f"orthogonality: <H, H_s>_Phi = 0 and rho_U(H_s) = 0 for all {len(fam.masks)} masks")
    try:
        basis = verify_basis(fam, grid_cap)
    except SingularBasisError as exc:
        lines.append(f"basis check FAILED: {exc}")
        return lines, EXIT_VERIFY
    except InconclusiveCertificate as exc:
        lines.append(f"basis check INCONCLUSIVE: {exc}")
        return lines, EXIT_INCONCLUSIVE
    lines.append(f"basis determinant: {len(basis.det)} terms, {basis.certificate.summary()}")
    return lines, EXIT_OK


def cmd_construct(args) -> int:
    src = _source(args)
    pivot = _pivot(args.pivot)
    try:
        fam = construct_family(src, pivot=pivot, grid_cap=args.grid_cap, verify=False)
    except bs.NotUnimodularError as exc:
        raise InputError(str(exc)) from None
    lines = _family_lines(fam)
    vlines, code = _verify_lines(fam, args.grid_cap)
    lines += vlines
    orbits = symmetry_orbits(fam) if code == EXIT_OK else None
    if orbits is not None:
        lines.append("symmetry orbits: " + " | ".join(
            "{" + ", ".join(mask_name(s) for s in o) + "}" for o in orbits.orbits))
    elif code == EXIT_OK:
        lines.append("symmetry orbits: not reported (hypotheses not met)")
    _out(lines)
    if args.json and code == EXIT_OK:
        dump_family(fam, args.json)
    return code


def cmd_export(args) -> int:
    path = args.path or args.json
    if not path:
        raise InputError("export needs an output path")
    src = _source(args)
    try:
        fam = construct_family(src, pivot=_pivot(args.pivot), grid_cap=args.grid_cap)
    except bs.NotUnimodularError as exc:
        raise InputError(str(exc)) from None
    dump_family(fam, path)
    _out([f"wrote {path}: d={fam.d}, c={fam.c}, pivot {fam.s0}, N={fam.N}"])
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        fam = load_family(args.path)
    except OSError as exc:
        raise InputError(f"cannot read {args.path}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    lines = [f"family from {args.path}: d={fam.H.dim}, c={fam.c}, pivot {fam.s0}, N={fam.N}"]
    if fam.U != fam.H * fam.Phi * fam.c:
        lines.append("consistency FAILED: U != c H Phi")
        _out(lines)
        return EXIT_VERIFY
    lines.append("consistency: U = c H Phi")
    vlines, code = _verify_lines(fam, args.grid_cap)
    _out(lines + vlines)
    return code


def cmd_valpha(args) -> int:
    if args.matrix and args.preset and args.alpha_pos is None:
        # "valpha --matrix ... 1/2": the lone positional is the alpha
        args.preset, args.alpha_pos = None, args.preset
    src = _source(args)
    xi = _matrix_of(src)
    try:
        alpha = Fraction(args.alpha_pos if args.alpha_pos is not None else args.alpha)
    except (ValueError, ZeroDivisionError):
        raise InputError("alpha must be a rational number such as 1 or 1/2") from None
    if alpha <= 0:
        raise InputError("alpha must be positive")
    Phi = _phi(src)
    va = valpha_pathway(xi, Phi, alpha, grid_cap=args.grid_cap)
    lines = [
        f"V_alpha pathway for [{xi}]",
        f"alpha = {va.alpha} (after {va.attempts} attempt(s))",
        f"d0 certificate: {va.d0_certificate.summary()}",
        "supports: " + ", ".join(f"{mask_name(s)}={n}" for s, n in va.supports.items()),
        f"N (V_alpha) = {va.N}",
    ]
    vlines, code = _verify_lines(va, args.grid_cap)
    lines += vlines
    try:
        fam = construct_family(src, grid_cap=args.grid_cap, verify=False)
        lines.append(f"N (pivot route, s0 = {fam.s0}) = {fam.N}")
        smaller = "pivot route" if fam.N < va.N else "V_alpha route" if va.N < fam.N else "neither"
        lines.append(f"smaller total support: {smaller}")
    except InconclusiveCertificate:
        lines.append("pivot route: no certifiable pivot")
    _out(lines)
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prewavelets", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp):
        sp.add_argument("preset", nargs="?", help="preset name (see 'presets')")
        sp.add_argument("--matrix", help='direction matrix rows separated by ";", e.g. "1 0 1;0 1 1"')

    def cap(sp):
        sp.add_argument("--grid-cap", type=int, default=None, help="maximum grid points per axis")

    sp = sub.add_parser("presets", help="list the built-in direction matrices")
    sp.set_defaults(func=cmd_presets)

    sp = sub.add_parser("phi", help="exact autocorrelation symbol")
    source(sp)
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("construct", help="construct and verify prewavelet masks")
    source(sp)
    cap(sp)
    sp.add_argument("--pivot", help="preferred pivot coset index, e.g. 11")
    sp.add_argument("--json", help="also write the family to this JSON file")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("export", help="construct, verify and write a family as JSON")
    source(sp)
    cap(sp)
    sp.add_argument("path", nargs="?", help="output file")
    sp.add_argument("--pivot")
    sp.add_argument("--json", help="output file (alternative to the positional path)")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("verify", help="re-check an exported family")
    sp.add_argument("path")
    cap(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("valpha", help="V_alpha construction compared with the pivot route")
    source(sp)
    cap(sp)
    sp.add_argument("alpha_pos", nargs="?", metavar="alpha", help="starting alpha")
    sp.add_argument("--alpha", default="1", help="starting alpha (default 1)")
    sp.set_defaults(func=cmd_valpha)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except InconclusiveCertificate as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
