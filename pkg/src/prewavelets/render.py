"""Coefficient-matrix rendering and JSON serialisation of mask families.

Matrix layout: the x exponent increases left to right, the y exponent bottom
to top, and the cell of the constant monomial is wrapped in brackets.  The
box is the bounding box of the support together with the origin.  Trivariate
polynomials are shown as one matrix per nonempty z power, ascending, each
headed by a ``z^k:`` line.  Univariate polynomials render as a single row.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .laurent import LaurentPoly

__all__ = [
    "render_matrix",
    "parse_matrix",
    "format_coefficient",
    "family_to_json",
    "family_from_json",
    "dump_family",
    "load_family",
]


def format_coefficient(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_2d(terms: Dict[Tuple[int, int], Fraction]) -> List[str]:
    xs = [k[0] for k in terms] + [0]
    ys = [k[1] for k in terms] + [0]
    lines = []
    for y in range(max(ys), min(ys) - 1, -1):
        cells = []
        for x in range(min(xs), max(xs) + 1):
            s = format_coefficient(terms.get((x, y), 0))
            cells.append(f"[{s}]" if (x, y) == (0, 0) else s)
        lines.append(" ".join(cells))
    return lines


def render_matrix(P: LaurentPoly) -> str:
    """Render ``P`` in the coefficient-matrix layout (LF line endings, trailing newline)."""
    d = P.dim
    if d == 1:
        return "\n".join(_render_2d({(k[0], 0): c for k, c in P.items()})) + "\n"
    if d == 2:
        return "\n".join(_render_2d(dict(P.items()))) + "\n"
    if d == 3:
        slices: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
        for k, c in P.items():
            slices.setdefault(k[2], {})[(k[0], k[1])] = c
        lines = []
        for z in sorted(slices):
            lines.append(f"z^{z}:")
            lines.extend(_render_2d(slices[z]))
        return "\n".join(lines) + "\n"
    raise ValueError("matrix rendering supports d <= 3")


def _parse_block(rows: List[str]) -> Dict[Tuple[int, int], Fraction]:
    grid = [r.split() for r in rows]
    origin = [(i, j) for i, r in enumerate(grid) for j, cell in enumerate(r) if cell.startswith("[")]
    if len(origin) != 1:
        raise ValueError("expected exactly one bracketed origin cell")
    oi, oj = origin[0]
    if len({len(r) for r in grid}) != 1:
        raise ValueError("ragged coefficient matrix")
    out = {}
    for i, r in enumerate(grid):
        for j, cell in enumerate(r):
            v = Fraction(cell.strip("[]"))
            if v:
                out[(j - oj, oi - i)] = v
    return out


def parse_matrix(text: str, dim: int) -> LaurentPoly:
    """Inverse of :func:`render_matrix`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if dim in (1, 2):
        terms = _parse_block(lines)
        if dim == 1:
            if any(y for _, y in terms):
                raise ValueError("univariate matrix must have a single row")
            return LaurentPoly(1, {(x,): c for (x, _), c in terms.items()})
        return LaurentPoly(2, terms)
    if dim == 3:
        terms = {}
        z: Optional[int] = None
        block: List[str] = []

        def flush():
            if z is not None:
                for (x, y), c in _parse_block(block).items():
                    terms[(x, y, z)] = c

        for ln in lines:
            if ln.startswith("z^") and ln.endswith(":"):
                flush()
                z, block = int(ln[2:-1]), []
            else:
                block.append(ln)
        flush()
        return LaurentPoly(3, terms)
    raise ValueError("matrix rendering supports d <= 3")


# ---------------------------------------------------------------------------
# JSON


def _poly_to_json(P: LaurentPoly) -> list:
    out = []
    for k, c in P.sorted_terms():
        c = Fraction(c)
        out.append({"exp": list(k), "num": str(c.numerator), "den": str(c.denominator)})
    return out


def _poly_from_json(items: list, dim: int) -> LaurentPoly:
    terms = {}
    for t in items:
        exp = tuple(int(v) for v in t["exp"])
        if len(exp) != dim:
            raise ValueError(f"exponent {exp} does not have length {dim}")
        if exp in terms:
            raise ValueError(f"duplicate exponent {exp}")
        terms[exp] = Fraction(int(t["num"]), int(t["den"]))
    return LaurentPoly(dim, terms)


def mask_name(s) -> str:
    return "H_" + "".join(str(v) for v in s)


def family_to_json(family) -> dict:
    """Serialise ``H``, ``Phi``, ``U`` and the masks with exact string coefficients."""
    polys = {"H": family.H, "Phi": family.Phi, "U": family.U}
    for s, m in sorted(family.masks.items()):
        polys[mask_name(s)] = m
    return {
        "dimension": family.H.dim,
        "scale_c": str(family.c),
        "pivot": list(family.s0),
        "polynomials": {name: _poly_to_json(P) for name, P in polys.items()},
    }


class LoadedFamily:
    """A family read back from JSON; carries just what verification needs."""

    def __init__(self, d, c, s0, H, Phi, U, masks):
        self.xi = None
        self.c, self.s0 = c, s0
        self.H, self.Phi, self.U, self.masks = H, Phi, U, masks

    @property
    def d(self):
        return self.H.dim

    @property
    def supports(self):
        return {s: len(m) for s, m in self.masks.items()}

    @property
    def N(self):
        return sum(self.supports.values())


def family_from_json(data: dict) -> LoadedFamily:
    """Rebuild a family from :func:`family_to_json` output, validating the shape."""
    try:
        d = int(data["dimension"])
        c = int(data["scale_c"])
        s0 = tuple(int(v) for v in data["pivot"])
        polys = {name: _poly_from_json(items, d) for name, items in data["polynomials"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed family file: {exc}") from exc
    if d < 1 or c <= 0 or len(s0) != d or any(v not in (0, 1) for v in s0):
        raise ValueError("malformed family file: bad dimension, scale or pivot")
    for key in ("H", "Phi", "U"):
        if key not in polys:
            raise ValueError(f"malformed family file: missing {key}")
    masks = {}
    for name, P in polys.items():
        if name.startswith("H_"):
            bits = name[2:]
            if len(bits) != d or set(bits) - {"0", "1"} or set(bits) == {"0"}:
                raise ValueError(f"malformed family file: bad mask name {name}")
            masks[tuple(int(b) for b in bits)] = P
    if len(masks) != 2 ** d - 1:
        raise ValueError(f"malformed family file: expected {2 ** d - 1} masks, got {len(masks)}")
    return LoadedFamily(d, c, s0, polys["H"], polys["Phi"], polys["U"], dict(sorted(masks.items())))


def dump_family(family, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(family_to_json(family), f, indent=1)
        f.write("\n")


def load_family(path: str) -> LoadedFamily:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed family file: {exc}") from exc
    return family_from_json(data)
