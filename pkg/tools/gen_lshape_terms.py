#!/usr/bin/env python3
"""Generate src/thermoplate/_lshape_terms.py.

Symbolically differentiates the singular L-shape fields

    R(x, y) = (y^2-1)^2 (x^2-1)^2 r^(1+ups) G(psi)
    Z(x, y) = (y^2-1)(x^2-1) r^(2/3) sin(2 psi / 3)

with psi = atan2(y, x) + pi/2 and the clamped-corner angular profile G,
and emits vectorized numpy code for the values and the derivatives needed
by the solver (gradient, Hessian, Laplacian, bilaplacian of R; gradient
and Laplacian of Z).  Fourth derivatives of these products are too
error-prone by hand, hence this generator; the emitted module is
committed and validated at run time by a finite-difference residual
check.

Run from the repository root:  python3 tools/gen_lshape_terms.py
"""

import pathlib
import textwrap

import sympy as sp
from sympy.printing.numpy import NumPyPrinter

UPSILON = sp.Rational(5444837, 10**7)

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "thermoplate" / "_lshape_terms.py"


def build_expressions():
    x, y = sp.symbols("x y", real=True, positive=False)
    r2 = x**2 + y**2
    r = sp.sqrt(r2)
    psi = sp.atan2(y, x) + sp.pi / 2
    u = UPSILON
    w = sp.Rational(3, 2) * sp.pi  # opening angle of the reentrant corner

    a1 = sp.sin((u - 1) * w) / (u - 1) - sp.sin((u + 1) * w) / (u + 1)
    b1 = sp.cos((u - 1) * psi) - sp.cos((u + 1) * psi)
    a2 = sp.sin((u - 1) * psi) / (u - 1) - sp.sin((u + 1) * psi) / (u + 1)
    b2 = sp.cos((u - 1) * w) - sp.cos((u + 1) * w)
    G = a1 * b1 - a2 * b2

    R = (y**2 - 1) ** 2 * (x**2 - 1) ** 2 * r ** (1 + u) * G
    Z = (y**2 - 1) * (x**2 - 1) * r ** sp.Rational(2, 3) * sp.sin(sp.Rational(2, 3) * psi)

    print("differentiating R ...")
    Rx = sp.diff(R, x)
    Ry = sp.diff(R, y)
    Rxx = sp.diff(Rx, x)
    Rxy = sp.diff(Rx, y)
    Ryy = sp.diff(Ry, y)
    lapR = Rxx + Ryy
    print("differentiating bilaplacian ...")
    bilapR = sp.diff(lapR, x, 2) + sp.diff(lapR, y, 2)
    print("differentiating Z ...")
    Zx = sp.diff(Z, x)
    Zy = sp.diff(Z, y)
    lapZ = sp.diff(Zx, x) + sp.diff(Zy, y)

    names = ["R", "Rx", "Ry", "Rxx", "Rxy", "Ryy", "lapR", "bilapR", "Z", "Zx", "Zy", "lapZ"]
    exprs = [R, Rx, Ry, Rxx, Rxy, Ryy, lapR, bilapR, Z, Zx, Zy, lapZ]
    return (x, y), names, exprs


def emit(symbols, names, exprs) -> str:
    print("running cse ...")
    repl, reduced = sp.cse(exprs, optimizations="basic")
    printer = NumPyPrinter({"fully_qualified_modules": False})

    lines = []
    for lhs, rhs in repl:
        lines.append(f"{lhs} = {printer.doprint(rhs)}")
    for name, expr in zip(names, reduced):
        lines.append(f"out_{name} = {printer.doprint(expr)}")
    body = textwrap.indent("\n".join(lines), "    ")

    return f'''"""Singular L-shape solution terms.  AUTO-GENERATED -- do not edit.

Regenerate with:  python3 tools/gen_lshape_terms.py
"""

from numpy import arctan2, cos, pi, sin, sqrt

__all__ = ["singular_terms", "FIELD_NAMES"]

FIELD_NAMES = {tuple(names)!r}


def singular_terms(x, y):
    """Evaluate the singular fields and derivatives at points (x, y).

    Returns a dict with keys {tuple(names)!r}.
    Inputs must avoid the corner r = 0.
    """
{body}
    return {{
{chr(10).join(f'        "{n}": out_{n} + 0.0 * x,' for n in names)}
    }}
'''


def main():
    symbols, names, exprs = build_expressions()
    code = emit(symbols, names, exprs)
    OUT.write_text(code)
    print(f"wrote {OUT} ({len(code)} bytes)")


if __name__ == "__main__":
    main()
