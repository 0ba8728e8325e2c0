"""Derivations attached to a rational second-order ODE.

For y'' = M/N the total derivative along solutions is
D = d/dx + y' d/dy + (M/N) d/dy'.  Everything here stores cleared
(polynomial) coefficient tuples together with the clearing denominator, so
that eigenpolynomial searches stay inside the polynomial ring while
applications to rational functions recover the true derivative.

The auxiliary first-order compatibility equation for the function S is the
Riccati-type D[S] = S^2 + phi_z S - phi_y; its right-hand side clears to a
polynomial pair (num in s, den) used to extend D with an s-direction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algelem import AlgElem
from .elemexpr import (Add, Const, ElemExpr, Exp, Ln, Mul, Pow, RatLeaf, Var,
                       eadd, eexp, emul, epow, from_ratfunc, ZERO, ONE)
from . import elemexpr
from .errors import SingularImplicitDerivative, UnsupportedNode
from .mpoly import MPoly, XYZS
from .ratfunc import RatFunc


@dataclass(frozen=True)
class Derivation:
    """Cleared first-order operator: true derivative = (sum c_v d_v)/clear_den."""
    cx: MPoly
    cy: MPoly
    cz: MPoly
    cs: MPoly
    clear_den: MPoly

    def __post_init__(self):
        if all(c.is_zero() for c in (self.cx, self.cy, self.cz, self.cs)):
            raise ValueError("derivation must have a nonzero coefficient")

    def coeff(self, name):
        return {"x": self.cx, "y": self.cy, "z": self.cz, "s": self.cs}[name]

    def max_coeff_degree(self):
        return max(c.degree() for c in (self.cx, self.cy, self.cz, self.cs))

    def scaled(self, g):
        """Multiply all coefficients by a common polynomial factor."""
        return Derivation(self.cx * g, self.cy * g, self.cz * g, self.cs * g,
                          self.clear_den * g)


def total_derivative(problem):
    """D = d_x + y' d_y + phi d_z stored as (N, N y', M)/N."""
    N, M = problem.n_poly, problem.m_poly
    z = MPoly.var("z", N.vars)
    return Derivation(N, N * z, M, MPoly.zero(N.vars), N)


def cleared_derivative(problem):
    """The polynomial operator N*D = (N, N y', M)/1."""
    N, M = problem.n_poly, problem.m_poly
    z = MPoly.var("z", N.vars)
    return Derivation(N, N * z, M, MPoly.zero(N.vars), MPoly.one(N.vars))


def riccati_rhs(problem):
    """Clear D[S] = S^2 + phi_z S - phi_y to a polynomial pair (num, den).

    num = (N s)^2 + (N M_z - M N_z) s - (N M_y - M N_y), den = N^2, so the
    compatibility equation reads D[S] = num(s=S)/den.
    """
    N, M = problem.n_poly, problem.m_poly
    s = MPoly.var("s", N.vars)
    e1 = N * M.partial("z") - M * N.partial("z")
    e0 = N * M.partial("y") - M * N.partial("y")
    num = (N * s) ** 2 + e1 * s - e0
    return num, N * N


def aux_derivation(problem):
    """The extended operator num*d_s + N^2*D acting on (x,y,z,s)-polynomials."""
    num, den = riccati_rhs(problem)
    N, M = problem.n_poly, problem.m_poly
    z = MPoly.var("z", N.vars)
    return Derivation(N * N, N * N * z, N * M, num, den)


# --- application ---

def apply_to_poly(d, p):
    """The cleared action sum c_v * dp/dv (an MPoly)."""
    out = MPoly.zero(p.vars)
    for name, c in (("x", d.cx), ("y", d.cy), ("z", d.cz), ("s", d.cs)):
        if not c.is_zero():
            dp = p.partial(name)
            if not dp.is_zero():
                out = out + c * dp
    return out


def apply_to_ratfunc(d, f):
    """The true derivative of a rational function (divides by clear_den)."""
    if isinstance(f, MPoly):
        f = RatFunc.from_poly(f)
    out = RatFunc.const(0, f.vars)
    for name, c in (("x", d.cx), ("y", d.cy), ("z", d.cz), ("s", d.cs)):
        if not c.is_zero():
            df = f.partial(name)
            if not df.is_zero():
                out = out + RatFunc.from_poly(c) * df
    return out / RatFunc.from_poly(d.clear_den)


def generator_derivative(d, minpoly, branch=1):
    """d[s] for the algebraic function defined by minpoly = 0, by implicit
    differentiation: d[s] = -(coefficientwise d of minpoly)(s) / (dP/ds)(s)."""
    cs = minpoly.coeffs_in("s")
    num = AlgElem.from_rat(RatFunc.const(0, minpoly.vars), minpoly, branch)
    den = AlgElem.from_rat(RatFunc.const(0, minpoly.vars), minpoly, branch)
    gen = AlgElem.generator(minpoly, branch)
    for k, coeff in cs.items():
        dk = apply_to_ratfunc(d, coeff)
        num = num + AlgElem.from_rat(dk, minpoly, branch) * gen ** k
        if k >= 1:
            den = den + AlgElem.from_rat(coeff.scale(k), minpoly, branch) * gen ** (k - 1)
    if den.is_zero() or (den.degree() == 2 and den.norm().is_zero()):
        raise SingularImplicitDerivative("dP/ds vanishes on the element")
    return -(num / den)


def apply_to_alg(d, a):
    """True derivative of an extension element (implicit differentiation)."""
    if not d.cs.is_zero():
        raise ValueError("extension elements take x,y,z derivations only")
    ds = generator_derivative(d, a.minpoly, a.branch)
    dc0 = AlgElem.from_rat(apply_to_ratfunc(d, a.c0), a.minpoly, a.branch)
    dc1 = AlgElem.from_rat(apply_to_ratfunc(d, a.c1), a.minpoly, a.branch)
    gen = AlgElem.generator(a.minpoly, a.branch)
    c1 = AlgElem.from_rat(a.c1, a.minpoly, a.branch)
    return dc0 + dc1 * gen + c1 * ds


def apply_to_elem(d, e):
    """True derivative of an expression tree (structural chain rule)."""
    if isinstance(e, (Const,)):
        return ZERO
    if isinstance(e, Var):
        name = {"x": "x", "y": "y", "y'": "z", "z": "z"}[e.name]
        img = RatFunc(d.coeff(name), d.clear_den)
        return from_ratfunc(img)
    if isinstance(e, RatLeaf):
        return from_ratfunc(apply_to_ratfunc(d, e.value))
    if isinstance(e, Add):
        return eadd(*[apply_to_elem(d, a) for a in e.args])
    if isinstance(e, Mul):
        terms = []
        for i, a in enumerate(e.args):
            rest = e.args[:i] + e.args[i + 1:]
            terms.append(emul(apply_to_elem(d, a), *rest))
        return eadd(*terms)
    if isinstance(e, Pow):
        return emul(Const(e.exponent), epow(e.base, e.exponent - 1),
                    apply_to_elem(d, e.base))
    if isinstance(e, Ln):
        return emul(apply_to_elem(d, e.arg), epow(e.arg, Fraction(-1)))
    if isinstance(e, Exp):
        return emul(e, apply_to_elem(d, e.arg))
    raise UnsupportedNode(repr(e))


def apply_derivation(d, p):
    """Dispatch on the operand kind (polynomial -> cleared action)."""
    if isinstance(p, MPoly):
        return apply_to_poly(d, p)
    if isinstance(p, RatFunc):
        return apply_to_ratfunc(d, p)
    if isinstance(p, AlgElem):
        return apply_to_alg(d, p)
    if isinstance(p, ElemExpr):
        return apply_to_elem(d, p)
    raise TypeError("cannot differentiate %r" % (p,))
