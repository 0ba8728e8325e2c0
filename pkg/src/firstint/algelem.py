"""Elements of Q(x,y,z)[s] modulo a defining polynomial of s-degree 1 or 2.

An element is stored as c0 + c1*s with RatFunc coordinates free of s; the
defining polynomial is an MPoly in (x,y,z,s), primitive with canonical
sign.  For degree 1 the extension is trivial and every element collapses
to its rational value.  ``branch`` (+1/-1) selects the radical sign when
converting to an explicit expression or evaluating numerically; it plays
no role in the exact arithmetic.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DegSUnsupported, LeadingCoeffZero, MixedExtensions, NotInvertible
from .mpoly import MPoly, XYZS
from .ratfunc import RatFunc


def _minpoly_coeffs(minpoly):
    cs = minpoly.coeffs_in("s")
    deg = max(cs)
    zero = MPoly.zero(minpoly.vars)
    return deg, cs.get(2, zero), cs.get(1, zero), cs.get(0, zero)


class AlgElem:
    __slots__ = ("c0", "c1", "minpoly", "branch", "_hash")

    def __init__(self, c0, c1, minpoly, branch=1):
        deg = minpoly.degree_in("s")
        if deg not in (1, 2):
            raise DegSUnsupported("defining polynomial must have s-degree 1 or 2")
        if isinstance(c0, (int, Fraction)):
            c0 = RatFunc.const(c0, minpoly.vars)
        if isinstance(c1, (int, Fraction)):
            c1 = RatFunc.const(c1, minpoly.vars)
        if c0.num.uses("s") or c1.num.uses("s") or c0.den.uses("s") or c1.den.uses("s"):
            raise ValueError("coordinates must be free of s")
        if deg == 1 and not c1.is_zero():
            # reduce: s = -b/a for minpoly a*s + b
            _, _, a, b = _minpoly_coeffs(minpoly)
            s_val = RatFunc(-b, a)
            c0 = c0 + c1 * s_val
            c1 = RatFunc.const(0, minpoly.vars)
        self.c0 = c0
        self.c1 = c1
        self.minpoly = minpoly
        self.branch = branch
        self._hash = None

    # --- constructors ---

    @classmethod
    def from_rat(cls, f, minpoly, branch=1):
        if isinstance(f, MPoly):
            f = RatFunc.from_poly(f)
        return cls(f, RatFunc.const(0, minpoly.vars), minpoly, branch)

    @classmethod
    def generator(cls, minpoly, branch=1):
        """The residue class of s itself."""
        deg, _, b1, b0 = _minpoly_coeffs(minpoly)
        if deg == 1:
            return cls(RatFunc(-b0, b1), RatFunc.const(0, minpoly.vars), minpoly, branch)
        return cls(RatFunc.const(0, minpoly.vars), RatFunc.const(1, minpoly.vars),
                   minpoly, branch)

    @classmethod
    def from_poly_in_s(cls, p, minpoly, branch=1):
        """Reduce an MPoly in (x,y,z,s) to an element of the extension."""
        out = cls.from_rat(RatFunc.const(0, minpoly.vars), minpoly, branch)
        gen = cls.generator(minpoly, branch)
        for d, coeff in sorted(p.coeffs_in("s").items(), reverse=True):
            out = out * gen + cls.from_rat(coeff, minpoly, branch)
        return out

    # --- structure ---

    def degree(self):
        return self.minpoly.degree_in("s")

    def is_rational(self):
        return self.c1.is_zero()

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.c0

    def is_zero(self):
        return self.c0.is_zero() and self.c1.is_zero()

    def _check(self, other):
        if self.minpoly != other.minpoly or self.branch != other.branch:
            raise MixedExtensions("elements live in different extensions")

    def _quad_coeffs(self):
        _, a, b, c = _minpoly_coeffs(self.minpoly)
        return (RatFunc.from_poly(a), RatFunc.from_poly(b), RatFunc.from_poly(c))

    def _coerce(self, other):
        if isinstance(other, AlgElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, MPoly, RatFunc)):
            if isinstance(other, (int, Fraction)):
                other = RatFunc.const(other, self.minpoly.vars)
            elif isinstance(other, MPoly):
                other = RatFunc.from_poly(other)
            return AlgElem(other, RatFunc.const(0, self.minpoly.vars),
                           self.minpoly, self.branch)
        return None

    # --- arithmetic ---

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return AlgElem(self.c0 + other.c0, self.c1 + other.c1,
                       self.minpoly, self.branch)

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(-self.c0, -self.c1, self.minpoly, self.branch)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.degree() == 1:
            return AlgElem(self.c0 * other.c0, self.c1, self.minpoly, self.branch)
        a, b, c = self._quad_coeffs()
        # s^2 = -(b s + c)/a
        p0, p1 = self.c0, self.c1
        q0, q1 = other.c0, other.c1
        cross = p1 * q1
        c0 = p0 * q0 - cross * c / a
        c1 = p0 * q1 + p1 * q0 - cross * b / a
        return AlgElem(c0, c1, self.minpoly, self.branch)

    __rmul__ = __mul__

    def conjugate(self):
        if self.degree() == 1:
            return self
        a, b, _ = self._quad_coeffs()
        # the other root: s_bar = -b/a - s
        return AlgElem(self.c0 - self.c1 * b / a, -self.c1,
                       self.minpoly, self.branch)

    def norm(self):
        """Field norm (product with the conjugate), a RatFunc."""
        if self.degree() == 1:
            return self.c0 * self.c0
        a, b, c = self._quad_coeffs()
        return self.c0 * self.c0 - self.c0 * self.c1 * b / a + self.c1 * self.c1 * c / a

    def inv(self):
        if self.degree() == 1:
            if self.c0.is_zero():
                raise NotInvertible("zero element")
            return AlgElem(self.c0.inv(), self.c1, self.minpoly, self.branch)
        n = self.norm()
        if n.is_zero():
            raise NotInvertible("element has zero norm")
        conj = self.conjugate()
        return AlgElem(conj.c0 / n, conj.c1 / n, self.minpoly, self.branch)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("integer power required")
        if n < 0:
            return self.inv() ** (-n)
        out = self._coerce(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.c0 == other.c0 and self.c1 == other.c1

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.c0, self.c1, self.minpoly, self.branch))
        return self._hash

    def __repr__(self):
        if self.c1.is_zero():
            return "AlgElem(%s)" % self.c0.to_text()
        return "AlgElem(%s + (%s)*s mod %s)" % (
            self.c0.to_text(), self.c1.to_text(), self.minpoly.to_text())


def alg_arith(a, b, op):
    """Dispatcher matching the kernel contract: add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown op %r" % op)


def solve_defining_poly(p):
    """Solve P = 0 for s: the roots of an s-degree 1 or 2 polynomial.

    Returns a list of AlgElem.  Degree 1 gives one rational element;
    degree 2 gives the two branches of the quadratic extension defined
    by P itself.
    """
    deg = p.degree_in("s")
    if deg not in (1, 2):
        raise DegSUnsupported("s-degree %d not supported" % deg)
    cs = p.coeffs_in("s")
    lead = cs[deg]
    if lead.is_zero():
        raise LeadingCoeffZero("leading coefficient in s vanishes")
    minpoly = p.canonical()
    if deg == 1:
        return [AlgElem.generator(minpoly, branch=1)]
    return [AlgElem.generator(minpoly, branch=1),
            AlgElem.generator(minpoly, branch=-1)]
