"""Rational functions: quotients of MPoly in lowest terms, canonical sign."""
from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZeroPoly
from .mpoly import MPoly, XYZS
from .polyfactor import gcd_poly, lcm_poly


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized=False):
        if isinstance(num, (int, Fraction)):
            num = MPoly.const(num, den.vars if isinstance(den, MPoly) else XYZS)
        if den is None:
            den = MPoly.one(num.vars)
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(den, num.vars)
        if num.vars != den.vars:
            raise ValueError("alphabet mismatch")
        if den.is_zero():
            raise DivisionByZeroPoly("zero denominator")
        if not _normalized:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_poly(cls, p):
        return cls(p, MPoly.one(p.vars), _normalized=True)

    @classmethod
    def const(cls, c, vars=XYZS):
        return cls(MPoly.const(c, vars), MPoly.one(vars), _normalized=True)

    @classmethod
    def var(cls, name, vars=XYZS):
        return cls(MPoly.var(name, vars), MPoly.one(vars), _normalized=True)

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def is_poly(self):
        return self.den.is_const()

    def as_poly(self):
        if not self.den.is_const():
            raise ValueError("not a polynomial: %r" % self)
        return self.num.scale(1 / self.den.const_value())

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, self.vars)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

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
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroPoly("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("integer power required")
        if n >= 0:
            return RatFunc(self.num ** n, self.den ** n)
        if self.num.is_zero():
            raise DivisionByZeroPoly("0 to a negative power")
        return RatFunc(self.den ** (-n), self.num ** (-n))

    def inv(self):
        return RatFunc.const(1, self.vars) / self

    def partial(self, name):
        """Partial derivative (quotient rule)."""
        dn = self.num.partial(name)
        dd = self.den.partial(name)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def subs_poly_var(self, name, value):
        """Substitute a RatFunc for a variable."""
        if isinstance(value, MPoly):
            value = RatFunc.from_poly(value)
        num_s = _subs_into_poly(self.num, name, value)
        den_s = _subs_into_poly(self.den, name, value)
        return num_s / den_s

    def eval(self, subs):
        dv = self.den.eval(subs)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.eval(subs) / dv

    def embed(self, newvars):
        return RatFunc(self.num.embed(newvars), self.den.embed(newvars),
                       _normalized=True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def equivalent(self, other):
        """Semantic equality by cross-multiplication (rep-independent)."""
        other = self._coerce(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return "RatFunc(%s)" % self.num.to_text()
        return "RatFunc((%s)/(%s))" % (self.num.to_text(), self.den.to_text())

    def to_text(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return self.num.to_text()
        return "(%s)/(%s)" % (self.num.to_text(), self.den.to_text())


def _reduce(num, den):
    if num.is_zero():
        return num, MPoly.one(num.vars)
    g = gcd_poly(num, den)
    if not g.is_const():
        num = num.exact_div(g)
        den = den.exact_div(g)
    scale, den_n = den.int_normalize()
    num = num.scale(1 / scale)
    return num, den_n


def _subs_into_poly(p, name, value):
    """Substitute RatFunc ``value`` for variable ``name`` inside MPoly p."""
    i = p.vars.index(name)
    by_deg = {}
    for e, c in p.terms.items():
        d = e[i]
        ne = e[:i] + (0,) + e[i + 1:]
        by_deg.setdefault(d, {})[ne] = c
    out = RatFunc.const(0, p.vars)
    power = RatFunc.const(1, p.vars)
    for d in range(0, (max(by_deg) + 1) if by_deg else 0):
        if d in by_deg:
            out = out + RatFunc.from_poly(MPoly(by_deg[d], p.vars, _clean=False)) * power
        power = power * value
    return out


def ratfunc_lcm_dens(items):
    """lcm of the denominators of a list of RatFuncs."""
    out = MPoly.one(items[0].vars)
    for f in items:
        out = lcm_poly(out, f.den)
    return out
