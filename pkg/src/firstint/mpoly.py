"""Sparse multivariate polynomials with exact rational coefficients.

The default variable alphabet is (x, y, z, s) where z stands for y' and s
for the auxiliary function, ordered x < y < z < s under graded lex.  The
same class also serves internal normal forms that append extra symbols
(radicals, exponentials) to the alphabet; all binary operations require
matching alphabets, and ``embed`` lifts a polynomial into a larger one.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

from .errors import DivisionByZeroPoly, ExponentOverflow, NotDivisible

XYZS = ("x", "y", "z", "s")
MAX_EXP = 1 << 15

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError("coefficient must be int or Fraction, got %r" % (c,))


def grlex_key(exps):
    """Sort key under graded lex; later variables are more significant."""
    return (sum(exps), tuple(reversed(exps)))


class MPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms=None, vars=XYZS, _clean=True):
        self.vars = tuple(vars)
        if terms is None:
            terms = {}
        if _clean:
            clean = {}
            n = len(self.vars)
            for exps, c in terms.items():
                c = _frac(c)
                if c == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError("exponent arity %d != %d vars" % (len(exps), n))
                for e in exps:
                    if e < 0 or e > MAX_EXP:
                        raise ExponentOverflow("exponent %d out of range" % e)
                clean[exps] = c
            terms = clean
        self.terms = terms
        self._hash = None

    # --- constructors ---

    @classmethod
    def zero(cls, vars=XYZS):
        return cls({}, vars, _clean=False)

    @classmethod
    def const(cls, c, vars=XYZS):
        c = _frac(c)
        if c == 0:
            return cls.zero(vars)
        return cls({(0,) * len(vars): c}, vars, _clean=False)

    @classmethod
    def one(cls, vars=XYZS):
        return cls.const(1, vars)

    @classmethod
    def var(cls, name, vars=XYZS):
        idx = vars.index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(vars)))
        return cls({exps: _ONE}, vars, _clean=False)

    @classmethod
    def monomial(cls, exps, c=1, vars=XYZS):
        return cls({tuple(exps): _frac(c)}, vars)

    # --- predicates / queries ---

    def is_zero(self):
        return not self.terms

    def is_const(self):
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def const_value(self):
        if not self.terms:
            return _ZERO
        (exps, c), = self.terms.items()
        if any(exps):
            raise ValueError("not a constant polynomial")
        return c

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def uses(self, name):
        i = self.vars.index(name)
        return any(e[i] for e in self.terms)

    def lead_exps(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def lead_coeff(self):
        return self.terms[self.lead_exps()]

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # --- arithmetic ---

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("alphabet mismatch: %r vs %r" % (self.vars, other.vars))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            nc = out.get(e, _ZERO) + c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        return MPoly(out, self.vars, _clean=False)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.vars, _clean=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                nc = out.get(e, _ZERO) + ca * cb
                if nc:
                    out[e] = nc
                else:
                    del out[e]
        for e in out:
            for k in e:
                if k > MAX_EXP:
                    raise ExponentOverflow("exponent %d out of range" % k)
        return MPoly(out, self.vars, _clean=False)

    __rmul__ = __mul__

    def scale(self, c):
        c = _frac(c)
        if c == 0:
            return MPoly.zero(self.vars)
        return MPoly({e: k * c for e, k in self.terms.items()}, self.vars, _clean=False)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("nonnegative integer power required")
        out = MPoly.one(self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def partial(self, name):
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            nc = out.get(ne, _ZERO) + c * e[i]
            if nc:
                out[ne] = nc
            else:
                del out[ne]
        return MPoly(out, self.vars, _clean=False)

    # --- structure ---

    def coeffs_in(self, name):
        """View as univariate in ``name``: dict degree -> coefficient MPoly."""
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            d = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(d, {})[ne] = c
        return {d: MPoly(t, self.vars, _clean=False) for d, t in out.items()}

    @classmethod
    def from_coeffs_in(cls, name, coeffs, vars=XYZS):
        i = vars.index(name)
        terms = {}
        for d, p in coeffs.items():
            for e, c in p.terms.items():
                if e[i]:
                    raise ValueError("coefficient uses the main variable")
                ne = e[:i] + (d,) + e[i + 1:]
                terms[ne] = terms.get(ne, _ZERO) + c
        return cls(terms, vars)

    def embed(self, newvars):
        """Lift into a larger alphabet (matching variables by name)."""
        if tuple(newvars) == self.vars:
            return self
        pos = []
        for v in self.vars:
            pos.append(newvars.index(v))
        n = len(newvars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return MPoly(out, tuple(newvars), _clean=False)

    def drop_to(self, newvars):
        """Project onto a smaller alphabet; unused variables must be absent."""
        newvars = tuple(newvars)
        pos = [self.vars.index(v) for v in newvars]
        keep = set(pos)
        out = {}
        for e, c in self.terms.items():
            for i, k in enumerate(e):
                if k and i not in keep:
                    raise ValueError("polynomial uses dropped variable %r" % (self.vars[i],))
            out[tuple(e[p] for p in pos)] = c
        return MPoly(out, newvars, _clean=False)

    def subs_poly(self, name, value):
        """Substitute a polynomial (same alphabet) for a variable."""
        self._check(value)
        i = self.vars.index(name)
        by_deg = {}
        for e, c in self.terms.items():
            d = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            by_deg.setdefault(d, {})[ne] = c
        out = MPoly.zero(self.vars)
        power = MPoly.one(self.vars)
        for d in range(0, max(by_deg) + 1 if by_deg else 0):
            if d in by_deg:
                out = out + MPoly(by_deg[d], self.vars, _clean=False) * power
            power = power * value
        return out

    def eval(self, subs):
        """Exact evaluation; ``subs`` maps every used variable to a Fraction."""
        out = _ZERO
        idx = {v: i for i, v in enumerate(self.vars)}
        vals = [subs.get(v) for v in self.vars]
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError("no value for %r" % (self.vars[i],))
                    t *= _frac(vals[i]) ** k
            out += t
        return out

    # --- normalization ---

    def content(self):
        """Positive rational c with self/c integer-primitive (0 for zero)."""
        if not self.terms:
            return _ZERO
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _int_gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def int_normalize(self):
        """Return (scale, prim): self == scale * prim, prim integer-primitive
        with positive graded-lex leading coefficient."""
        if not self.terms:
            return _ZERO, self
        c = self.content()
        if self.lead_coeff() < 0:
            c = -c
        return c, self.scale(1 / c)

    def canonical(self):
        return self.int_normalize()[1]

    # --- division ---

    def exact_div(self, other):
        """Exact division; raises NotDivisible when other does not divide."""
        self._check(other)
        if other.is_zero():
            raise DivisionByZeroPoly("division by zero polynomial")
        if other.is_const():
            return self.scale(1 / other.const_value())
        rem = dict(self.terms)
        out = {}
        be = other.lead_exps()
        bc = other.terms[be]
        bterms = list(other.terms.items())
        while rem:
            re = max(rem, key=grlex_key)
            qe = tuple(i - j for i, j in zip(re, be))
            if any(k < 0 for k in qe):
                raise NotDivisible("leading monomial not divisible")
            qc = rem[re] / bc
            out[qe] = out.get(qe, _ZERO) + qc
            for e, c in bterms:
                ne = tuple(i + j for i, j in zip(qe, e))
                nc = rem.get(ne, _ZERO) - qc * c
                if nc:
                    rem[ne] = nc
                else:
                    rem.pop(ne, None)
        return MPoly(out, self.vars, _clean=False)

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except (NotDivisible, DivisionByZeroPoly):
            return False

    # --- dunder boilerplate ---

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return "MPoly(%s)" % (self.to_text() or "0")

    def to_text(self):
        """Deterministic human-readable form, terms in descending grlex order."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.vars, e):
                name = "y'" if v == "z" else v
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append("%s^%d" % (name, k))
            body = "*".join(factors)
            if not body:
                parts.append(_frac_text(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (_frac_text(c), body))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _frac_text(c):
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def prem(a, b, name):
    """Pseudo-remainder of a by b with respect to ``name``.

    Returns r with lc(b)^(da-db+1) * a = q*b + r and deg_name(r) < deg_name(b).
    """
    a._check(b)
    db = b.degree_in(name)
    if db < 0:
        raise DivisionByZeroPoly("pseudo-division by zero polynomial")
    if db == 0:
        return MPoly.zero(a.vars)
    i = a.vars.index(name)
    bc = b.coeffs_in(name)
    lcb = bc[db]
    r = a
    e = a.degree_in(name) - db + 1
    while not r.is_zero() and r.degree_in(name) >= db:
        dr = r.degree_in(name)
        lcr = r.coeffs_in(name)[dr]
        shift = MPoly.monomial(tuple(dr - db if j == i else 0 for j in range(len(a.vars))),
                               1, a.vars)
        r = lcb * r - lcr * shift * b
        e -= 1
    if e > 0:
        r = (lcb ** e) * r
    return r


