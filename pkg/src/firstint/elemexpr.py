"""Expression trees for elementary functions of (x, y, y').

Nodes: Const (exact rational), Var, RatLeaf (rational function), Add, Mul,
Pow with a rational exponent, Ln, Exp.  sqrt(u) is Pow(u, 1/2).  The smart
constructors keep trees normalized: rational subtrees collapse into a
single Const/RatLeaf, sums and products are flat and canonically sorted,
and no zero/one identity siblings survive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotRational, UnsupportedNode
from .mpoly import MPoly, XYZS
from .ratfunc import RatFunc

_HALF = Fraction(1, 2)


class ElemExpr:
    """Base class; instances are immutable and hashable."""

    def __add__(self, other):
        return eadd(self, _as_expr(other))

    def __radd__(self, other):
        return eadd(_as_expr(other), self)

    def __sub__(self, other):
        return eadd(self, emul(Const(Fraction(-1)), _as_expr(other)))

    def __rsub__(self, other):
        return eadd(_as_expr(other), emul(Const(Fraction(-1)), self))

    def __neg__(self):
        return emul(Const(Fraction(-1)), self)

    def __mul__(self, other):
        return emul(self, _as_expr(other))

    def __rmul__(self, other):
        return emul(_as_expr(other), self)

    def __truediv__(self, other):
        return emul(self, epow(_as_expr(other), Fraction(-1)))

    def __rtruediv__(self, other):
        return emul(_as_expr(other), epow(self, Fraction(-1)))


@dataclass(frozen=True)
class Const(ElemExpr):
    value: Fraction


@dataclass(frozen=True)
class Var(ElemExpr):
    name: str


@dataclass(frozen=True)
class RatLeaf(ElemExpr):
    value: RatFunc


@dataclass(frozen=True)
class Add(ElemExpr):
    args: tuple


@dataclass(frozen=True)
class Mul(ElemExpr):
    args: tuple


@dataclass(frozen=True)
class Pow(ElemExpr):
    base: ElemExpr
    exponent: Fraction


@dataclass(frozen=True)
class Ln(ElemExpr):
    arg: ElemExpr


@dataclass(frozen=True)
class Exp(ElemExpr):
    arg: ElemExpr


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def _as_expr(v):
    if isinstance(v, ElemExpr):
        return v
    if isinstance(v, (int, Fraction)):
        return Const(Fraction(v))
    if isinstance(v, MPoly):
        return from_ratfunc(RatFunc.from_poly(v))
    if isinstance(v, RatFunc):
        return from_ratfunc(v)
    raise TypeError("cannot coerce %r" % (v,))


def from_ratfunc(f):
    if f.is_const():
        return Const(f.const_value())
    return RatLeaf(f)


def _rat_of(e):
    """The RatFunc value of a rational node, else None."""
    if isinstance(e, Const):
        return RatFunc.const(e.value, XYZS)
    if isinstance(e, Var):
        return RatFunc.var(_varname(e.name), XYZS)
    if isinstance(e, RatLeaf):
        return e.value
    return None


def _varname(name):
    return {"x": "x", "y": "y", "z": "z", "y'": "z"}[name]


def sort_key(e):
    """Total order on normalized trees: deterministic arg ordering."""
    if isinstance(e, Const):
        return (0, str(e.value))
    if isinstance(e, RatLeaf):
        return (1, e.value.to_text())
    if isinstance(e, Var):
        return (2, e.name)
    if isinstance(e, Pow):
        return (3, sort_key(e.base), str(e.exponent))
    if isinstance(e, Ln):
        return (4, sort_key(e.arg))
    if isinstance(e, Exp):
        return (5, sort_key(e.arg))
    if isinstance(e, Mul):
        return (6, tuple(sort_key(a) for a in e.args))
    if isinstance(e, Add):
        return (7, tuple(sort_key(a) for a in e.args))
    raise UnsupportedNode(repr(e))


def eadd(*args):
    flat = []
    rat = None
    for a in args:
        a = _as_expr(a)
        if isinstance(a, Add):
            items = a.args
        else:
            items = (a,)
        for it in items:
            r = _rat_of(it)
            if r is not None:
                rat = r if rat is None else rat + r
            else:
                flat.append(it)
    terms = {}
    for t in flat:
        coeff, core = _split_coeff(t)
        if core in terms:
            terms[core] = terms[core] + coeff
        else:
            terms[core] = coeff
    flat = []
    for core in sorted(terms, key=sort_key):
        c = terms[core]
        if c.is_zero():
            continue
        if core is ONE or core == ONE:
            rat = c if rat is None else rat + c
            continue
        flat.append(_with_coeff(c, core))
    if rat is not None and not rat.is_zero():
        flat.insert(0, from_ratfunc(rat))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def _split_coeff(t):
    """Split a non-rational term into (RatFunc coefficient, core expr)."""
    if isinstance(t, Mul):
        coeff = None
        rest = []
        for a in t.args:
            r = _rat_of(a)
            if r is not None:
                coeff = r if coeff is None else coeff * r
            else:
                rest.append(a)
        if coeff is None:
            coeff = RatFunc.const(1, XYZS)
        if not rest:
            return coeff, ONE
        core = rest[0] if len(rest) == 1 else Mul(tuple(rest))
        return coeff, core
    return RatFunc.const(1, XYZS), t


def _with_coeff(coeff, core):
    if coeff.is_const() and coeff.const_value() == 1:
        return core
    parts = (from_ratfunc(coeff),) + (core.args if isinstance(core, Mul) else (core,))
    return Mul(parts)


def emul(*args):
    flat = []
    rat = RatFunc.const(1, XYZS)
    for a in args:
        a = _as_expr(a)
        items = a.args if isinstance(a, Mul) else (a,)
        for it in items:
            r = _rat_of(it)
            if r is not None:
                rat = rat * r
            else:
                flat.append(it)
    if rat.is_zero():
        return ZERO
    powers = {}
    order = []
    for f in flat:
        if isinstance(f, Pow):
            base, q = f.base, f.exponent
        else:
            base, q = f, Fraction(1)
        if base not in powers:
            powers[base] = Fraction(0)
            order.append(base)
        powers[base] += q
    flat = []
    for base in sorted(order, key=sort_key):
        q = powers[base]
        if q == 0:
            continue
        flat.append(epow(base, q))
    # epow may collapse to rational (e.g. integer power of a RatLeaf)
    clean = []
    for f in flat:
        r = _rat_of(f)
        if r is not None:
            rat = rat * r
        else:
            clean.append(f)
    if rat.is_zero():
        return ZERO
    if not clean:
        return from_ratfunc(rat)
    if not (rat.is_const() and rat.const_value() == 1):
        clean.insert(0, from_ratfunc(rat))
    if len(clean) == 1:
        return clean[0]
    return Mul(tuple(clean))


def epow(base, exponent):
    base = _as_expr(base)
    exponent = Fraction(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    r = _rat_of(base)
    if r is not None:
        if exponent.denominator == 1:
            return from_ratfunc(r ** int(exponent))
        if r.is_const():
            # keep rational powers of constants only when they collapse
            c = r.const_value()
            if c == 1:
                return ONE
            if c == 0 and exponent > 0:
                return ZERO
    if isinstance(base, Pow):
        return epow(base.base, base.exponent * exponent)
    if isinstance(base, Exp):
        return eexp(emul(Const(exponent), base.arg))
    if isinstance(base, Mul) and exponent.denominator == 1:
        return emul(*[epow(a, exponent) for a in base.args])
    return Pow(base, exponent)


def eln(arg):
    arg = _as_expr(arg)
    if isinstance(arg, Const) and arg.value == 1:
        return ZERO
    if isinstance(arg, Exp):
        return arg.arg
    return Ln(arg)


def eexp(arg):
    arg = _as_expr(arg)
    if isinstance(arg, Const) and arg.value == 0:
        return ONE
    if isinstance(arg, Ln):
        return arg.arg
    return Exp(arg)


def esqrt(arg):
    return epow(arg, _HALF)


def normalize(e):
    """Rebuild a tree through the smart constructors."""
    if isinstance(e, (Const, Var, RatLeaf)):
        r = _rat_of(e)
        return from_ratfunc(r)
    if isinstance(e, Add):
        return eadd(*[normalize(a) for a in e.args])
    if isinstance(e, Mul):
        return emul(*[normalize(a) for a in e.args])
    if isinstance(e, Pow):
        return epow(normalize(e.base), e.exponent)
    if isinstance(e, Ln):
        return eln(normalize(e.arg))
    if isinstance(e, Exp):
        return eexp(normalize(e.arg))
    raise UnsupportedNode(repr(e))


def partial(e, name):
    """Partial derivative with respect to one of x, y, z."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if _varname(e.name) == name else ZERO
    if isinstance(e, RatLeaf):
        return from_ratfunc(e.value.partial(name))
    if isinstance(e, Add):
        return eadd(*[partial(a, name) for a in e.args])
    if isinstance(e, Mul):
        terms = []
        for i, a in enumerate(e.args):
            rest = e.args[:i] + e.args[i + 1:]
            terms.append(emul(partial(a, name), *rest))
        return eadd(*terms)
    if isinstance(e, Pow):
        return emul(Const(e.exponent), epow(e.base, e.exponent - 1),
                    partial(e.base, name))
    if isinstance(e, Ln):
        return emul(partial(e.arg, name), epow(e.arg, Fraction(-1)))
    if isinstance(e, Exp):
        return emul(e, partial(e.arg, name))
    raise UnsupportedNode(repr(e))


def to_ratfunc(e):
    """Collapse to a RatFunc; raises NotRational on ln/exp/fractional powers."""
    r = _rat_of(e)
    if r is not None:
        return r
    if isinstance(e, Add):
        out = RatFunc.const(0, XYZS)
        for a in e.args:
            out = out + to_ratfunc(a)
        return out
    if isinstance(e, Mul):
        out = RatFunc.const(1, XYZS)
        for a in e.args:
            out = out * to_ratfunc(a)
        return out
    if isinstance(e, Pow):
        if e.exponent.denominator != 1:
            raise NotRational("fractional power of a non-constant")
        return to_ratfunc(e.base) ** int(e.exponent)
    if isinstance(e, (Ln, Exp)):
        raise NotRational("%s is not rational" % type(e).__name__.lower())
    raise UnsupportedNode(repr(e))


def walk(e):
    yield e
    if isinstance(e, (Add, Mul)):
        for a in e.args:
            yield from walk(a)
    elif isinstance(e, Pow):
        yield from walk(e.base)
    elif isinstance(e, (Ln, Exp)):
        yield from walk(e.arg)
