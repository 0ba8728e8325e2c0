"""Front end: parse ODE problem files and expressions, render results.

Grammar notes (the input format has no official definition, so these are
the documented conventions of this tool):

* variables are ``x``, ``y`` and ``y'`` (alias ``yp`` for shells);
* ``^`` is right-associative and binds tighter than unary minus;
* ``p/q`` with digits directly around the slash is a rational literal,
  so ``3/4`` is one number while ``3 / 4`` is a division;
* ``ln``, ``exp``, ``sqrt`` are the only function names.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprSyntaxError, NotRational, ZeroDenominator
from .mpoly import MPoly, XYZS
from .ratfunc import RatFunc
from . import elemexpr as ee
from .elemexpr import (Add, Const, ElemExpr, Exp, Ln, Mul, Pow, RatLeaf, Var,
                       eadd, eexp, eln, emul, epow, esqrt, normalize)
from .polyfactor import gcd_poly


# --- lexer ---

_OPS = set("+-*/^()")
_FUNCS = ("ln", "exp", "sqrt")


@dataclass
class Token:
    kind: str      # num | name | op | end
    value: object
    pos: int


def tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." :
                raise ExprSyntaxError("decimal literals are not supported; use p/q", j)
            # rational literal: digit-slash-digit with no spaces
            if j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                toks.append(Token("num", Fraction(int(text[i:j]), int(text[j + 1:k])), i))
                i = k
                continue
            toks.append(Token("num", Fraction(int(text[i:j])), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            # primes attach to y
            primes = 0
            while j < n and text[j] == "'":
                primes += 1
                j += 1
            if primes:
                if name != "y" or primes > 2:
                    raise ExprSyntaxError("unexpected prime", i)
                name = "y'" if primes == 1 else "y''"
            toks.append(Token("name", name, i))
            i = j
            continue
        if ch in _OPS:
            toks.append(Token("op", ch, i))
            i += 1
            continue
        if ch == "=":
            toks.append(Token("op", "=", i))
            i += 1
            continue
        raise ExprSyntaxError("unexpected character %r" % ch, i)
    toks.append(Token("end", None, n))
    return toks


# --- Pratt parser ---

_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_BP = 15   # binds looser than ^, tighter than * is unnecessary


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.next()
        if t.kind != "op" or t.value != op:
            raise ExprSyntaxError("expected %r" % op, t.pos)
        return t

    def parse_expr(self, min_bp=0):
        left = self.nud()
        while True:
            t = self.peek()
            if t.kind != "op" or t.value not in _LBP:
                break
            bp = _LBP[t.value]
            if bp <= min_bp:
                break
            self.next()
            if t.value == "^":
                right = self.parse_expr(bp - 1)   # right associative
                left = self._make_pow(left, right, t.pos)
            else:
                right = self.parse_expr(bp)
                if t.value == "+":
                    left = eadd(left, right)
                elif t.value == "-":
                    left = eadd(left, emul(Const(Fraction(-1)), right))
                elif t.value == "*":
                    left = emul(left, right)
                else:
                    left = emul(left, epow(right, Fraction(-1)))
        return left

    def _make_pow(self, base, exponent, pos):
        if not isinstance(exponent, Const):
            raise ExprSyntaxError("exponent must be a rational constant", pos)
        return epow(base, exponent.value)

    def nud(self):
        t = self.next()
        if t.kind == "num":
            return Const(t.value)
        if t.kind == "name":
            if t.value in ("x", "y"):
                return Var(t.value)
            if t.value in ("y'", "yp"):
                return Var("y'")
            if t.value in _FUNCS:
                self.expect_op("(")
                arg = self.parse_expr(0)
                self.expect_op(")")
                if t.value == "ln":
                    return eln(arg)
                if t.value == "exp":
                    return eexp(arg)
                return esqrt(arg)
            raise ExprSyntaxError("unknown name %r" % t.value, t.pos)
        if t.kind == "op" and t.value == "(":
            inner = self.parse_expr(0)
            self.expect_op(")")
            return inner
        if t.kind == "op" and t.value == "-":
            operand = self.parse_expr(_UNARY_BP)
            return emul(Const(Fraction(-1)), operand)
        if t.kind == "op" and t.value == "+":
            return self.parse_expr(_UNARY_BP)
        raise ExprSyntaxError("unexpected token %r" % (t.value,), t.pos)


def parse_expression(text):
    """Parse a standalone expression into a normalized ElemExpr."""
    toks = tokenize(text)
    p = _Parser(toks)
    out = p.parse_expr(0)
    t = p.peek()
    if t.kind != "end":
        raise ExprSyntaxError("trailing input %r" % (t.value,), t.pos)
    return normalize(out)


# --- problem type ---

@dataclass(frozen=True)
class SoodeProblem:
    """A rational second-order ODE y'' = M/N in lowest terms."""
    m_poly: MPoly
    n_poly: MPoly
    source_text: str = ""

    def __post_init__(self):
        if self.n_poly.is_zero():
            raise ZeroDenominator("N must not be zero")
        if self.m_poly.uses("s") or self.n_poly.uses("s"):
            raise ValueError("M, N must not mention the auxiliary variable")
        if not self.m_poly.is_zero():
            if not gcd_poly(self.m_poly, self.n_poly).is_const():
                raise ValueError("M/N not in lowest terms")

    @property
    def phi(self):
        return RatFunc(self.m_poly, self.n_poly)

    def phi_partial(self, name):
        return self.phi.partial(name)

    def describe(self):
        return "y'' = (%s)/(%s)" % (self.m_poly.to_text(), self.n_poly.to_text())


def strip_comments(text):
    lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append(stripped)
    return " ".join(lines)


def parse_soode(text):
    """Parse ``y'' = <expr>`` into a SoodeProblem (M, N in lowest terms)."""
    body = strip_comments(text)
    toks = tokenize(body)
    if len(toks) < 3 or toks[0].kind != "name" or toks[0].value not in ("y''", "ypp"):
        raise ExprSyntaxError("input must start with y'' =", toks[0].pos if toks else 0)
    if toks[1].kind != "op" or toks[1].value != "=":
        raise ExprSyntaxError("expected = after y''", toks[1].pos)
    p = _Parser(toks[2:])
    expr = p.parse_expr(0)
    t = p.peek()
    if t.kind != "end":
        raise ExprSyntaxError("trailing input %r" % (t.value,), t.pos)
    rat = ee.to_ratfunc(normalize(expr))
    return SoodeProblem(rat.num, rat.den, source_text=text)


# --- rendering ---

def render(expr, format="text"):
    """Deterministic serialization; text re-parses to an equal tree."""
    if format == "text":
        return _render_text(expr, 0)
    if format == "json":
        return json.dumps(_render_json(expr), sort_keys=True, separators=(",", ":"))
    raise ValueError("unknown format %r" % format)


# precedence levels used for parenthesization
_P_ADD, _P_MUL, _P_UNARY, _P_POW, _P_ATOM = 10, 20, 15, 40, 100


def _frac_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def _render_text(e, parent_bp):
    if isinstance(e, Const):
        body = _frac_str(e.value)
        level = _P_ATOM if e.value >= 0 and e.value.denominator == 1 else _P_MUL
        if e.value < 0:
            level = _P_UNARY
        return _wrap(body, level, parent_bp)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, RatLeaf):
        return _render_ratfunc(e.value, parent_bp)
    if isinstance(e, Add):
        parts = [_render_text(a, _P_ADD) for a in e.args]
        body = parts[0]
        for p in parts[1:]:
            body += " - " + p[1:] if p.startswith("-") else " + " + p
        return _wrap(body, _P_ADD, parent_bp)
    if isinstance(e, Mul):
        parts = [_render_text(a, _P_MUL) for a in e.args]
        body = "*".join(parts)
        return _wrap(body, _P_MUL, parent_bp)
    if isinstance(e, Pow):
        if e.exponent == Fraction(1, 2):
            return "sqrt(%s)" % _render_text(e.base, 0)
        base = _render_text(e.base, _P_POW)
        if e.exponent.denominator == 1 and e.exponent >= 0:
            return _wrap("%s^%s" % (base, e.exponent.numerator), _P_POW, parent_bp)
        return _wrap("%s^(%s)" % (base, _frac_str(e.exponent)), _P_POW, parent_bp)
    if isinstance(e, Ln):
        return "ln(%s)" % _render_text(e.arg, 0)
    if isinstance(e, Exp):
        return "exp(%s)" % _render_text(e.arg, 0)
    raise ValueError("cannot render %r" % (e,))


def _wrap(body, level, parent_bp):
    if level < parent_bp or (parent_bp == _P_POW and level <= _P_POW):
        return "(" + body + ")"
    return body


def _render_ratfunc(f, parent_bp):
    num = _poly_text(f.num)
    if f.den.is_const() and f.den.const_value() == 1:
        level = _poly_level(f.num)
        return _wrap(num, level, parent_bp)
    body = "(%s)/(%s)" % (num, _poly_text(f.den))
    return _wrap(body, _P_MUL, parent_bp)


def _poly_level(p):
    if len(p.terms) > 1:
        return _P_ADD
    if not p.terms:
        return _P_ATOM
    (e, c), = p.terms.items()
    if c < 0:
        return _P_UNARY
    if any(e) and c != 1:
        return _P_MUL
    if sum(1 for k in e if k) > 1:
        return _P_MUL
    return _P_ATOM


def _poly_text(p):
    return p.to_text()


def _render_json(e):
    if isinstance(e, Const):
        return {"kind": "const", "value": _frac_str(e.value)}
    if isinstance(e, Var):
        return {"kind": "var", "value": e.name}
    if isinstance(e, RatLeaf):
        return {"kind": "ratfunc", "num": _poly_text(e.value.num),
                "den": _poly_text(e.value.den)}
    if isinstance(e, Add):
        return {"kind": "add", "args": [_render_json(a) for a in e.args]}
    if isinstance(e, Mul):
        return {"kind": "mul", "args": [_render_json(a) for a in e.args]}
    if isinstance(e, Pow):
        return {"kind": "pow", "args": [_render_json(e.base)],
                "value": _frac_str(e.exponent)}
    if isinstance(e, Ln):
        return {"kind": "ln", "args": [_render_json(e.arg)]}
    if isinstance(e, Exp):
        return {"kind": "exp", "args": [_render_json(e.arg)]}
    raise ValueError("cannot render %r" % (e,))
