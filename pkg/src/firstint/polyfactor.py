"""GCDs, squarefree decomposition and best-effort factor splitting.

The gcd is a primitive-part pseudo-remainder sequence, recursing on the
variable alphabet.  Full irreducible factorization over Q is deliberately
not attempted: squarefree decomposition plus per-variable content
extraction plus rational-root / quadratic splits of univariate pieces is
enough to feed the integrating-factor candidate set, and anything left
unsplit is kept as a single candidate.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import BothZero
from .mpoly import MPoly, prem


def gcd_poly(a, b):
    """Primitive, canonical-sign gcd; gcd(a, 0) is the normalized a."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.canonical()
    if b.is_zero():
        return a.canonical()
    if a.is_const() or b.is_const():
        return MPoly.one(a.vars)
    if a == b:
        return a.canonical()
    # peel the monomial content first; it is both cheap and common
    ma = _monomial_content(a)
    mb = _monomial_content(b)
    mg = tuple(min(i, j) for i, j in zip(ma, mb))
    if any(mg):
        a = _shift_down(a, mg)
        b = _shift_down(b, mg)
    g = _heu_gcd(a.canonical(), b.canonical())
    if g is None:
        names = [v for v in a.vars if a.uses(v) or b.uses(v)]
        g = _gcd_rec(a, b, names)
    if any(mg):
        g = g * MPoly.monomial(mg, 1, a.vars)
    return g.canonical()


def _monomial_content(a):
    mins = None
    for e in a.terms:
        mins = e if mins is None else tuple(min(i, j) for i, j in zip(mins, e))
    return mins


def _shift_down(a, shift):
    return MPoly({tuple(i - j for i, j in zip(e, shift)): c
                  for e, c in a.terms.items()}, a.vars, _clean=False)


def _heu_gcd(a, b):
    """Heuristic gcd (Char/Geddes/Gonnet style): evaluate one variable at a
    big integer, gcd the images recursively, and reconstruct the variable
    dependence from the balanced xi-adic digits.  Every candidate is
    verified by exact division before being returned; None means the
    heuristic gave up and the caller should fall back to the PRS.
    """
    _, a = a.int_normalize()
    _, b = b.int_normalize()
    g = _heu_gcd_int(a, b, 0)
    return None if g is None else g.canonical()


def _heu_gcd_int(f, g, depth):
    """Integer gcd (content included) of integer polynomials, or None."""
    if depth > 8:
        return None
    if f.is_const() and g.is_const():
        n = _igcd(abs(f.const_value().numerator), abs(g.const_value().numerator))
        return MPoly.const(Fraction(n), f.vars)
    name = None
    best = None
    for v in f.vars:
        df, dg = f.degree_in(v), g.degree_in(v)
        if df > 0 and dg > 0:
            d = max(df, dg)
            if best is None or d < best:
                best, name = d, v
    if name is None:
        # no shared variable: the gcd is the gcd of all integer coefficients
        n = 0
        for c in list(f.terms.values()) + list(g.terms.values()):
            n = _igcd(n, abs(c.numerator))
        return MPoly.const(Fraction(n), f.vars)
    norm = min(_max_abs_coeff(f), _max_abs_coeff(g))
    xi = 2 * int(norm) + 29
    dig_bound = max(f.degree_in(name), g.degree_in(name)) + 2
    for _ in range(6):
        gf = _eval_var_int(f, name, xi)
        gg = _eval_var_int(g, name, xi)
        if not (gf.is_zero() or gg.is_zero()):
            h = _heu_gcd_int(gf, gg, depth + 1)
            if h is not None and not h.is_zero():
                cand = _xi_adic_lift(h, name, xi, f.vars, dig_bound)
                if cand is not None and not cand.is_zero():
                    if cand.divides(f) and cand.divides(g):
                        return _with_int_content(cand, f, g)
        xi = xi * 73 // 27 + 1
    return None


def _with_int_content(cand, f, g):
    _, prim = cand.int_normalize()
    cf = 0
    for c in f.terms.values():
        cf = _igcd(cf, abs(c.numerator))
    cg = 0
    for c in g.terms.values():
        cg = _igcd(cg, abs(c.numerator))
    return prim.scale(Fraction(_igcd(cf, cg)))


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _max_abs_coeff(p):
    return max(abs(c) for c in p.terms.values())


def _eval_var_int(p, name, xi):
    i = p.vars.index(name)
    out = {}
    for e, c in p.terms.items():
        ne = e[:i] + (0,) + e[i + 1:]
        v = out.get(ne, Fraction(0)) + c * xi ** e[i]
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return MPoly(out, p.vars, _clean=False)


def _xi_adic_lift(gamma, name, xi, vars, dig_bound=400):
    """Reconstruct the ``name`` dependence from a xi-adic polynomial image."""
    i = vars.index(name)
    out = {}
    k = 0
    half = xi // 2
    while not gamma.is_zero():
        if k > dig_bound:
            return None
        digit = {}
        rest = {}
        for e, c in gamma.terms.items():
            if c.denominator != 1:
                return None
            r = c.numerator % xi
            if r > half:
                r -= xi
            if r:
                digit[e] = Fraction(r)
            q = (c.numerator - r) // xi
            if q:
                rest[e] = Fraction(q)
        for e, c in digit.items():
            ne = e[:i] + (k,) + e[i + 1:]
            out[ne] = c
        gamma = MPoly(rest, vars, _clean=False)
        k += 1
    if not out:
        return MPoly.zero(vars)
    return MPoly(out, vars, _clean=False)


def _gcd_rec(a, b, names):
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_const() or b.is_const():
        return MPoly.one(a.vars)
    name = None
    for v in reversed(names):
        if a.uses(v) or b.uses(v):
            name = v
            break
    if name is None:
        return MPoly.one(a.vars)
    rest = [v for v in names if v != name]
    da, db = a.degree_in(name), b.degree_in(name)
    if da == 0 or db == 0:
        ca = a if da else _content_in(a, name, rest)
        cb = b if db else _content_in(b, name, rest)
        if da:
            ca = _content_in(a, name, rest)
        if db:
            cb = _content_in(b, name, rest)
        return _gcd_rec(ca, cb, rest)
    ca = _content_in(a, name, rest)
    cb = _content_in(b, name, rest)
    cg = _gcd_rec(ca, cb, rest)
    f = a.exact_div(ca)
    g = b.exact_div(cb)
    if f.degree_in(name) < g.degree_in(name):
        f, g = g, f
    # primitive pseudo-remainder sequence
    while True:
        r = prem(f, g, name)
        if r.is_zero():
            pp = g.exact_div(_content_in(g, name, rest))
            return cg * pp
        if r.degree_in(name) == 0:
            return cg
        f, g = g, r.exact_div(_content_in(r, name, rest)).canonical()


def _content_in(a, name, rest):
    """gcd of the coefficients of a viewed as univariate in ``name``."""
    coeffs = sorted(a.coeffs_in(name).items())
    g = coeffs[0][1]
    for _, c in coeffs[1:]:
        if g.is_const():
            break
        g = _gcd_rec(g, c, list(rest))
    if g.is_const():
        return MPoly.one(a.vars)
    return g.canonical()


def content_in(a, name):
    rest = [v for v in a.vars if v != name]
    return _content_in(a, name, rest)


def gcd_many(polys):
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p.canonical() if g is None else gcd_poly(g, p)
        if g.is_const():
            return MPoly.one(p.vars)
    if g is None:
        raise BothZero("gcd of all-zero list")
    return g


def lcm_poly(a, b):
    if a.is_zero() or b.is_zero():
        return MPoly.zero(a.vars)
    return (a * b).exact_div(gcd_poly(a, b)).canonical()


def squarefree_factors(a):
    """Decompose a into [(factor, multiplicity), ...], constants dropped.

    Factors are primitive with canonical sign, pairwise coprime, and each
    squarefree; their powered product equals the input up to a rational
    constant.  Univariate pieces are further split over Q where a rational
    root or a rational quadratic discriminant allows it.
    """
    if a.is_zero():
        raise ValueError("squarefree decomposition of 0")
    out = {}
    _sqfree_rec(a.canonical(), 1, out)
    split = {}
    for f, m in out.items():
        for g in _best_effort_split(f):
            split[g] = split.get(g, 0) + m
    return sorted(split.items(),
                  key=lambda fm: (fm[0].degree(), sorted(fm[0].sorted_terms())))


def _sqfree_rec(a, mult, out):
    if a.is_const():
        return
    name = next(v for v in reversed(a.vars) if a.uses(v))
    rest = [v for v in a.vars if a.uses(v) and v != name]
    cont = _content_in(a, name, rest)
    pp = a.exact_div(cont)
    if not cont.is_const():
        _sqfree_rec(cont.canonical(), mult, out)
    # Yun's algorithm, univariate in ``name`` over the remaining variables
    d = pp.partial(name)
    g = _gcd_rec(pp, d, list(pp.vars)).canonical()
    if g.is_const():
        _record(pp.canonical(), mult, out)
        return
    w = pp.exact_div(g)
    y = d.exact_div(g)
    k = 1
    while not w.is_const():
        c = y - w.partial(name)
        if c.is_zero():
            _record(w.canonical(), k * mult, out)
            return
        ak = _gcd_rec(w, c, list(w.vars)).canonical()
        if not ak.is_const():
            _record(ak, k * mult, out)
            w = w.exact_div(ak)
            y = c.exact_div(ak)
        else:
            y = c
        k += 1


def _record(f, mult, out):
    if f.is_const():
        return
    out[f] = out.get(f, 0) + mult


def _univar_name(f):
    used = [v for v in f.vars if f.uses(v)]
    return used[0] if len(used) == 1 else None


def _best_effort_split(f):
    """Split a squarefree primitive factor a bit further (never wrongly)."""
    name = _univar_name(f)
    if name is None:
        for v in f.vars:
            if f.degree_in(v) == 1:
                cs = f.coeffs_in(v)
                g = gcd_poly(cs.get(1, MPoly.zero(f.vars)),
                             cs.get(0, MPoly.zero(f.vars)))
                if not g.is_const():
                    return (_best_effort_split(g)
                            + _best_effort_split(f.exact_div(g).canonical()))
        return [f]
    return _split_univar(f, name)


def _split_univar(f, name):
    d = f.degree_in(name)
    if d <= 1:
        return [f]
    out = []
    rem = f
    for r in _rational_roots(f, name):
        lin = (MPoly.var(name, f.vars) - MPoly.const(r, f.vars)).canonical()
        while rem.degree_in(name) >= 1 and lin.divides(rem):
            out.append(lin)
            rem = rem.exact_div(lin).canonical()
    if rem.degree_in(name) == 2:
        out.extend(_split_quadratic(rem, name))
    elif not rem.is_const():
        out.append(rem)
    return out


def _rational_roots(f, name):
    """Rational roots of a univariate primitive integer polynomial."""
    _, p = f.int_normalize()
    coeffs = {d: c.const_value() for d, c in p.coeffs_in(name).items()}
    dmax = max(coeffs)
    dmin = min(coeffs)
    roots = []
    if dmin > 0:
        roots.append(Fraction(0))
    lead = int(coeffs[dmax])
    tail = int(coeffs[dmin])
    seen = set()
    for pn in _divisors(abs(tail)):
        for qn in _divisors(abs(lead)):
            for sign in (1, -1):
                r = Fraction(sign * pn, qn)
                if r in seen:
                    continue
                seen.add(r)
                if _eval_univar(coeffs, r) == 0:
                    roots.append(r)
    return roots


def _eval_univar(coeffs, r):
    out = Fraction(0)
    for d, c in coeffs.items():
        out += c * r ** d
    return out


def _divisors(n):
    if n == 0:
        return []
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _split_quadratic(f, name):
    cs = f.coeffs_in(name)
    zero = MPoly.zero(f.vars)
    a, b, c = cs.get(2, zero), cs.get(1, zero), cs.get(0, zero)
    if not (a.is_const() and b.is_const() and c.is_const()):
        return [f]
    disc = b.const_value() ** 2 - 4 * a.const_value() * c.const_value()
    root = frac_sqrt(disc)
    if root is None:
        return [f]
    av, bv = a.const_value(), b.const_value()
    v = MPoly.var(name, f.vars)
    r1 = (-bv + root) / (2 * av)
    r2 = (-bv - root) / (2 * av)
    out = [(v - MPoly.const(r1, f.vars)).canonical()]
    out.append(out[0] if r1 == r2 else (v - MPoly.const(r2, f.vars)).canonical())
    return out


def frac_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    n = _int_sqrt(q.numerator)
    d = _int_sqrt(q.denominator)
    if n is None or d is None:
        return None
    return Fraction(n, d)


def _int_sqrt(n):
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def poly_sqrt(a):
    """Exact square root of an MPoly if it is a perfect square, else None."""
    if a.is_zero():
        return a
    scale, prim = a.int_normalize()
    if prim.is_const():
        c = frac_sqrt(scale)
        return None if c is None else MPoly.const(c, a.vars)
    out = MPoly.one(a.vars)
    for f, m in squarefree_factors(prim):
        if m % 2:
            return None
        out = out * f ** (m // 2)
    try:
        ratio = a.exact_div(out * out)
    except Exception:
        return None
    if not ratio.is_const():
        return None
    c = frac_sqrt(ratio.const_value())
    if c is None:
        return None
    return out.scale(c)
