"""Eigenpolynomial (Darboux polynomial) search for polynomial derivations.

Method: undetermined coefficients.  Write f = sum c_a m_a over a monomial
basis and lam = sum u_b m_b; the identity d[f] - lam*f = 0 is linear in u
and bilinear in (u, c).  For each choice of the leading basis monomial of
f (pivot, normalized to 1) the coefficient-matching system is solved by a
small degree-<=2 constraint solver: the linear bulk is eliminated sparsely,
products are branched exactly, and a mod-p image of the same system is
used only to discard pivots whose systems are provably inconsistent
(never to accept; every accepted pair is re-verified by exact polynomial
division).

Two structural reductions keep the systems small:

* cofactor support pruning: processing candidate cofactor monomials mu in
  descending order, u_mu can be nonzero only when mu + pivot lies in the
  support of the d-images or of products of already-live cofactor
  monomials with basis monomials;
* for the extended operator carrying the auxiliary direction, deg_s(lam)
  <= 1 with the s-part pinned to deg_s(f) * N^2, so only the s-free part
  of the cofactor is unknown.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundsTooLarge, BudgetExceeded
from .mpoly import MPoly, XYZS, grlex_key
from .polyfactor import squarefree_factors
from .derivations import apply_to_poly

_PRIME = (1 << 31) - 1      # mod-p prescreen modulus (3 mod 4)


@dataclass(frozen=True)
class SearchConfig:
    max_total_degree: int = 2          # total degree cap for f in (x,y,z)
    max_degree_s: int = 2              # cap on deg_s(f)
    max_var_degree: int | None = None  # optional per-variable cap in (x,y,z)
    lam_degree_bound: int | None = None
    time_budget: float | None = None   # seconds
    require_s: bool = False

    def __post_init__(self):
        if self.max_total_degree < 0 or self.max_degree_s < 0:
            raise ValueError("bounds must be nonnegative")


@dataclass(frozen=True)
class EigenPair:
    f: MPoly            # primitive, canonical sign
    lam: MPoly          # cofactor: d[f] = lam * f exactly
    absolute: bool      # True when lam == 0

    def sort_key(self):
        return (self.f.degree_in("s"), self.f.degree(),
                [(grlex_key(e), str(c)) for e, c in self.f.sorted_terms()])


class SearchTruncated(Exception):
    """Internal: budget ran out mid-search."""


# --- monomial bases ---

def _monomials_xyz(total, pervar=None):
    out = []
    for ex in range(total + 1):
        for ey in range(total + 1 - ex):
            for ez in range(total + 1 - ex - ey):
                if pervar is not None and max(ex, ey, ez) > pervar:
                    continue
                out.append((ex, ey, ez, 0))
    out.sort(key=grlex_key)
    return out


def _monomials_xyzs(total, sdeg, pervar=None):
    out = []
    for es in range(min(sdeg, total) + 1):
        for (ex, ey, ez, _) in _monomials_xyz(total - es, pervar):
            out.append((ex, ey, ez, es))
    out.sort(key=grlex_key)
    return out


# --- fields ---

class _QQ:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def conv(fr):
        return fr

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def sqrt(a):
        from .polyfactor import frac_sqrt
        return frac_sqrt(a)


class _GFp:
    def __init__(self, p=_PRIME):
        self.p = p
        self.zero = 0
        self.one = 1

    def conv(self, fr):
        den = fr.denominator % self.p
        if den == 0:
            raise ZeroDivisionError("denominator divisible by the modulus")
        return fr.numerator % self.p * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def neg(self, a):
        return -a % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def sqrt(self, a):
        a %= self.p
        if a == 0:
            return 0
        r = pow(a, (self.p + 1) // 4, self.p)       # p = 3 mod 4
        return r if r * r % self.p == a else None


# --- the degree-<=2 constraint solver ---

class _QuadSolver:
    """Solve a system of degree-<=2 polynomial equations exactly.

    Keys of an equation dict are () for the constant, (v,) for a linear
    term and (v, w) with v <= w for a product.  Returns (solutions,
    complete): each solution maps var -> linear expr dict (free vars are
    absent and read as zero); ``complete`` is False when some branch was
    abandoned, meaning results may be missed but never wrong.
    """

    MAX_BRANCHES = 600

    def __init__(self, field):
        self.F = field

    def solve(self, eqs):
        solutions = []
        complete = True
        stack = [([dict(e) for e in eqs], {})]
        branches = 0
        while stack:
            branches += 1
            if branches > self.MAX_BRANCHES:
                complete = False
                break
            eqs, assign = stack.pop()
            state = self._propagate(eqs, assign)
            if state is None:
                continue
            eqs, assign = state
            if not eqs:
                solutions.append(assign)
                continue
            if not self._branch(eqs, assign, stack):
                complete = False
        return solutions, complete

    # -- linear phase --

    def _propagate(self, eqs, assign):
        F = self.F
        assign = dict(assign)
        while True:
            linear = []
            quads = []
            for eq in eqs:
                if not eq:
                    continue
                if list(eq.keys()) == [()]:
                    return None
                if any(len(k) == 2 for k in eq):
                    quads.append(eq)
                else:
                    linear.append(eq)
            if not linear:
                return quads, assign
            subs = self._linear_eliminate(linear)
            if subs is None:
                return None
            if not subs:
                return quads, assign
            for var, expr in subs.items():
                assign[var] = expr
            for k in list(assign):
                assign[k] = self._resolve_expr(assign[k], subs)
            eqs = [self._subst_many(eq, subs) for eq in quads]
            eqs = [e for e in eqs if e]

    def _linear_eliminate(self, rows):
        """Sparse Gaussian elimination; returns {var: expr over free vars}."""
        F = self.F
        pivots = {}              # var -> expr (may reference later pivots)
        order = []
        for row in rows:
            row = self._resolve_row(row, pivots)
            if not row:
                continue
            if list(row.keys()) == [()]:
                return None
            var = min(k[0] for k in row if k)
            coef = row[(var,)]
            expr = {}
            for k, c in row.items():
                if k == (var,):
                    continue
                expr[k] = F.div(F.neg(c), coef)
            pivots[var] = expr
            order.append(var)
        # back-resolve so each expr references only non-pivot vars
        for var in reversed(order):
            pivots[var] = self._resolve_expr(pivots[var], pivots, skip=var)
        return pivots

    def _resolve_row(self, row, pivots):
        F = self.F
        out = {}
        work = list(row.items())
        while work:
            k, c = work.pop()
            if k and k[0] in pivots:
                for k2, c2 in pivots[k[0]].items():
                    work.append((k2, F.mul(c, c2)))
            else:
                v = F.add(out.get(k, F.zero), c)
                if F.is_zero(v):
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def _resolve_expr(self, expr, pivots, skip=None):
        F = self.F
        out = {}
        work = list(expr.items())
        guard = 0
        while work:
            guard += 1
            if guard > 100000:
                raise AssertionError("resolution runaway")
            k, c = work.pop()
            if k and k[0] in pivots and k[0] != skip:
                for k2, c2 in pivots[k[0]].items():
                    work.append((k2, F.mul(c, c2)))
            else:
                v = F.add(out.get(k, F.zero), c)
                if F.is_zero(v):
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def _subst_many(self, eq, subs):
        F = self.F
        out = {}

        def add(key, coef):
            if F.is_zero(coef):
                return
            key = tuple(sorted(key))
            v = F.add(out.get(key, F.zero), coef)
            if F.is_zero(v):
                out.pop(key, None)
            else:
                out[key] = v

        def expand(var):
            return subs.get(var)

        for key, coef in eq.items():
            if len(key) == 0:
                add((), coef)
            elif len(key) == 1:
                e = expand(key[0])
                if e is None:
                    add(key, coef)
                else:
                    for k2, c2 in e.items():
                        add(k2, F.mul(coef, c2))
            else:
                v, w = key
                ev, ew = expand(v), expand(w)
                if ev is None and ew is None:
                    add(key, coef)
                elif ev is None:
                    for k2, c2 in ew.items():
                        add(k2 + (v,) if k2 else (v,), F.mul(coef, c2))
                elif ew is None:
                    for k2, c2 in ev.items():
                        add(k2 + (w,) if k2 else (w,), F.mul(coef, c2))
                else:
                    for k2, c2 in ev.items():
                        for k3, c3 in ew.items():
                            nk = k2 + k3
                            if len(nk) > 2:
                                raise AssertionError("degree blowup")
                            add(nk, F.mul(coef, F.mul(c2, c3)))
        return out

    # -- branching --

    def _branch(self, eqs, assign, stack):
        F = self.F
        for eq in eqs:
            if len(eq) == 1:
                (key, _), = eq.items()
                if len(key) == 2:
                    rest = [e for e in eqs if e is not eq]
                    for v in dict.fromkeys(key):
                        stack.append(([self._subst_many(e, {v: {}}) for e in rest],
                                      {**assign, v: {}}))
                    return True
        for eq in eqs:
            vars_here = {v for k in eq for v in k}
            if len(vars_here) == 1:
                v = vars_here.pop()
                roots = self._quad_roots(eq.get((v, v), F.zero),
                                         eq.get((v,), F.zero),
                                         eq.get((), F.zero))
                if roots is None:
                    return False
                rest = [e for e in eqs if e is not eq]
                for r in roots:
                    val = {} if F.is_zero(r) else {(): r}
                    stack.append(([self._subst_many(e, {v: val}) for e in rest],
                                  {**assign, v: val}))
                return True
        for eq in eqs:
            vars_here = sorted({v for k in eq for v in k})
            if len(vars_here) == 2:
                u, v = vars_here
                a = eq.get((u, v), F.zero)
                if F.is_zero(a) or not F.is_zero(eq.get((u, u), F.zero)) \
                        or not F.is_zero(eq.get((v, v), F.zero)):
                    continue
                b = eq.get((u,), F.zero)
                c = eq.get((v,), F.zero)
                d = eq.get((), F.zero)
                if F.is_zero(F.sub(F.mul(a, d), F.mul(b, c))):
                    # a uv + b u + c v + bc/a = (a u + c)(a v + b)/a
                    rest = [e for e in eqs if e is not eq]
                    for w, coef in ((u, c), (v, b)):
                        r = F.div(F.neg(coef), a)
                        val = {} if F.is_zero(r) else {(): r}
                        stack.append(([self._subst_many(e, {w: val}) for e in rest],
                                      {**assign, w: val}))
                    return True
        return False

    def _quad_roots(self, a, b, c):
        F = self.F
        if F.is_zero(a):
            if F.is_zero(b):
                return None if not F.is_zero(c) else []
            return [F.div(F.neg(c), b)]
        disc = F.sub(F.mul(b, b), F.mul(F.conv(Fraction(4)), F.mul(a, c)))
        r = F.sqrt(disc)
        if r is None:
            return []
        two_a = F.mul(F.conv(Fraction(2)), a)
        r1 = F.div(F.sub(F.neg(b), r), two_a)
        r2 = F.div(F.add(F.neg(b), r), two_a)
        return [r1] if r1 == r2 else [r1, r2]


def _resolve_value(assign, var, field, depth=0):
    if depth > 200:
        raise AssertionError("cyclic assignment")
    expr = assign.get(var)
    if expr is None:
        return field.zero
    out = expr.get((), field.zero)
    for k, c in expr.items():
        if k == ():
            continue
        out = field.add(out, field.mul(c, _resolve_value(assign, k[0], field,
                                                         depth + 1)))
    return out


# --- per-pivot assembly with cofactor pruning ---

def _solve_pivots(basis_exps, image_polys, lam_exps, deadline, emit, pivots):
    """basis elements are monomials (coefficient 1) given by exponent tuple.

    ``emit(pivot, cvec_resolver)`` is called per exact solution.
    """
    nf = len(basis_exps)
    gf = _GFp()
    image_terms = []
    gf_ok = True
    for img in image_polys:
        try:
            image_terms.append({e: (c, gf.conv(c)) for e, c in img.terms.items()})
        except ZeroDivisionError:
            gf_ok = False
            image_terms.append({e: (c, 0) for e, c in img.terms.items()})
    lam_sorted = sorted(lam_exps, key=grlex_key, reverse=True)

    for pivot in sorted(pivots, reverse=True):
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTruncated()
        plead = basis_exps[pivot]
        # prune cofactor monomials by descending support induction
        live_coords = set()
        for i in range(pivot + 1):
            live_coords.update(image_terms[i].keys())
        live_lams = []
        for mu in lam_sorted:
            gamma = tuple(a + b for a, b in zip(mu, plead))
            if gamma in live_coords:
                live_lams.append(mu)
                for i in range(pivot + 1):
                    live_coords.add(tuple(a + b for a, b in zip(mu, basis_exps[i])))
        # assemble equations: coord -> {key: Fraction}
        eqs = {}
        for i in range(pivot + 1):
            ckey = () if i == pivot else (i,)
            for e, (c, _) in image_terms[i].items():
                d = eqs.setdefault(e, {})
                d[ckey] = d.get(ckey, Fraction(0)) + c
        for j, mu in enumerate(live_lams):
            uj = nf + j
            for i in range(pivot + 1):
                gamma = tuple(a + b for a, b in zip(mu, basis_exps[i]))
                key = (uj,) if i == pivot else tuple(sorted((i, uj)))
                d = eqs.setdefault(gamma, {})
                d[key] = d.get(key, Fraction(0)) - 1
        system = [e for _, e in sorted(eqs.items())
                  if any(v != 0 for v in e.values())]
        system = [{k: v for k, v in e.items() if v != 0} for e in system]
        system = [e for e in system if e]
        if gf_ok:
            sys_gf = [{k: gf.conv(c) for k, c in eq.items()} for eq in system]
            sols, complete = _QuadSolver(gf).solve(sys_gf)
            if complete and not sols:
                continue
        sols, _complete = _QuadSolver(_QQ).solve(system)
        for assign in sols:
            emit(pivot, assign)


def _emit_solutions(pivot, assign, basis_exps, vars, found):
    nf = len(basis_exps)
    eq_vars = set()
    for expr in assign.values():
        for k in expr:
            if k:
                eq_vars.add(k[0])
    frees = sorted(v for v in eq_vars if v not in assign and v < nf)
    choices = [dict(assign)]
    for fv in frees[:4]:
        choices.append({**assign, fv: {(): Fraction(1)}})
    for choice in choices:
        terms = {basis_exps[pivot]: Fraction(1)}
        for i in range(pivot):
            c = _resolve_value(choice, i, _QQ)
            if c:
                terms[basis_exps[i]] = terms.get(basis_exps[i], Fraction(0)) + c
        f = MPoly(terms, vars)
        if f.is_zero() or f.is_const():
            continue
        found[f.canonical()] = f.canonical()


# --- public search ---

def find_eigenpolys(d, cfg, problem=None):
    """All eigenpairs of the derivation up to the configured bounds.

    Output pairs satisfy d[f] = lam*f exactly (verified by polynomial
    division), are primitive with canonical sign, deduplicated up to
    constants, split into squarefree candidate factors, with constant f
    excluded; absolute invariants (lam = 0) are flagged.  Raises
    BudgetExceeded with partial results when the time budget runs out.
    """
    deadline = None
    if cfg.time_budget is not None:
        deadline = time.monotonic() + cfg.time_budget
    found = {}
    truncated = False
    try:
        if d.cs.is_zero():
            _search_plain(d, cfg, deadline, found)
        elif problem is not None and cfg.require_s:
            _search_layered(d, cfg, problem, deadline, found)
        else:
            _search_generic(d, cfg, deadline, found)
    except SearchTruncated:
        truncated = True
    pairs = _postprocess(d, found, cfg)
    if truncated:
        raise BudgetExceeded("eigenpolynomial search budget exceeded",
                             partial=pairs)
    return pairs


def _postprocess(d, found, cfg):
    out = {}
    for f in found.values():
        for g, _mult in squarefree_factors(f):
            if g.is_const():
                continue
            img = apply_to_poly(d, g)
            if img.is_zero():
                lam = MPoly.zero(g.vars)
            else:
                try:
                    lam = img.exact_div(g)
                except Exception:
                    continue
            if cfg.require_s and g.degree_in("s") < 1:
                continue
            out[g] = EigenPair(g, lam, lam.is_zero())
    return sorted(out.values(), key=lambda p: p.sort_key())


def _search_plain(d, cfg, deadline, found):
    """s-free basis for derivations without an s-direction."""
    vars = d.cx.vars
    basis = _monomials_xyz(cfg.max_total_degree, cfg.max_var_degree)
    lam_bound = cfg.lam_degree_bound
    if lam_bound is None:
        lam_bound = max(0, d.max_coeff_degree() - 1)
    lam_exps = _monomials_xyz(lam_bound)
    images = [apply_to_poly(d, MPoly.monomial(e, 1, vars)) for e in basis]
    _solve_pivots(basis, images, lam_exps, deadline,
                  lambda p, a: _emit_solutions(p, a, basis, vars, found),
                  range(len(basis)))


def _search_generic(d, cfg, deadline, found):
    """Full (x,y,z,s) basis for arbitrary derivations (oracle tests)."""
    vars = d.cx.vars
    total = cfg.max_total_degree + cfg.max_degree_s
    basis = [e for e in _monomials_xyzs(total, cfg.max_degree_s, cfg.max_var_degree)
             if sum(e[:3]) <= cfg.max_total_degree]
    lam_bound = cfg.lam_degree_bound
    if lam_bound is None:
        lam_bound = max(0, d.max_coeff_degree() - 1)
    lam_exps = _monomials_xyzs(lam_bound, max(2, cfg.max_degree_s))
    images = [apply_to_poly(d, MPoly.monomial(e, 1, vars)) for e in basis]
    _solve_pivots(basis, images, lam_exps, deadline,
                  lambda p, a: _emit_solutions(p, a, basis, vars, found),
                  range(len(basis)))


def _search_layered(d, cfg, problem, deadline, found):
    """Structured search for the extended operator of a problem.

    Unknowns are the s-layers a_0..a_delta of f plus the s-free cofactor
    part; the s-coefficient of the cofactor is pinned to delta*N^2.  The
    layer equations for k = 0..delta are

        N*Dc[a_k] + k*E1*a_k + (k-1-delta)*N^2*a_{k-1} - (k+1)*E0*a_{k+1}
            = lam0 * a_k

    where Dc is the cleared derivative (N, N y', M) and E1, E0 are the
    s-linear and s-free parts of the auxiliary polynomial.
    """
    vars = d.cx.vars
    N, M = problem.n_poly, problem.m_poly
    E1 = N * M.partial("z") - M * N.partial("z")
    E0 = N * M.partial("y") - M * N.partial("y")
    N2 = N * N
    z = MPoly.var("z", vars)

    def cleared(a):
        return N * a.partial("x") + N * z * a.partial("y") + M * a.partial("z")

    lam_bound = cfg.lam_degree_bound
    if lam_bound is None:
        lam_bound = max(N.degree() + max(N.degree() + 1, M.degree()) - 1,
                        E1.degree(), E0.degree(), 2 * N.degree(), 0)
    lam_exps = _monomials_xyz(lam_bound)

    # iterative deepening per s-degree: a level stops deepening once it
    # produces a fresh candidate of exactly that s-degree (products of
    # lower-degree finds do not count), and every s-degree is searched
    reduced_seen = set()
    for delta in range(1, cfg.max_degree_s + 1):
        for total in range(0, cfg.max_total_degree + 1):
            if deadline is not None and time.monotonic() > deadline:
                raise SearchTruncated()
            monos = _monomials_xyz(total, cfg.max_var_degree)
            _layered_level(vars, N, M, E1, E0, N2, cleared, lam_exps, monos,
                           delta, deadline, found)
            fresh_at_delta = False
            for f in list(found.values()):
                for g, _m in squarefree_factors(f):
                    if g.is_const():
                        continue
                    g = g.canonical()
                    if g not in reduced_seen:
                        reduced_seen.add(g)
                        if g.degree_in("s") == delta:
                            fresh_at_delta = True
            if fresh_at_delta:
                break


def _layered_level(vars, N, M, E1, E0, N2, cleared, lam_exps, monos, delta,
                   deadline, found):
    sidx = vars.index("s")
    basis = []
    for i in range(delta + 1):
        for e in monos:
            basis.append(e[:sidx] + (i,) + e[sidx + 1:])
    basis.sort(key=grlex_key)
    s = MPoly.var("s", vars)
    images = []
    for e in basis:
        i = e[sidx]
        m = MPoly.monomial(e[:sidx] + (0,) + e[sidx + 1:], 1, vars)
        img = (cleared(m) * N + E1.scale(i) * m) * s ** i
        if i - delta != 0:
            img = img + N2.scale(i - delta) * m * s ** (i + 1)
        if i >= 1:
            img = img - E0.scale(i) * m * s ** (i - 1)
        images.append(img)
    pivots = [k for k, e in enumerate(basis) if e[sidx] == delta]
    _solve_pivots(basis, images, lam_exps, deadline,
                  lambda p, a: _emit_solutions(p, a, basis, vars, found),
                  pivots)


def brute_force_eigenpolys(d, max_degree, coeff_set):
    """Exhaustive oracle: tiny bounds only, used to cross-check the search."""
    if max_degree > 2:
        raise BoundsTooLarge("brute force supports degree <= 2 only")
    vars = d.cx.vars
    if d.cs.is_zero():
        monos = _monomials_xyz(max_degree)
    else:
        monos = _monomials_xyzs(max_degree, max_degree)
    coeffs = sorted({Fraction(c) for c in coeff_set})
    count = len(coeffs) ** len(monos)
    if count > 300000:
        raise BoundsTooLarge("%d candidates is too many" % count)
    out = {}
    for combo in itertools.product(coeffs, repeat=len(monos)):
        lead = next((c for c in combo if c != 0), None)
        if lead is None or lead < 0:
            continue                      # skip zero and sign duplicates
        f = MPoly({e: c for e, c in zip(monos, combo) if c}, vars)
        if f.is_const():
            continue
        img = apply_to_poly(d, f)
        if img.is_zero():
            lam = MPoly.zero(vars)
        else:
            try:
                lam = img.exact_div(f)
            except Exception:
                continue
        g = f.canonical()
        if g not in out:
            out[g] = EigenPair(g, lam, lam.is_zero())
    return sorted(out.values(), key=lambda p: p.sort_key())
