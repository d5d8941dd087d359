"""Independent reference computations used to cross-check the library.

Nothing here calls the library's multiplication, bracket or differential;
polynomial coefficients are handled by sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy

from higherdirac.graded import GeneratorTable, GradedPoly


# -- Koszul signs by adjacent swaps -------------------------------------------

def sort_word(table: GeneratorTable, word):
    """Bubble-sort a generator word, one adjacent swap at a time.

    Returns ``(sign, sorted_word)``, or ``(0, None)`` when an odd generator
    repeats.
    """
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            u, v = w[j], w[j + 1]
            if table.index[u] > table.index[v]:
                if table.degree_of(u) % 2 and table.degree_of(v) % 2:
                    sign = -sign
                w[j], w[j + 1] = v, u
    for u, v in zip(w, w[1:]):
        if u == v and table.degree_of(u) % 2:
            return 0, None
    return sign, w


def word_poly(table: GeneratorTable, word, coeff=1) -> GradedPoly:
    sign, w = sort_word(table, word)
    if not sign:
        return table.zero()
    mono = [0] * len(table)
    for name in w:
        mono[table.index[name]] += 1
    return GradedPoly(table, {tuple(mono): Fraction(coeff) * sign})


# -- sympy views of base functions and forms ---------------------------------

def symbols(m: int):
    return sympy.symbols(f"x1:{m + 1}") if m else ()


def to_sympy(p: GradedPoly, xs) -> sympy.Expr:
    """A polynomial in the base coordinates only."""
    out = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for e, x in zip(mono, xs):
            term *= x ** e
        out += term
    return sympy.expand(out)


def form_components(omega: GradedPoly, chart) -> dict:
    """``omega = sum_I omega_I alpha^I`` with I increasing; returns I -> expr."""
    xs = symbols(chart.m)
    table = chart.table
    ix = [table.index[s] for s in chart.x]
    ial = [table.index[s] for s in chart.alpha]
    out: dict = {}
    for mono, c in omega.terms.items():
        if any(mono[i] for i in range(len(mono)) if i not in ix and i not in ial):
            raise ValueError("not a form")
        idx = tuple(j for j, i in enumerate(ial) if mono[i])
        term = sympy.Rational(c.numerator, c.denominator)
        for e, i in zip([mono[i] for i in ix], range(len(ix))):
            term *= xs[i] ** e
        out[idx] = out.get(idx, 0) + term
    return {k: sympy.expand(v) for k, v in out.items() if sympy.expand(v) != 0}


def components_to_form(comps: dict, chart) -> GradedPoly:
    """Inverse of :func:`form_components`."""
    xs = symbols(chart.m)
    table = chart.table
    out = table.zero()
    for idx, expr in comps.items():
        expr = sympy.expand(expr)
        if expr == 0:
            continue
        poly = sympy.Poly(expr, *xs) if xs else None
        terms = poly.terms() if poly is not None else [((), expr)]
        for exps, c in terms:
            c = sympy.Rational(c)
            mono = [0] * len(table)
            for e, name in zip(exps, chart.x):
                mono[table.index[name]] = int(e)
            for j in idx:
                mono[table.index[chart.alpha[j]]] = 1
            out = out + GradedPoly(table, {tuple(mono): Fraction(int(c.p), int(c.q))})
    return out


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def evaluate(comps: dict, args) -> sympy.Expr:
    """``omega(e_{i1}, ..., e_{ir})`` on basis vectors, antisymmetric in the args."""
    if len(set(args)) < len(args):
        return sympy.Integer(0)
    key = tuple(sorted(args))
    return _perm_sign(args) * comps.get(key, sympy.Integer(0))


# -- algebroid data --------------------------------------------------------------

class SymAlgebroid:
    """Anchor and structure functions as sympy expressions."""

    def __init__(self, alg):
        self.m, self.n = alg.m, alg.n
        self.xs = symbols(alg.m)
        self.rho = [[to_sympy(alg.anchor[a][i], self.xs) for i in range(alg.m)]
                    for a in range(alg.n)]
        self.c = [[[to_sympy(alg.structure[c][a][b], self.xs) for b in range(alg.n)]
                   for a in range(alg.n)] for c in range(alg.n)]

    def act(self, s, f):
        """``rho(s) f`` for a section ``s`` given by coefficient expressions."""
        return sympy.expand(sum(s[a] * self.rho[a][i] * sympy.diff(f, self.xs[i])
                                for a in range(self.n) for i in range(self.m)))

    def bracket(self, s, t):
        out = []
        for c in range(self.n):
            v = self.act(s, t[c]) - self.act(t, s[c])
            v += sum(s[a] * t[b] * self.c[c][a][b]
                     for a in range(self.n) for b in range(self.n))
            out.append(sympy.expand(v))
        return out

    def basis(self, a):
        return [sympy.Integer(int(a == j)) for j in range(self.n)]

    def jacobiator_zero(self) -> bool:
        br = self.bracket
        for a, b, c in combinations(range(self.n), 3):
            s, t, u = self.basis(a), self.basis(b), self.basis(c)
            j = [x + y + z for x, y, z in zip(br(s, br(t, u)), br(t, br(u, s)),
                                              br(u, br(s, t)))]
            if any(sympy.expand(v) != 0 for v in j):
                return False
        return True

    def anchor_morphism(self) -> bool:
        """``rho[e_a, e_b] = [rho e_a, rho e_b]`` as vector fields."""
        for a, b in combinations(range(self.n), 2):
            lhs = [sum(self.c[c][a][b] * self.rho[c][i] for c in range(self.n))
                   for i in range(self.m)]
            rhs = [sum(self.rho[a][j] * sympy.diff(self.rho[b][i], self.xs[j])
                       - self.rho[b][j] * sympy.diff(self.rho[a][i], self.xs[j])
                       for j in range(self.m)) for i in range(self.m)]
            if any(sympy.expand(u - v) != 0 for u, v in zip(lhs, rhs)):
                return False
        return True

    def d(self, comps: dict, r: int) -> dict:
        """Koszul formula for ``d_A`` of an r-form, on increasing index tuples."""
        out = {}
        for J in combinations(range(self.n), r + 1):
            total = sympy.Integer(0)
            for i, ji in enumerate(J):
                rest = J[:i] + J[i + 1:]
                total += (-1) ** i * self.act(self.basis(ji), evaluate(comps, rest))
            for i, l in combinations(range(r + 1), 2):
                rest = J[:i] + J[i + 1:l] + J[l + 1:]
                for c in range(self.n):
                    coeff = self.c[c][J[i]][J[l]]
                    if coeff != 0:
                        total += (-1) ** (i + l) * coeff * evaluate(comps, (c,) + rest)
            total = sympy.expand(total)
            if total != 0:
                out[J] = total
        return out


def d_A_oracle(omega: GradedPoly, alg, chart) -> GradedPoly:
    """Lie algebroid differential of a homogeneous form by the Koszul formula."""
    if not omega:
        return chart.table.zero()
    sym = SymAlgebroid(alg)
    out = chart.table.zero()
    for r, part in omega.degree_components().items():
        out = out + components_to_form(sym.d(form_components(part, chart), r), chart)
    return out


def master_oracle(alg, H, chart) -> bool:
    """Jacobi, anchor morphism and closedness of H, all via sympy."""
    sym = SymAlgebroid(alg)
    if not (sym.jacobiator_zero() and sym.anchor_morphism()):
        return False
    if H is None or not H:
        return True
    return not d_A_oracle(H, alg, chart)
