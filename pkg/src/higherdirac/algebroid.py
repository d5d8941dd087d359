"""Lie algebroid data, the hamiltonian theta_H and the brackets it generates.

Conventions.  A section ``s = s^a e_a`` of A acts on forms by
``i_s = s^a d/d alpha^a``.  The hamiltonian is::

    theta_H = rho^i_a alpha^a p_i - 1/2 c^c_ab alpha^a alpha^b a_c
              + 1/2 pi^ab a_a a_b  (k = 3 only) + H

so that ``{theta, f} = d_A f`` on forms and the derived bracket of basis
sections returns ``+c^c_ab``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GradedError, MalformedSectionError, NotHomogeneousError
from .graded import Derivation, GradedPoly, parse_poly
from .report import Report
from .symplectic import (
    CotangentChart,
    Section,
    base_table,
    compose_section,
    decompose_section,
    poisson,
)


def _base_poly(value, table) -> GradedPoly:
    if isinstance(value, GradedPoly):
        return value.embed(table)
    if isinstance(value, str):
        return parse_poly(value, table)
    return table.constant(value)


@dataclass(frozen=True)
class LieAlgebroidData:
    """Anchor ``anchor[a][i] = rho^i_a`` and ``structure[c][a][b] = c^c_ab``.

    Entries are polynomials in the base coordinates.  The Jacobi identity is
    not assumed.
    """

    m: int
    n: int
    anchor: tuple
    structure: tuple

    def __post_init__(self):
        if len(self.anchor) != self.n or any(len(r) != self.m for r in self.anchor):
            raise GradedError(f"anchor must be {self.n} x {self.m}")
        if (len(self.structure) != self.n
                or any(len(row) != self.n or any(len(col) != self.n for col in row)
                       for row in self.structure)):
            raise GradedError(f"structure functions must be {self.n}^3")
        for c in range(self.n):
            for a in range(self.n):
                for b in range(self.n):
                    if self.structure[c][a][b] != -self.structure[c][b][a]:
                        raise GradedError(f"c^{c}_({a},{b}) is not antisymmetric")

    @classmethod
    def from_arrays(cls, m: int, n: int, anchor=None, structure=None) -> "LieAlgebroidData":
        base = base_table(m)
        if anchor is None:
            anchor = [[0] * m for _ in range(n)]
        if structure is None:
            structure = [[[0] * n for _ in range(n)] for _ in range(n)]
        anc = tuple(tuple(_base_poly(v, base) for v in row) for row in anchor)
        st = tuple(tuple(tuple(_base_poly(v, base) for v in col) for col in row)
                   for row in structure)
        return cls(m, n, anc, st)

    @classmethod
    def lie_algebra(cls, structure) -> "LieAlgebroidData":
        """Lie algebra over a point from constants ``structure[c][a][b]``."""
        return cls.from_arrays(0, len(structure), None, structure)

    @property
    def base(self):
        return base_table(self.m)

    # -- brackets on sections -------------------------------------------------

    def anchor_action(self, s: Sequence[GradedPoly], f: GradedPoly) -> GradedPoly:
        """``rho(s)(f)`` for a base polynomial ``f``."""
        base = self.base
        out = base.zero()
        for a in range(self.n):
            if not s[a]:
                continue
            for i in range(self.m):
                r = self.anchor[a][i]
                if r:
                    out = out + s[a] * r * f.derivative(f"x{i + 1}")
        return out

    def bracket(self, s: Sequence[GradedPoly], t: Sequence[GradedPoly]) -> tuple:
        """``[s, t]`` via ``c`` and the Leibniz rule with the anchor."""
        base = self.base
        s = [_base_poly(v, base) for v in s]
        t = [_base_poly(v, base) for v in t]
        out = []
        for c in range(self.n):
            v = self.anchor_action(s, t[c]) - self.anchor_action(t, s[c])
            for a in range(self.n):
                if not s[a]:
                    continue
                for b in range(self.n):
                    if t[b] and self.structure[c][a][b]:
                        v = v + s[a] * t[b] * self.structure[c][a][b]
            out.append(v)
        return tuple(out)

    def basis(self, a: int) -> tuple:
        base = self.base
        return tuple(base.one() if j == a else base.zero() for j in range(self.n))

    def jacobiator(self, s, t, u) -> tuple:
        b = self.bracket
        terms = [b(s, b(t, u)), b(t, b(u, s)), b(u, b(s, t))]
        return tuple(terms[0][c] + terms[1][c] + terms[2][c] for c in range(self.n))


@dataclass(frozen=True)
class TwistH:
    """A form of degree k+1 in x and alpha."""

    H: GradedPoly
    chart: CotangentChart

    def __post_init__(self):
        if self.H.table != self.chart.table:
            raise GradedError("H must live on the chart")
        if not self.chart.is_form(self.H):
            raise GradedError("H may only involve x and alpha")
        if not self.H.is_homogeneous(self.chart.k + 1):
            raise NotHomogeneousError(f"H must have degree {self.chart.k + 1}")


@dataclass(frozen=True)
class PairingData:
    """Symmetric ``pi[a][b]``: an element of Sym^2 A, i.e. a pairing on A*."""

    pi: tuple

    def __post_init__(self):
        n = len(self.pi)
        for a in range(n):
            if len(self.pi[a]) != n:
                raise GradedError("pairing must be square")
            for b in range(n):
                if self.pi[a][b] != self.pi[b][a]:
                    raise GradedError("pairing must be symmetric")

    @classmethod
    def from_arrays(cls, m: int, pi) -> "PairingData":
        base = base_table(m)
        return cls(tuple(tuple(_base_poly(v, base) for v in row) for row in pi))

    def flat(self, xi: Sequence[GradedPoly]) -> tuple:
        """``flat(xi)^a = pi^ab xi_b``."""
        n = len(self.pi)
        return tuple(sum((self.pi[a][b] * xi[b] for b in range(n)), xi[0] * 0)
                     for a in range(n))


def _h_poly(H, chart) -> GradedPoly:
    if H is None:
        return chart.table.zero()
    if isinstance(H, TwistH):
        return H.H
    if isinstance(H, str):
        H = parse_poly(H, chart.table)
    return TwistH(H, chart).H


def _check_dims(alg: LieAlgebroidData, chart: CotangentChart) -> None:
    if (alg.m, alg.n) != (chart.m, chart.n):
        raise GradedError(f"algebroid (m={alg.m}, n={alg.n}) does not fit {chart!r}")


# ---------------------------------------------------------------------------
# hamiltonian


def theta_part(alg: LieAlgebroidData, chart: CotangentChart) -> GradedPoly:
    """The vector-field part ``rho alpha p - 1/2 c alpha alpha a``."""
    _check_dims(alg, chart)
    g = chart.table.gen
    out = chart.table.zero()
    for a in range(alg.n):
        for i in range(alg.m):
            r = alg.anchor[a][i]
            if r:
                out = out + chart.lift(r) * g(chart.alpha[a]) * g(chart.p[i])
    half = Fraction(-1, 2)
    for c in range(alg.n):
        for a in range(alg.n):
            for b in range(alg.n):
                s = alg.structure[c][a][b]
                if s:
                    out = out + (chart.lift(s) * g(chart.alpha[a]) * g(chart.alpha[b])
                                 * g(chart.a[c])).scale(half)
    return out


def pairing_part(pi: PairingData, chart: CotangentChart) -> GradedPoly:
    g = chart.table.gen
    out = chart.table.zero()
    for a in range(chart.n):
        for b in range(chart.n):
            v = pi.pi[a][b]
            if v:
                out = out + (chart.lift(v) * g(chart.a[a]) * g(chart.a[b])).scale(Fraction(1, 2))
    return out


def build_theta(alg: LieAlgebroidData, H=None, pi: PairingData | None = None,
                chart: CotangentChart | None = None) -> GradedPoly:
    if chart is None:
        raise GradedError("a chart is required")
    _check_dims(alg, chart)
    if pi is not None and chart.k != 3:
        raise GradedError("a pairing term only exists for k = 3")
    out = theta_part(alg, chart) + _h_poly(H, chart)
    if pi is not None:
        out = out + pairing_part(pi, chart)
    return out


def split_theta(theta_H: GradedPoly, chart: CotangentChart) -> dict[str, GradedPoly]:
    """Split a degree k+1 function into its theta, pi and H parts."""
    table = chart.table
    ia = [table.index[s] for s in chart.a]
    ip = [table.index[s] for s in chart.p]
    parts = {"theta": {}, "pi": {}, "H": {}}
    for mono, c in theta_H.terms.items():
        na = sum(mono[i] for i in ia)
        np_ = sum(mono[i] for i in ip)
        if na == 0 and np_ == 0:
            parts["H"][mono] = c
        elif na + np_ == 1:
            parts["theta"][mono] = c
        elif na == 2 and np_ == 0:
            parts["pi"][mono] = c
        else:
            raise GradedError(f"unexpected term in hamiltonian: {theta_H}")
    return {k: GradedPoly._raw(table, v) for k, v in parts.items()}


# ---------------------------------------------------------------------------
# Cartan calculus on forms


def _require_form(omega: GradedPoly, chart: CotangentChart) -> None:
    if omega.table != chart.table:
        raise GradedError("form does not live on the chart")
    if not chart.is_form(omega):
        raise MalformedSectionError(f"not a form in x and alpha: {omega}")


def d_A_derivation(alg: LieAlgebroidData, chart: CotangentChart) -> Derivation:
    """``d_A`` on generators: ``x^i -> rho^i_a alpha^a``,
    ``alpha^c -> -1/2 c^c_ab alpha^a alpha^b``."""
    _check_dims(alg, chart)
    g = chart.table.gen
    values = {}
    for i, x in enumerate(chart.x):
        v = chart.table.zero()
        for a in range(alg.n):
            if alg.anchor[a][i]:
                v = v + chart.lift(alg.anchor[a][i]) * g(chart.alpha[a])
        values[x] = v
    for c, al in enumerate(chart.alpha):
        v = chart.table.zero()
        for a in range(alg.n):
            for b in range(alg.n):
                s = alg.structure[c][a][b]
                if s:
                    v = v + (chart.lift(s) * g(chart.alpha[a]) * g(chart.alpha[b])).scale(
                        Fraction(-1, 2))
        values[al] = v
    return Derivation(chart.table, 1, values)


def d_A(omega: GradedPoly, alg: LieAlgebroidData, chart: CotangentChart) -> GradedPoly:
    """Lie algebroid differential of a form."""
    _require_form(omega, chart)
    return d_A_derivation(alg, chart)(omega)


def interior(s: Sequence, omega: GradedPoly, chart: CotangentChart) -> GradedPoly:
    """``i_s omega`` for a section ``s`` of A given by base coefficients."""
    out = chart.table.zero()
    for j, sj in enumerate(s):
        if sj:
            d = omega.derivative(chart.alpha[j])
            if d:
                out = out + chart.lift(sj) * d
    return out


def lie_derivative(s: Sequence, omega: GradedPoly, alg: LieAlgebroidData,
                   chart: CotangentChart) -> GradedPoly:
    """``L_s = i_s d_A + d_A i_s`` on forms."""
    _require_form(omega, chart)
    return (interior(s, d_A(omega, alg, chart), chart)
            + d_A(interior(s, omega, chart), alg, chart))


# ---------------------------------------------------------------------------
# brackets on A + wedge^{k-1} A*


def _as_section(e, chart) -> Section:
    if isinstance(e, Section):
        return e
    return decompose_section(e, chart)


def cartan_bracket(e1, e2, alg: LieAlgebroidData, H, chart: CotangentChart) -> GradedPoly:
    """``[a, b] + L_a eta - i_b d_A omega - i_b i_a H`` for e1 = a + omega, e2 = b + eta."""
    _check_dims(alg, chart)
    s1, s2 = _as_section(e1, chart), _as_section(e2, chart)
    Hp = _h_poly(H, chart)
    a, b = s1.a, s2.a
    form = lie_derivative(a, s2.form, alg, chart)
    form = form - interior(b, d_A(s1.form, alg, chart), chart)
    form = form - interior(b, interior(a, Hp, chart), chart)
    return compose_section(Section(alg.bracket(a, b), form), chart)


def derived_bracket(e1: GradedPoly, e2: GradedPoly, theta_H: GradedPoly,
                    chart: CotangentChart) -> GradedPoly:
    """``{{e1, theta_H}, e2}``."""
    decompose_section(e1, chart)
    decompose_section(e2, chart)
    if not theta_H.is_homogeneous(chart.k + 1):
        raise NotHomogeneousError(f"theta_H must have degree {chart.k + 1}")
    return poisson(poisson(e1, theta_H, chart), e2, chart)


def pairing(e1, e2, chart: CotangentChart) -> GradedPoly:
    """``<a + omega, b + eta> = i_a eta + i_b omega``."""
    s1, s2 = _as_section(e1, chart), _as_section(e2, chart)
    return interior(s1.a, s2.form, chart) + interior(s2.a, s1.form, chart)


# ---------------------------------------------------------------------------
# master equation


def _type_split(f: GradedPoly, chart: CotangentChart) -> dict[str, GradedPoly]:
    table = chart.table
    ia = {table.index[s] for s in chart.a}
    ip = {table.index[s] for s in chart.p}
    buckets: dict[str, dict] = {}
    for mono, c in f.terms.items():
        na = sum(mono[i] for i in ia)
        np_ = sum(mono[i] for i in ip)
        key = "form" if na + np_ == 0 else ("p" * np_ + "a" * na)
        buckets.setdefault(key, {})[mono] = c
    return {k: GradedPoly._raw(table, v) for k, v in sorted(buckets.items())}


def check_master(theta_H: GradedPoly, chart: CotangentChart) -> Report:
    """``{theta_H, theta_H} = 0``, reported by component equation."""
    if not theta_H.is_homogeneous(chart.k + 1):
        raise NotHomogeneousError(f"theta_H must be homogeneous of degree {chart.k + 1}")
    parts = split_theta(theta_H, chart)
    th, pi, H = parts["theta"], parts["pi"], parts["H"]
    rep = Report("master-equation")
    full = poisson(theta_H, theta_H, chart)
    rep.data["obstruction"] = str(full)
    rep.data["components"] = {k: str(v) for k, v in _type_split(full, chart).items()}
    br = lambda f, g: poisson(f, g, chart)  # noqa: E731
    if chart.k == 3:
        eqs = [("{theta,theta}+2{pi,H}=0", br(th, th) + br(pi, H).scale(2)),
               ("{theta,pi}=0", br(th, pi)),
               ("{theta,H}=0", br(th, H))]
    else:
        if pi:
            raise GradedError("a Sym^2 term only exists for k = 3")
        eqs = [("{theta,theta}=0", br(th, th)), ("{theta,H}=0", br(th, H))]
    for name, value in eqs:
        rep.add(name, not value, None if not value else str(value))
    if bool(full) == rep.passed:
        raise AssertionError("component equations disagree with the full bracket")
    return rep


# ---------------------------------------------------------------------------
# Theorem for k = 3: bracket, anchor, pairing, H


def _forms_on_basis(omega: GradedPoly, vectors: Sequence[Sequence], chart) -> GradedPoly:
    """Evaluate ``omega(v_1, ..., v_r)`` by successive interior products."""
    out = omega
    for v in vectors:
        out = interior(v, out, chart)
    return out


def check_q3_conditions(alg: LieAlgebroidData, pi: PairingData | None, H,
                        chart: CotangentChart) -> Report:
    """The four conditions of the k = 3 classification, on basis data.

    Every clause is tensorial once the Leibniz corrections are included, so
    evaluating on basis sections, plus one coordinate multiple per slot for
    the non-tensorial directions, is enough.
    """
    if chart.k != 3:
        raise GradedError("check_q3_conditions needs k = 3")
    _check_dims(alg, chart)
    n = alg.n
    base = alg.base
    Hp = _h_poly(H, chart)
    if pi is None:
        pi = PairingData(tuple(tuple(base.zero() for _ in range(n)) for _ in range(n)))
    rep = Report("q3-conditions")
    basis = [alg.basis(a) for a in range(n)]
    coords = [base.gen(x) for x in chart.x]
    scaled = [tuple(f * v for v in e) for f in coords for e in basis]

    # Leibniz: [a, f b] = f [a, b] + rho(a) f b
    bad = []
    for s in basis:
        for t in basis:
            st = alg.bracket(s, t)
            for f in coords:
                lhs = alg.bracket(s, tuple(f * v for v in t))
                rf = alg.anchor_action(s, f)
                rhs = tuple(f * st[c] + rf * t[c] for c in range(n))
                if lhs != rhs:
                    bad.append(str(f))
    rep.add("leibniz", not bad, bad[:1] or None)

    # Jacobiator = flat(i_a i_b i_c H)
    bad = []
    for s, t in itertools.combinations_with_replacement(basis, 2):
        for u in basis + scaled:
            jac = alg.jacobiator(s, t, u)
            xi = []
            for d in range(n):
                val = _forms_on_basis(Hp, [u, t, s, alg.basis(d)], chart)
                xi.append(_to_base_scalar(val, chart))
            rhs = pi.flat(xi)
            if any(jac[c] != rhs[c] for c in range(n)):
                bad.append({"triple": [_vec_str(s), _vec_str(t), _vec_str(u)],
                            "jacobiator": [str(v) for v in jac],
                            "flat": [str(v) for v in rhs]})
    rep.add("jacobiator=flat(i_a i_b i_c H)", not bad, bad[0] if bad else None)

    # ad-invariance of the pairing on A*
    bad = []
    for s in basis + scaled:
        for b in range(n):
            for c in range(n):
                om = chart.alpha_word([b])
                ta = chart.alpha_word([c])
                lo = lie_derivative(s, om, alg, chart)
                lt = lie_derivative(s, ta, alg, chart)
                lhs = _pair_forms(pi, lo, ta, chart) + _pair_forms(pi, om, lt, chart)
                rhs = alg.anchor_action(s, _pair_forms(pi, om, ta, chart))
                if lhs != rhs:
                    bad.append({"section": _vec_str(s), "forms": [b + 1, c + 1]})
    rep.add("ad-invariance", not bad, bad[0] if bad else None)

    dH = d_A(Hp, alg, chart)
    rep.add("d_A H=0", not dH, None if not dH else str(dH))
    return rep


def _to_base_scalar(f: GradedPoly, chart) -> GradedPoly:
    from .symplectic import _to_base
    if not f.support() <= set(chart.x):
        raise GradedError(f"expected a function on the base, got {f}")
    return _to_base(f, chart)


def _pair_forms(pi: PairingData, om: GradedPoly, ta: GradedPoly, chart) -> GradedPoly:
    """``pi(om, ta)`` for 1-forms, as a base polynomial."""
    n = chart.n
    out = chart.base.zero()
    for a in range(n):
        oa = _to_base_scalar(om.derivative(chart.alpha[a]), chart)
        if not oa:
            continue
        for b in range(n):
            tb = _to_base_scalar(ta.derivative(chart.alpha[b]), chart)
            if tb and pi.pi[a][b]:
                out = out + pi.pi[a][b] * oa * tb
    return out


def _vec_str(v) -> list[str]:
    return [str(c) for c in v]
