"""Lagrangian, coisotropic, higher Dirac and Nambu conditions on A + wedge^{k-1} A*.

Everything is pointwise exact linear algebra.  A subbundle is given by
spanning sections (degree k-1 chart functions); over a point base the
spanning vectors are constant, in the sampled regime their coefficients are
polynomials evaluated at the listed base points.

Forms are evaluated on vectors by ``w(v1, ..., vr) = i_vr ... i_v1 w``, so
``alpha^I(e_I) = 1`` for increasing I.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

from . import linalg
from .algebroid import (
    LieAlgebroidData,
    _h_poly,
    cartan_bracket,
    d_A,
    interior,
    pairing,
)
from .errors import GradedError, MalformedSectionError, UnsupportedRegimeError
from .graded import Derivation, GeneratorTable, GradedPoly, as_fraction, parse_poly
from .report import Report
from .symplectic import CotangentChart, decompose_section, hamiltonian_vf, poisson


class NotLagrangianError(GradedError):
    """Raised by to_pair on input that fails the lagrangian conditions."""


# ---------------------------------------------------------------------------
# pointwise model


class PointModel:
    """Coordinates on the graded pieces of T*[k]A[1] over a single point."""

    def __init__(self, k: int, n: int):
        self.k, self.n = k, n
        self.chart = CotangentChart(k, 0, n)
        self._spaces: dict[int, tuple[list, dict]] = {}

    def space(self, degree: int):
        if degree not in self._spaces:
            table = self.chart.table
            if degree == 0:
                monos = [table.unit()]
            else:
                monos = table.monomials_of_degree(degree)
            self._spaces[degree] = (monos, {m: i for i, m in enumerate(monos)})
        return self._spaces[degree]

    def dim(self, degree: int) -> int:
        return len(self.space(degree)[0])

    def vec(self, p: GradedPoly, degree: int) -> list[Fraction]:
        monos, index = self.space(degree)
        out = [Fraction(0)] * len(monos)
        for mono, c in p.terms.items():
            if mono not in index:
                raise GradedError(f"{p} is not of degree {degree}")
            out[index[mono]] = c
        return out

    def poly(self, v: Sequence[Fraction], degree: int) -> GradedPoly:
        monos, _ = self.space(degree)
        return GradedPoly._raw(self.chart.table, {m: Fraction(c) for m, c in zip(monos, v) if c})

    # A and A* as coordinate rows

    def a_part(self, section: GradedPoly) -> list[Fraction]:
        sec = decompose_section(section, self.chart)
        return [c.constant_term for c in sec.a]

    def form_part(self, section: GradedPoly) -> GradedPoly:
        return decompose_section(section, self.chart).form

    def covector(self, row: Sequence[Fraction]) -> GradedPoly:
        ch = self.chart
        out = ch.table.zero()
        for j, c in enumerate(row):
            if c:
                out = out + ch.gen(ch.alpha[j]).scale(c)
        return out

    def vector(self, row: Sequence[Fraction]) -> GradedPoly:
        ch = self.chart
        return ch.section([ch.base.constant(c) for c in row])

    def words(self, r: int) -> list[GradedPoly]:
        """The basis ``alpha^I`` of r-forms, I increasing."""
        if r < 0:
            return []
        return [self.chart.alpha_word(I) for I in itertools.combinations(range(self.n), r)]

    def wedge_span(self, one_forms: Sequence[GradedPoly], r: int) -> list[GradedPoly]:
        """Spanning set of ``span(one_forms) wedge wedge^r A*``."""
        return [d * w for d in one_forms for w in self.words(r)]

    def evaluate(self, form: GradedPoly, vectors: Sequence[Sequence[Fraction]]) -> GradedPoly:
        out = form
        for v in vectors:
            out = interior([self.chart.base.constant(c) for c in v], out, self.chart)
        return out

    def annihilator(self, rows: Sequence[Sequence[Fraction]]) -> list[GradedPoly]:
        return [self.covector(r) for r in linalg.nullspace(rows, self.n)]


@dataclass(frozen=True)
class SubbundleSpec:
    """Spanning sections of ``L``, with optional D (1-forms) and K (degree k).

    ``vectors`` live on the chart ``CotangentChart(k, m, n)``.  With ``m = 0``
    the regime is point-base; otherwise the coefficients are sampled at
    ``points``.
    """

    k: int
    n: int
    vectors: tuple
    m: int = 0
    points: tuple = ()
    D: tuple | None = None
    K: tuple | None = None

    def __post_init__(self):
        chart = self.chart
        for v in self.vectors:
            if v.table != chart.table:
                raise GradedError("spanning vectors must live on the chart")
            decompose_section(v, chart)
        if self.D is not None:
            for d in self.D:
                if d.table != chart.table or not (d.is_homogeneous(1) and chart.is_form(d)):
                    raise MalformedSectionError(f"D must consist of 1-forms: {d}")
        if self.K is not None:
            if self.m:
                raise UnsupportedRegimeError("K data is only supported over a point base")
            for q in self.K:
                if q.table != chart.table or not q.is_homogeneous(self.k):
                    raise MalformedSectionError(f"K must have degree {self.k}: {q}")
        if self.m and not self.points:
            raise GradedError("the sampled regime needs evaluation points")
        for p in self.points:
            if len(p) != self.m:
                raise GradedError(f"point {p} is not in R^{self.m}")

    @property
    def regime(self) -> str:
        return "point-base" if self.m == 0 else "sampled"

    @cached_property
    def chart(self) -> CotangentChart:
        return CotangentChart(self.k, self.m, self.n)

    @cached_property
    def model(self) -> PointModel:
        return PointModel(self.k, self.n)

    @property
    def sample_points(self) -> tuple:
        return self.points if self.m else ((),)

    def _at(self, polys, point) -> list[GradedPoly]:
        values = {x: v for x, v in zip(self.chart.x, point)}
        table = self.model.chart.table
        return [q.evaluate(values).embed(table) for q in polys]

    def at(self, point) -> list[GradedPoly]:
        return self._at(self.vectors, point)

    def D_at(self, point) -> list[GradedPoly]:
        return self._at(self.D or (), point)

    def K_at(self, point) -> list[GradedPoly]:
        return self._at(self.K or (), point)

    @classmethod
    def from_coefficients(cls, k: int, n: int, rows, m: int = 0, points=(),
                          D=None, K=None) -> "SubbundleSpec":
        """Rows are coefficient lists over ``a_1..a_n`` then ``alpha^I`` (I increasing)."""
        chart = CotangentChart(k, m, n)
        size = n + comb(n, k - 1)
        words = [chart.alpha_word(I) for I in itertools.combinations(range(n), k - 1)]
        vecs = []
        for row in rows:
            if len(row) != size:
                raise GradedError(f"rows must have {size} entries")
            coeffs = [_base(c, chart) for c in row]
            sec = chart.section(coeffs[:n])
            for c, w in zip(coeffs[n:], words):
                if c:
                    sec = sec + chart.lift(c) * w
            vecs.append(sec)
        Dp = None
        if D is not None:
            Dp = tuple(sum((chart.lift(_base(c, chart)) * chart.gen(chart.alpha[j])
                            for j, c in enumerate(r)), chart.table.zero()) for r in D)
        Kp = None if K is None else tuple(_parse(q, chart) for q in K)
        pts = tuple(tuple(as_fraction(c) for c in p) for p in points)
        return cls(k, n, tuple(vecs), m, pts, Dp, Kp)


def _base(c, chart):
    if isinstance(c, GradedPoly):
        return c.embed(chart.base)
    if isinstance(c, str):
        return parse_poly(c, chart.base)
    return chart.base.constant(c)


def _parse(q, chart):
    return q if isinstance(q, GradedPoly) else parse_poly(str(q), chart.table)


def _pt(point) -> list[str]:
    return [str(c) for c in point]


def _check_rank(L: SubbundleSpec) -> list[int]:
    M = L.model
    ranks = []
    for point in L.sample_points:
        rows = [M.vec(v, L.k - 1) for v in L.at(point)]
        ranks.append(linalg.rank(rows, M.dim(L.k - 1)))
    if len(set(ranks)) > 1:
        raise GradedError(f"spanning set changes rank across the sample points: {ranks}")
    return ranks


# ---------------------------------------------------------------------------
# lagrangian conditions


def _pointwise_lagrangian(L: SubbundleSpec, point):
    """(rank p1(L), L2 ok, L1 ok, details) at one point."""
    M, k = L.model, L.k
    vecs = L.at(point)
    d = k - 1
    rows = [M.vec(v, d) for v in vecs]
    E = linalg.row_basis([M.a_part(v) for v in vecs], M.n)
    ann = M.annihilator(E)
    # L2: L meets the forms exactly in ann(E) wedge wedge^{k-2}
    forms_space = [M.vec(w, d) for w in M.words(d)]
    meet = linalg.intersection(rows, forms_space, M.dim(d))
    target = [M.vec(w, d) for w in M.wedge_span(ann, k - 2)]
    ok2 = linalg.same_span(meet, target, M.dim(d))
    # L1: pairings in ann(E) wedge wedge^{k-3}
    allowed = [M.vec(w, k - 2) for w in M.wedge_span(ann, k - 3)]
    ok1, bad = True, None
    for i, j in itertools.combinations_with_replacement(range(len(vecs)), 2):
        val = pairing(vecs[i], vecs[j], M.chart)
        if not linalg.contains(allowed, M.vec(val, k - 2), M.dim(k - 2)):
            ok1, bad = False, {"pair": [i, j], "pairing": str(val)}
            break
    return len(E), ok2, ok1, bad


def check_lagrangian(L: SubbundleSpec, k: int | None = None) -> Report:
    """Conditions L0, L2, L1.  A rank drop of p1(L) with L2 and L1 holding at
    every point gives the verdict ``weak-lagrangian``."""
    if k is not None and k != L.k:
        raise GradedError("k does not match the subbundle")
    _check_rank(L)
    rep = Report("lagrangian")
    ranks, bad2, bad1 = [], [], []
    for point in L.sample_points:
        r, ok2, ok1, detail = _pointwise_lagrangian(L, point)
        ranks.append(r)
        if not ok2:
            bad2.append(_pt(point))
        if not ok1:
            bad1.append({"point": _pt(point), **detail})
    const = len(set(ranks)) <= 1
    rep.add("L0", const, None if const else {"p1 ranks": ranks})
    rep.add("L2", not bad2, bad2[:1] or None)
    rep.add("L1", not bad1, bad1[0] if bad1 else None)
    rep.data["p1_ranks"] = ranks
    if not bad1 and not bad2:
        rep.verdict = "pass" if const else "weak-lagrangian"
    else:
        rep.verdict = "fail"
    return rep


def check_nambu_dirac_hagiwara(L: SubbundleSpec, k: int | None = None) -> Report:
    """Conditions H2 and H1 at each point.

    When both hold everywhere but p1(L) changes rank the verdict is
    ``irregular`` (a singular almost Nambu-Dirac structure)."""
    if k is not None and k != L.k:
        raise GradedError("k does not match the subbundle")
    _check_rank(L)
    M, k = L.model, L.k
    n = M.n
    size = comb(n, k - 1)
    subsets = list(itertools.combinations(range(n), k - 1))
    rep = Report("nambu-dirac")
    ranks, bad2, bad1 = [], [], []
    for point in L.sample_points:
        vecs = L.at(point)
        E = linalg.row_basis([M.a_part(v) for v in vecs], n)
        ranks.append(len(E))
        # wedge^{k-1} E in the basis e_I, via minors
        wedges = []
        for choice in itertools.combinations(range(len(E)), k - 1):
            wedges.append([_minor([E[c] for c in choice], I) for I in subsets])
        # L annihilator, dual coordinates (A* part first, then wedge^{k-1} A)
        rows = [M.a_part(v) + _form_coords(M, M.form_part(v)) for v in vecs]
        ann = linalg.nullspace(rows, n + size)
        pr2 = [r[n:] for r in ann]
        if not linalg.same_span(wedges, pr2, size):
            bad2.append(_pt(point))
        for i, j in itertools.combinations_with_replacement(range(len(vecs)), 2):
            val = pairing(vecs[i], vecs[j], M.chart)
            if any(M.evaluate(val, [E[c] for c in choice])
                   for choice in itertools.combinations(range(len(E)), k - 2)):
                bad1.append({"point": _pt(point), "pair": [i, j]})
                break
    rep.add("H2", not bad2, bad2[:1] or None)
    rep.add("H1", not bad1, bad1[0] if bad1 else None)
    regular = len(set(ranks)) <= 1
    rep.data["p1_ranks"] = ranks
    if bad1 or bad2:
        rep.verdict = "fail"
    else:
        rep.verdict = "pass" if regular else "irregular"
    return rep


def _form_coords(M: PointModel, form: GradedPoly) -> list[Fraction]:
    """Coordinates in the basis alpha^I of (k-1)-forms."""
    out = []
    for I in itertools.combinations(range(M.n), M.k - 1):
        w = M.chart.alpha_word(I)
        mono = next(iter(w.terms))
        out.append(form.coefficient(mono))
    return out


def _minor(vectors, cols) -> Fraction:
    import sympy

    if not vectors:
        return Fraction(1)
    mat = sympy.Matrix([[sympy.Rational(v[c].numerator, v[c].denominator) for c in cols]
                        for v in vectors])
    d = mat.det()
    return Fraction(int(d.p), int(d.q))


# ---------------------------------------------------------------------------
# (E, Omega) pairs


@dataclass(frozen=True)
class PairSpec:
    """Subspace ``E`` of A (rows) with ``Omega`` in wedge^k E*.

    ``Omega`` maps increasing k-tuples of indices into ``E`` to coefficients.
    """

    k: int
    n: int
    E: tuple
    Omega: Mapping = field(default_factory=dict)

    def __post_init__(self):
        E = tuple(tuple(as_fraction(c) for c in r) for r in self.E)
        object.__setattr__(self, "E", E)
        for r in E:
            if len(r) != self.n:
                raise GradedError(f"E vectors must have {self.n} entries")
        if linalg.rank(E, self.n) != len(E):
            raise GradedError("E vectors must be independent")
        om = {}
        for key, c in dict(self.Omega).items():
            key = tuple(key)
            if len(key) != self.k or any(not 0 <= i < len(E) for i in key):
                raise GradedError(f"bad Omega index {key}")
            c = as_fraction(c)
            sign, srt = _sort_sign(key)
            if sign == 0 or not c:
                if c and sign == 0:
                    raise GradedError(f"Omega entry {key} repeats an index")
                continue
            if srt in om and om[srt] != sign * c:
                raise GradedError(f"Omega is not alternating at {key}")
            om[srt] = sign * c
        object.__setattr__(self, "Omega", {k_: v for k_, v in sorted(om.items()) if v})

    @classmethod
    def from_array(cls, k: int, n: int, E, array) -> "PairSpec":
        """``array`` is a full k-dimensional nested list, checked alternating."""
        r = len(E)
        om = {}
        for idx in itertools.product(range(r), repeat=k):
            v = array
            for i in idx:
                v = v[i]
            v = as_fraction(v)
            sign, srt = _sort_sign(idx)
            if sign == 0:
                if v:
                    raise GradedError("alternating array has a nonzero diagonal")
                continue
            om.setdefault(srt, sign * v)
            if om[srt] != sign * v:
                raise GradedError(f"array is not alternating at {idx}")
        return cls(k, n, E, om)

    @property
    def rank(self) -> int:
        return len(self.E)

    def to_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "E": [[str(c) for c in r] for r in self.E],
                "Omega": [[list(I), str(c)] for I, c in self.Omega.items()]}


def _sort_sign(idx):
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, tuple(sorted(idx))
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


def _dual_frame(M: PointModel, E):
    """Complement F of E and the dual coframe (eps^1..eps^n) of E + F."""
    F = linalg.complete_basis(E, M.n)
    frame = [list(r) for r in E] + F
    inv = linalg.inverse(frame)
    eps = [M.covector([inv[l][i] for l in range(M.n)]) for i in range(M.n)]
    return F, eps


def extend_omega(pair: PairSpec, M: PointModel | None = None) -> GradedPoly:
    """A k-form on A restricting to Omega on E (zero on the chosen complement)."""
    M = M or PointModel(pair.k, pair.n)
    _, eps = _dual_frame(M, pair.E)
    out = M.chart.table.zero()
    for I, c in pair.Omega.items():
        w = M.chart.table.one()
        for i in I:
            w = w * eps[i]
        out = out + w.scale(c)
    return out


def from_pair(pair: PairSpec, ambient=None) -> SubbundleSpec:
    """``L = {e + w : e in E, i_e Omega = j^* w}`` over a point."""
    k, n = pair.k, pair.n
    if ambient is not None and tuple(ambient) != (k, n):
        raise GradedError("ambient (k, n) does not match the pair")
    M = PointModel(k, n)
    E = [list(r) for r in pair.E]
    F, eps = _dual_frame(M, E)
    om = extend_omega(pair, M)
    vecs = []
    for e in E:
        vecs.append(M.vector(e) + M.evaluate(om, [e]))
    r = len(E)
    for s in range(r, n):
        for w in M.words(k - 2):
            prod = eps[s] * w
            if prod:
                vecs.append(prod)
    rows = [M.vec(v, k - 1) for v in vecs]
    basis = linalg.row_basis(rows, M.dim(k - 1))
    return SubbundleSpec(k, n, tuple(M.poly(b, k - 1) for b in basis))


def to_pair(L: SubbundleSpec) -> PairSpec:
    """Extract ``(E = p1(L), Omega)`` from a lagrangian over a point."""
    if L.m:
        raise UnsupportedRegimeError("to_pair works over a point base")
    rep = check_lagrangian(L)
    if not rep.passed:
        raise NotLagrangianError(f"input is not lagrangian: {rep.failing()}")
    M, k = L.model, L.k
    vecs = L.at(())
    a_rows = [M.a_part(v) for v in vecs]
    E = linalg.row_basis(a_rows, M.n)
    ws = []
    for e in E:
        coeffs = linalg.solve(a_rows, e, M.n)
        sec = M.chart.table.zero()
        for c, v in zip(coeffs, vecs):
            if c:
                sec = sec + v.scale(c)
        ws.append(M.form_part(sec))
    om = {}
    for I in itertools.combinations(range(len(E)), k):
        vals = set()
        for pos in range(k):
            rest = [E[i] for t, i in enumerate(I) if t != pos]
            v = M.evaluate(ws[I[pos]], rest).constant_term
            vals.add(v * (-1) ** pos)
        if len(vals) != 1:
            raise NotLagrangianError(f"Omega is not alternating on {I}")
        om[I] = vals.pop()
    return PairSpec(k, M.n, tuple(tuple(r) for r in E), om)


def same_pair(p: PairSpec, q: PairSpec) -> bool:
    """Equal up to a change of basis of E."""
    if (p.k, p.n) != (q.k, q.n):
        return False
    if not linalg.same_span(p.E, q.E, p.n):
        return False
    M = PointModel(p.k, p.n)
    op, oq = extend_omega(p, M), extend_omega(q, M)
    for I in itertools.combinations(range(len(p.E)), p.k):
        vs = [p.E[i] for i in I]
        if M.evaluate(op, vs) != M.evaluate(oq, vs):
            return False
    return True


def same_subbundle(L1: SubbundleSpec, L2: SubbundleSpec) -> bool:
    if (L1.k, L1.n, L1.m) != (L2.k, L2.n, L2.m) or L1.points != L2.points:
        return False
    M, d = L1.model, L1.k - 1
    for point in L1.sample_points:
        a = [M.vec(v, d) for v in L1.at(point)]
        b = [M.vec(v, d) for v in L2.at(point)]
        if not linalg.same_span(a, b, M.dim(d)):
            return False
    return True


def check_wade_w2(pair: PairSpec) -> Report:
    """``i_Z1 Omega ^ ... ^ i_Z(k-1) Omega = i_e Omega`` for some e in E."""
    k, r = pair.k, pair.rank
    rep = Report("wade-w2")
    M = PointModel(k, r) if r else None
    if r == 0:
        rep.add("w2", True)
        return rep
    om = M.chart.table.zero()
    for I, c in pair.Omega.items():
        om = om + M.chart.alpha_word(I).scale(c)
    basis = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    contr = {J: M.evaluate(om, [basis[j] for j in J])
             for J in itertools.combinations(range(r), k - 1)}
    images = [M.vec(M.evaluate(om, [b]), k - 1) for b in basis]
    bad = None
    for Zs in itertools.combinations(sorted(contr), k - 1):
        w = M.chart.table.one()
        for Z in Zs:
            w = w * contr[Z]
        if not linalg.contains(images, M.vec(w, k - 1), M.dim(k - 1)):
            bad = [list(Z) for Z in Zs]
            break
    rep.add("w2", bad is None, bad)
    return rep


# ---------------------------------------------------------------------------
# constructors


def _lift_rows(rows, n):
    return [[as_fraction(c) for c in r] for r in rows]


def conormal(B, k: int, n: int, m: int = 0, points=()) -> SubbundleSpec:
    """``L = B + B° wedge wedge^{k-2} A*`` for a constant subspace B of A."""
    M = PointModel(k, n)
    B = linalg.row_basis(_lift_rows(B, n), n)
    vecs = [M.vector(b) for b in B] + M.wedge_span(M.annihilator(B), k - 2)
    basis = linalg.row_basis([M.vec(v, k - 1) for v in vecs], M.dim(k - 1))
    chart = CotangentChart(k, m, n)
    out = tuple(M.poly(b, k - 1).embed(chart.table) for b in basis)
    pts = tuple(tuple(as_fraction(c) for c in p) for p in points)
    return SubbundleSpec(k, n, out, m, pts)


def graph_of_form(omega: GradedPoly, chart: CotangentChart, points=()) -> SubbundleSpec:
    """``L = {a + i_a omega}`` for a k-form omega."""
    if not (chart.is_form(omega) and omega.is_homogeneous(chart.k)):
        raise MalformedSectionError(f"need a {chart.k}-form, got {omega}")
    vecs = []
    base = chart.base
    for j in range(chart.n):
        e = [base.one() if i == j else base.zero() for i in range(chart.n)]
        vecs.append(chart.section(e, interior(e, omega, chart)))
    pts = tuple(tuple(as_fraction(c) for c in p) for p in points)
    return SubbundleSpec(chart.k, chart.n, tuple(vecs), chart.m, pts)


# ---------------------------------------------------------------------------
# multivectors


def multivector_table(m: int, n: int) -> GeneratorTable:
    return GeneratorTable([(f"x{i + 1}", 0) for i in range(m)]
                          + [(f"e{j + 1}", 1) for j in range(n)])


@dataclass(frozen=True)
class NambuTensor:
    """``Pi`` in wedge^k A with polynomial coefficients, as a polynomial in
    odd generators e_1..e_n over the base coordinates."""

    k: int
    m: int
    n: int
    Pi: GradedPoly
    points: tuple = ()

    def __post_init__(self):
        if self.Pi.table != self.table:
            raise GradedError("Pi must live on the multivector table")
        if not self.Pi.is_homogeneous(self.k):
            raise GradedError(f"Pi must be a {self.k}-vector")
        if self.m and not self.points:
            raise GradedError("a polynomial base needs evaluation points")

    @property
    def table(self) -> GeneratorTable:
        return multivector_table(self.m, self.n)

    @classmethod
    def from_components(cls, k: int, m: int, n: int, components: Mapping,
                        points=()) -> "NambuTensor":
        """``components`` maps index tuples (0-based) to coefficients."""
        table = multivector_table(m, n)
        base_chart = CotangentChart(3, m, 0)
        out = table.zero()
        for idx, c in components.items():
            idx = tuple(idx)
            if len(idx) != k:
                raise GradedError(f"index {idx} does not have {k} entries")
            coeff = _base(c, base_chart).embed(table)
            w = table.one()
            for i in idx:
                w = w * table.gen(f"e{i + 1}")
            out = out + coeff * w
        pts = tuple(tuple(as_fraction(c) for c in p) for p in points)
        return cls(k, m, n, out, pts)

    def contract(self, w: GradedPoly, chart: CotangentChart, P: GradedPoly | None = None):
        """``Pi(w)`` for a form w on the chart; returns base coefficients.

        ``i_{alpha^i1 ... alpha^ir} = d/de_ir o ... o d/de_i1``.
        """
        P = self.Pi if P is None else P
        tbl = self.table
        deg = w.degree if w else self.k - 1
        out = tbl.zero()
        for mono, c in w.terms.items():
            coeff = {}
            word = []
            for name, e in zip(chart.table.names, mono):
                if not e:
                    continue
                if name.startswith("alpha"):
                    word.append(int(name[5:]) - 1)
                elif name.startswith("x"):
                    coeff[name] = e
                else:
                    raise GradedError("can only contract forms")
            term = P
            for i in word:
                term = term.derivative(f"e{i + 1}")
            xfac = tbl.one()
            for name, e in coeff.items():
                xfac = xfac * tbl.gen(name) ** e
            out = out + (xfac * term).scale(c)
        if not out.is_homogeneous(self.k - deg):
            raise GradedError("contraction is not homogeneous")
        return out

    def as_vector(self, v: GradedPoly, chart: CotangentChart) -> tuple:
        """Base coefficients of an e-linear multivector."""
        return tuple(_restrict_x(v.derivative(f"e{j + 1}"), chart) for j in range(self.n))


def _restrict_x(p: GradedPoly, chart) -> GradedPoly:
    if p.support() - set(chart.x):
        raise GradedError(f"expected a base polynomial, got {p}")
    return p.embed(chart.base)


def is_decomposable(Pi: NambuTensor) -> Report:
    """Plücker test: ``(i_phi Pi) ^ Pi = 0`` for every basis (k-1)-form phi.

    The identity is checked as a polynomial identity in the base coordinates,
    hence at every point; points where Pi vanishes are listed in the data.
    """
    chart = CotangentChart(max(Pi.k, 3), Pi.m, Pi.n)
    rep = Report("decomposable")
    bad = None
    for I in itertools.combinations(range(Pi.n), Pi.k - 1):
        v = Pi.contract(chart.alpha_word(I), chart)
        prod = v * Pi.Pi
        if prod:
            bad = {"phi": [i + 1 for i in I], "obstruction": str(prod)}
            break
    rep.add("plucker", bad is None, bad)
    xs = [f"x{i + 1}" for i in range(Pi.m)]
    zeros = [_pt(p) for p in Pi.points
             if not Pi.Pi.evaluate(dict(zip(xs, p)))]
    rep.data["vanishes_at"] = zeros
    rep.data["weak"] = bool(zeros)
    return rep


def graph_of_nambu(Pi: NambuTensor) -> SubbundleSpec:
    """``L = {Pi(w) + w : w in wedge^{k-1} A*}``."""
    chart = CotangentChart(Pi.k, Pi.m, Pi.n)
    vecs = []
    for I in itertools.combinations(range(Pi.n), Pi.k - 1):
        w = chart.alpha_word(I)
        vecs.append(chart.section(Pi.as_vector(Pi.contract(w, chart), chart), w))
    return SubbundleSpec(Pi.k, Pi.n, tuple(vecs), Pi.m, Pi.points)


def lie_derivative_multivector(X, P: GradedPoly, alg: LieAlgebroidData) -> GradedPoly:
    """``L_X P`` for a section X (base coefficients) and a multivector P."""
    table = P.table
    n, m = alg.n, alg.m
    emb = lambda f: f.embed(table)  # noqa: E731
    values = {}
    for i in range(m):
        v = table.zero()
        for a in range(n):
            if X[a] and alg.anchor[a][i]:
                v = v + emb(X[a] * alg.anchor[a][i])
        values[f"x{i + 1}"] = v
    for j in range(n):
        br = alg.bracket(X, alg.basis(j))
        values[f"e{j + 1}"] = sum((emb(br[c]) * table.gen(f"e{c + 1}") for c in range(n)),
                                  table.zero())
    return Derivation(table, 0, values)(P)


def check_twisted_nambu(Pi: NambuTensor, alg: LieAlgebroidData, H=None,
                        k: int | None = None) -> Report:
    """The twisted Nambu identity on basis pairs, plus closure of graph(Pi).

    Clause ``int-nan`` evaluates
    ``(L_Pi(w) Pi)(w') = -Pi(i_Pi(w') d_A w + i_Pi(w') i_Pi(w) H)``;
    clause ``graph-closure`` tests the bracket of graph generators directly.
    """
    if k is not None and k != Pi.k:
        raise GradedError("k does not match the tensor")
    if (alg.m, alg.n) != (Pi.m, Pi.n):
        raise GradedError("tensor and algebroid dimensions differ")
    rep = Report("twisted-nambu")
    dec = is_decomposable(Pi)
    rep.add("decomposable", dec.passed, dec.clause("plucker").detail)
    if not dec.passed:
        rep.verdict = "precondition"
        return rep
    chart = CotangentChart(Pi.k, Pi.m, Pi.n)
    Hp = _h_poly(H, chart)
    words = [chart.alpha_word(I) for I in itertools.combinations(range(Pi.n), Pi.k - 1)]
    images = [Pi.as_vector(Pi.contract(w, chart), chart) for w in words]
    bad_eq, bad_cl = None, None
    for (i, w), (j, w2) in itertools.product(enumerate(words), repeat=2):
        X, Y = images[i], images[j]
        lhs = Pi.contract(w2, chart, lie_derivative_multivector(X, Pi.Pi, alg))
        inner = interior(Y, d_A(w, alg, chart), chart) + interior(Y, interior(X, Hp, chart), chart)
        rhs = -Pi.contract(inner, chart) if inner else Pi.table.zero()
        if lhs != rhs and bad_eq is None:
            bad_eq = {"w": str(w), "w'": str(w2), "lhs": str(lhs), "rhs": str(rhs)}
        br = cartan_bracket(chart.section(X, w), chart.section(Y, w2), alg, Hp, chart)
        sec = decompose_section(br, chart)
        want = Pi.as_vector(Pi.contract(sec.form, chart), chart) if sec.form else \
            tuple(chart.base.zero() for _ in range(Pi.n))
        if tuple(sec.a) != want and bad_cl is None:
            bad_cl = {"w": str(w), "w'": str(w2), "bracket": str(br)}
    rep.add("int-nan", bad_eq is None, bad_eq)
    rep.add("graph-closure", bad_cl is None, bad_cl)
    return rep


# ---------------------------------------------------------------------------
# higher Dirac over a point


def _require_point(L: SubbundleSpec, what: str) -> None:
    if L.m:
        raise UnsupportedRegimeError(f"{what} is only available over a point base")


def check_higher_dirac(L: SubbundleSpec, alg: LieAlgebroidData, H=None,
                       k: int | None = None) -> Report:
    """Lagrangian, rho(L) tangent to the body, and closure under the bracket."""
    _require_point(L, "bracket closure")
    if k is not None and k != L.k:
        raise GradedError("k does not match the subbundle")
    if (alg.m, alg.n) != (0, L.n):
        raise GradedError("the algebroid must be a Lie algebra of rank n")
    rep = Report("higher-dirac")
    lag = check_lagrangian(L)
    rep.add("lagrangian", lag.final() in ("pass", "weak-lagrangian"), lag.failing() or None)
    if not rep.clauses[-1].passed:
        rep.verdict = "precondition"
        return rep
    rep.add("rho(L)⊆TN", True)
    M = L.model
    ch = M.chart
    d = L.k - 1
    rows = [M.vec(v, d) for v in L.vectors]
    Hp = _h_poly(H, ch) if not isinstance(H, GradedPoly) else H.embed(ch.table)
    bad = None
    for i, j in itertools.product(range(len(L.vectors)), repeat=2):
        br = cartan_bracket(L.vectors[i], L.vectors[j], alg, Hp, ch)
        if not linalg.contains(rows, M.vec(br, d), M.dim(d)):
            bad = {"pair": [i, j], "bracket": str(br)}
            break
    rep.add("closure", bad is None, bad)
    return rep


def ideal_generators(L: SubbundleSpec, D=None) -> tuple[list, list]:
    """Degree 1 and degree k-1 generators of the vanishing ideal over a point."""
    _require_point(L, "the vanishing ideal")
    M = L.model
    E = linalg.row_basis([M.a_part(v) for v in L.vectors], M.n)
    ones = M.annihilator(E) if D is None else list(D)
    return ones, list(L.vectors)


def ideal_span(M: PointModel, degree: int, ones, tops, extra=()) -> list[list[Fraction]]:
    """Rows spanning the ideal in one degree."""
    table = M.chart.table
    k = M.k

    def monos(d):
        if d == 0:
            return [table.one()]
        if d < 0:
            return []
        return [GradedPoly._raw(table, {mm: Fraction(1)}) for mm in table.monomials_of_degree(d)]

    rows = []
    for g in ones:
        rows += [M.vec(g * q, degree) for q in monos(degree - 1)]
    for g in tops:
        rows += [M.vec(g * q, degree) for q in monos(degree - k + 1)]
    for g in extra:
        rows += [M.vec(g * q, degree) for q in monos(degree - k)]
    return [r for r in rows if any(r)]


def ideal_preserved(L: SubbundleSpec, theta_H: GradedPoly) -> Report:
    """``X_theta_H`` maps the generators of the ideal of L into the ideal."""
    _require_point(L, "ideal preservation")
    M = L.model
    if theta_H.table != M.chart.table:
        theta_H = theta_H.embed(M.chart.table)
    Q = hamiltonian_vf(theta_H, M.chart, degree=1)
    ones, tops = ideal_generators(L)
    rep = Report("ideal-preserved")
    bad = None
    for g, deg in [(g, 1) for g in ones] + [(g, L.k - 1) for g in tops]:
        img = Q(g)
        span = ideal_span(M, deg + 1, ones, tops)
        if not linalg.contains(span, M.vec(img, deg + 1), M.dim(deg + 1)):
            bad = {"generator": str(g), "image": str(img)}
            break
    rep.add("Q(I)⊆I", bad is None, bad)
    return rep


def check_pair_q_lagrangian(pair: PairSpec, alg: LieAlgebroidData, H=None) -> Report:
    """E closed under the bracket and ``d_E Omega = j^* H``."""
    M = PointModel(pair.k, pair.n)
    ch = M.chart
    rep = Report("q-lagrangian-pair")
    E = [list(r) for r in pair.E]
    bad = None
    for a, b in itertools.combinations(range(len(E)), 2):
        br = alg.bracket([ch.base.constant(c) for c in E[a]], [ch.base.constant(c) for c in E[b]])
        if not linalg.contains(E, [c.constant_term for c in br], M.n):
            bad = [a, b]
            break
    rep.add("subalgebra", bad is None, bad)
    if bad is not None:
        rep.add("d_E Omega = j*H", False, "E is not a subalgebra")
        return rep
    om = extend_omega(pair, M)
    diff = d_A(om, alg, ch) - _h_poly(H, ch)
    bad = None
    for I in itertools.combinations(range(len(E)), pair.k + 1):
        if M.evaluate(diff, [E[i] for i in I]):
            bad = list(I)
            break
    rep.add("d_E Omega = j*H", bad is None, bad)
    return rep


# ---------------------------------------------------------------------------
# quadruples and coisotropic submanifolds


def _degree_k_target(L: SubbundleSpec, point, D) -> list[GradedPoly]:
    M = L.model
    ch = M.chart
    out = [d * ch.gen(a) for d in D for a in ch.a]
    out += [v * ch.gen(al) for v in L.at(point) for al in ch.alpha]
    return out


def check_quadruple(spec: SubbundleSpec) -> Report:
    """Sub1 at every point and, when K is given (point base), Sub2."""
    if spec.D is None:
        raise GradedError("a quadruple needs D")
    M, k = spec.model, spec.k
    d = k - 1
    rep = Report("quadruple")
    bad1 = []
    for point in spec.sample_points:
        rows = [M.vec(v, d) for v in spec.at(point)]
        meet = linalg.intersection(rows, [M.vec(w, d) for w in M.words(d)], M.dim(d))
        target = [M.vec(w, d) for w in M.wedge_span(spec.D_at(point), k - 2)]
        if not linalg.same_span(meet, target, M.dim(d)):
            bad1.append(_pt(point))
    rep.add("Sub1", not bad1, bad1[:1] or None)
    if spec.K is not None:
        Ks = [M.vec(q, k) for q in spec.K_at(())]
        target = [M.vec(q, k) for q in _degree_k_target(spec, (), spec.D_at(()))]
        ok = linalg.same_span(Ks, target, M.dim(k))
        rep.add("Sub2", ok)
        rank_D = linalg.rank([M.vec(q, 1) for q in spec.D_at(())], M.n)
        rank_p1 = linalg.rank([M.a_part(v) for v in spec.at(())], M.n)
        rep.data["totdim"] = 2 * M.n - rank_D - rank_p1
        rep.data["half_totdim"] = M.n
    return rep


def check_coisotropic(spec: SubbundleSpec) -> Report:
    """Quadruple conditions plus ``D ⊆ p1(L)°`` and ``<L,L> ⊆ D ^ wedge^{k-3}``.

    The flat partial connection clause is vacuous over a point; in the sampled
    regime only these algebraic clauses are checked.
    """
    rep = check_quadruple(spec)
    rep.check = "coisotropic"
    M, k = spec.model, spec.k
    bad_d, bad_p = [], []
    for point in spec.sample_points:
        vecs = spec.at(point)
        Ds = spec.D_at(point)
        E = [M.a_part(v) for v in vecs]
        for dform in Ds:
            row = M.vec(dform, 1)
            if any(sum((r[j] * e[j] for j in range(M.n)), Fraction(0)) for e in E for r in [row]):
                bad_d.append(_pt(point))
                break
        allowed = [M.vec(w, k - 2) for w in M.wedge_span(Ds, k - 3)]
        for i, j in itertools.combinations_with_replacement(range(len(vecs)), 2):
            val = pairing(vecs[i], vecs[j], M.chart)
            if not linalg.contains(allowed, M.vec(val, k - 2), M.dim(k - 2)):
                bad_p.append({"point": _pt(point), "pair": [i, j]})
                break
    rep.add("D⊆p1(L)°", not bad_d, bad_d[:1] or None)
    rep.add("<L,L>⊆D∧∧^(k-3)", not bad_p, bad_p[0] if bad_p else None)
    return rep


def induced_K(spec: SubbundleSpec) -> tuple:
    """``K = D ⊗ A + L ∧ A*`` over a point."""
    _require_point(spec, "K")
    return tuple(q for q in _degree_k_target(spec, (), spec.D_at(())) if q)


def ideal_coisotropic(spec: SubbundleSpec) -> Report:
    """Direct test of ``{I, I} ⊆ I`` over a point with K = D⊗A + L∧A*."""
    _require_point(spec, "the ideal test")
    M, k = spec.model, spec.k
    ch = M.chart
    ones = list(spec.D or ())
    tops = list(spec.vectors)
    Ks = list(spec.K) if spec.K is not None else list(induced_K(spec))
    gens = [(g, 1) for g in ones] + [(g, k - 1) for g in tops] + [(g, k) for g in Ks]
    rep = Report("ideal-coisotropic")
    bad = None
    for (f, df), (g, dg) in itertools.combinations_with_replacement(gens, 2):
        deg = df + dg - k
        br = poisson(f, g, ch)
        if not br:
            continue
        if deg < 0:
            bad = {"f": str(f), "g": str(g)}
            break
        span = ideal_span(M, deg, ones, tops, Ks)
        if not linalg.contains(span, M.vec(br, deg), M.dim(deg)):
            bad = {"f": str(f), "g": str(g), "bracket": str(br)}
            break
    rep.add("{I,I}⊆I", bad is None, bad)
    return rep
