"""Darboux chart of T*[k]A[1], its degree -k Poisson bracket and B-twists.

Generators, in monomial order::

    x1..xm      degree 0      base coordinates
    alpha1..n   degree 1      fibre coordinates of A (frame of A*)
    a1..an      degree k-1    the vector fields d/d alpha^j (frame of A)
    p1..pm      degree k      the vector fields d/d x^i

The bracket is fixed by ``{p_i, x^j} = {a_i, alpha^j} = delta`` together with
graded skew-symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    GradedError,
    MalformedSectionError,
    NotHomogeneousError,
    TableMismatchError,
)
from .graded import Derivation, GeneratorTable, GradedPoly


def base_table(m: int) -> GeneratorTable:
    """Table of the base coordinates only; coefficient functions live here."""
    return GeneratorTable([(f"x{i + 1}", 0) for i in range(m)])


class CotangentChart:
    """Coordinates ``(x, alpha, a, p)`` on T*[k]A[1] for rank-n A over m-dim M."""

    def __init__(self, k: int, m: int, n: int):
        if k < 3:
            raise GradedError(f"only k >= 3 is supported, got k={k}")
        if m < 0 or n < 0:
            raise GradedError("dimensions must be non-negative")
        self.k, self.m, self.n = k, m, n
        self.x = tuple(f"x{i + 1}" for i in range(m))
        self.alpha = tuple(f"alpha{j + 1}" for j in range(n))
        self.a = tuple(f"a{j + 1}" for j in range(n))
        self.p = tuple(f"p{i + 1}" for i in range(m))
        self.table = GeneratorTable(
            [(s, 0) for s in self.x] + [(s, 1) for s in self.alpha]
            + [(s, k - 1) for s in self.a] + [(s, k) for s in self.p])
        self.base = base_table(m)
        sign = Fraction((-1) ** k)
        # (u, v, {u, v}) for the nonzero generator pairs
        self.pairs = (
            [(p, x, Fraction(1)) for p, x in zip(self.p, self.x)]
            + [(x, p, Fraction(-1)) for p, x in zip(self.p, self.x)]
            + [(a, al, Fraction(1)) for a, al in zip(self.a, self.alpha)]
            + [(al, a, sign) for a, al in zip(self.a, self.alpha)]
        )

    def __eq__(self, other) -> bool:
        return (isinstance(other, CotangentChart)
                and (self.k, self.m, self.n) == (other.k, other.m, other.n))

    def __hash__(self) -> int:
        return hash((self.k, self.m, self.n))

    def __repr__(self) -> str:
        return f"CotangentChart(k={self.k}, m={self.m}, n={self.n})"

    def gen(self, name: str) -> GradedPoly:
        return self.table.gen(name)

    def lift(self, f) -> GradedPoly:
        """Bring a scalar or a base polynomial into the chart."""
        if isinstance(f, GradedPoly):
            return f.embed(self.table)
        return self.table.constant(f)

    def alpha_word(self, indices: Sequence[int]) -> GradedPoly:
        """``alpha^{i1} alpha^{i2} ...`` for 0-based indices, in the given order."""
        out = self.table.one()
        for i in indices:
            out = out * self.table.gen(self.alpha[i])
        return out

    def section(self, a_coeffs: Sequence = (), form: GradedPoly | None = None) -> GradedPoly:
        """Degree k-1 function ``sum_j s^j a_j + form``."""
        out = self.table.zero() if form is None else self.lift(form)
        for j, s in enumerate(a_coeffs):
            out = out + self.lift(s) * self.table.gen(self.a[j])
        return out

    def to_dict(self) -> dict:
        return {"k": self.k, "m": self.m, "n": self.n,
                "generators": [[name, deg] for name, deg in self.table]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "CotangentChart":
        chart = cls(int(data["k"]), int(data["m"]), int(data["n"]))
        if "generators" in data:
            given = [tuple(g) for g in data["generators"]]
            if given != [tuple(g) for g in chart.table]:
                raise GradedError("generator names or degrees do not match the chart layout")
        return chart

    # -- generator classes --------------------------------------------------

    def form_names(self) -> tuple[str, ...]:
        return self.x + self.alpha

    def is_form(self, f: GradedPoly) -> bool:
        """True when ``f`` only involves x and alpha (an element of Gamma wedge A*)."""
        allowed = set(self.form_names())
        return f.support() <= allowed


def _check_chart(chart: CotangentChart, *polys: GradedPoly) -> None:
    for p in polys:
        if p.table != chart.table:
            raise TableMismatchError(f"{p.table!r} is not the table of {chart!r}")


def poisson(f: GradedPoly, g: GradedPoly, chart: CotangentChart) -> GradedPoly:
    """Degree -k Poisson bracket ``{f, g}``.

    Evaluated as ``sum (f d<-/du) {u, v} (d->/dv g)`` over generator pairs,
    with right derivatives on the left entry and left derivatives on the right.
    """
    _check_chart(chart, f, g)
    out = chart.table.zero()
    for u, v, w in chart.pairs:
        fu = f.derivative(u, "right")
        if not fu:
            continue
        gv = g.derivative(v, "left")
        if not gv:
            continue
        out = out + (fu * gv).scale(w)
    return out


def hamiltonian_vf(theta: GradedPoly, chart: CotangentChart,
                   degree: int | None = None) -> Derivation:
    """The derivation ``f -> {theta, f}`` of degree ``|theta| - k``."""
    _check_chart(chart, theta)
    if not theta.is_homogeneous():
        raise NotHomogeneousError(f"hamiltonian must be homogeneous: {theta}")
    if theta:
        degree = theta.degree - chart.k
    elif degree is None:
        degree = 0
    values = {name: poisson(theta, chart.table.gen(name), chart)
              for name in chart.table.names}
    return Derivation(chart.table, degree, values)


# ---------------------------------------------------------------------------
# twists


@dataclass(frozen=True)
class TwistCochain:
    """``B`` in Gamma wedge^k A*, used as a gauge parameter."""

    B: GradedPoly
    chart: CotangentChart

    def __post_init__(self):
        _check_chart(self.chart, self.B)
        if not self.chart.is_form(self.B):
            raise GradedError("twist cochain may only involve x and alpha")
        if not self.B.is_homogeneous(self.chart.k):
            raise NotHomogeneousError(f"twist cochain must have degree {self.chart.k}")


def algebra_map(images: Mapping[str, GradedPoly], f: GradedPoly) -> GradedPoly:
    """Apply the algebra morphism determined by generator images."""
    table = f.table
    gens = [images[name] for name in table.names]
    out = table.zero()
    powers: dict[tuple[int, int], GradedPoly] = {}
    for mono, c in f.terms.items():
        term = table.constant(c)
        for i, e in enumerate(mono):
            if not e:
                continue
            key = (i, e)
            if key not in powers:
                powers[key] = gens[i] ** e
            term = term * powers[key]
            if not term:
                break
        out = out + term
    return out


def twist_images(B: TwistCochain | GradedPoly, chart: CotangentChart) -> dict[str, GradedPoly]:
    if not isinstance(B, TwistCochain):
        B = TwistCochain(B, chart)
    images = {}
    for name in chart.table.names:
        g = chart.table.gen(name)
        images[name] = g - poisson(B.B, g, chart)
    return images


def twist(B: TwistCochain | GradedPoly, f: GradedPoly,
          chart: CotangentChart | None = None) -> GradedPoly:
    """The automorphism tau^B: identity on x and alpha, ``g - {B, g}`` on a, p."""
    if isinstance(B, TwistCochain):
        chart = B.chart
    if chart is None:
        raise GradedError("a chart is required")
    _check_chart(chart, f)
    return algebra_map(twist_images(B, chart), f)


# ---------------------------------------------------------------------------
# sections of A + wedge^{k-1} A*


@dataclass(frozen=True)
class Section:
    """Split form of a degree k-1 function: ``a`` coefficients and a form."""

    a: tuple[GradedPoly, ...]
    form: GradedPoly

    def is_zero(self) -> bool:
        return not self.form and not any(self.a)


def decompose_section(e: GradedPoly, chart: CotangentChart) -> Section:
    """Split ``e`` into its A-part (coefficients of a_j) and its form part."""
    _check_chart(chart, e)
    if e and not e.is_homogeneous(chart.k - 1):
        raise MalformedSectionError(f"section must have degree {chart.k - 1}: {e}")
    table = chart.table
    ia = [table.index[s] for s in chart.a]
    ip = [table.index[s] for s in chart.p]
    coeffs = [dict() for _ in chart.a]
    form = {}
    for mono, c in e.terms.items():
        if any(mono[i] for i in ip):
            raise MalformedSectionError(f"section contains p generators: {e}")
        used = [j for j, i in enumerate(ia) if mono[i]]
        if not used:
            form[mono] = c
            continue
        if len(used) > 1 or mono[ia[used[0]]] > 1:
            raise MalformedSectionError(f"term of a-degree >= 2 in {e}")
        j = used[0]
        rest = list(mono)
        rest[ia[j]] = 0
        coeffs[j][tuple(rest)] = c
    a_parts = tuple(_to_base(GradedPoly._raw(table, cj), chart) for cj in coeffs)
    return Section(a_parts, GradedPoly._raw(table, form))


def _to_base(p: GradedPoly, chart: CotangentChart) -> GradedPoly:
    """Restrict a chart polynomial in x only to the base table."""
    base = chart.base
    idx = [chart.table.index[s] for s in chart.x]
    terms = {}
    for mono, c in p.terms.items():
        terms[tuple(mono[i] for i in idx)] = c
    return GradedPoly._raw(base, terms)


def compose_section(sec: Section, chart: CotangentChart) -> GradedPoly:
    return chart.section(sec.a, sec.form)
