"""Exact graded-commutative polynomial arithmetic.

A :class:`GeneratorTable` fixes an ordered list of named generators with
non-negative degrees.  Generators of odd degree anticommute and square to
zero; the rest commute.  Elements are :class:`GradedPoly` instances whose
terms are stored in the normal form obtained by sorting every word into table
order, with a sign of -1 for each transposition of two odd generators.
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    GradedError,
    MissingImageError,
    NotHomogeneousError,
    TableMismatchError,
)

Scalar = Union[int, Fraction, str]
Monomial = tuple  # exponent vector aligned with the table


def as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class GeneratorTable:
    """Ordered generators ``(name, degree)``; the order is the monomial order."""

    __slots__ = ("generators", "names", "degrees", "index", "odd",
                 "odd_positions", "_hash")

    def __init__(self, generators: Iterable[tuple[str, int]]):
        gens = tuple((str(name), int(deg)) for name, deg in generators)
        names = tuple(name for name, _ in gens)
        if len(set(names)) != len(names):
            raise GradedError(f"duplicate generator names in {names}")
        for name, deg in gens:
            if deg < 0:
                raise GradedError(f"generator {name} has negative degree {deg}")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise GradedError(f"bad generator name {name!r}")
        self.generators = gens
        self.names = names
        self.degrees = tuple(deg for _, deg in gens)
        self.index = {name: i for i, name in enumerate(names)}
        self.odd = tuple(deg % 2 == 1 for deg in self.degrees)
        self.odd_positions = tuple(i for i, o in enumerate(self.odd) if o)
        self._hash = hash(gens)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.generators)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, GeneratorTable):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"GeneratorTable({body})"

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index[name]]

    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def monomial_parity(self, mono: Monomial) -> int:
        return sum(mono[i] for i in self.odd_positions) & 1

    def gen(self, name: str) -> "GradedPoly":
        mono = [0] * len(self.names)
        try:
            mono[self.index[name]] = 1
        except KeyError:
            raise GradedError(f"unknown generator {name!r}") from None
        return GradedPoly._raw(self, {tuple(mono): Fraction(1)})

    def gens(self, *names: str) -> list["GradedPoly"]:
        return [self.gen(n) for n in names]

    def zero(self) -> "GradedPoly":
        return GradedPoly._raw(self, {})

    def one(self) -> "GradedPoly":
        return self.constant(1)

    def constant(self, c: Scalar) -> "GradedPoly":
        c = as_fraction(c)
        return GradedPoly._raw(self, {self.unit(): c} if c else {})

    def monomials_of_degree(self, degree: int,
                            names: Iterable[str] | None = None) -> list[Monomial]:
        """All normal-form monomials of a total degree in the given generators.

        Degree-0 generators are not allowed here since they would make the
        space infinite dimensional.
        """
        pos = ([self.index[n] for n in names] if names is not None
               else list(range(len(self.names))))
        for i in pos:
            if self.degrees[i] == 0:
                raise GradedError("degree-0 generators give infinite spaces")
        out: list[Monomial] = []
        base = [0] * len(self.names)

        def rec(j: int, remaining: int):
            if remaining == 0:
                out.append(tuple(base))
                return
            if j == len(pos):
                return
            i = pos[j]
            d = self.degrees[i]
            top = 1 if self.odd[i] else remaining // d
            for e in range(min(top, remaining // d), -1, -1):
                base[i] = e
                rec(j + 1, remaining - e * d)
            base[i] = 0

        rec(0, degree)
        return sorted(out, reverse=True)


def _mono_mul(table: GeneratorTable, m1: Monomial, m2: Monomial):
    """Product of two normal-form monomials as ``(monomial, sign)`` or None."""
    count = 0
    after = 0
    for j in reversed(table.odd_positions):
        if m2[j]:
            if m1[j]:
                return None
            count += after
        if m1[j]:
            after += 1
    return tuple(a + b for a, b in zip(m1, m2)), (-1 if count & 1 else 1)


def _check_same(p: "GradedPoly", q: "GradedPoly") -> None:
    if p.table is not q.table and p.table != q.table:
        raise TableMismatchError(f"{p.table!r} vs {q.table!r}")


class GradedPoly:
    """Element of the free graded-commutative algebra on a table.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("table", "_terms")

    def __init__(self, table: GeneratorTable,
                 terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        n = len(table)
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise GradedError(f"monomial {mono} does not fit {table!r}")
            if any(mono[i] > 1 for i in table.odd_positions):
                raise GradedError(f"odd generator with exponent > 1 in {mono}")
            c = as_fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self.table = table
        self._terms = clean

    @classmethod
    def _raw(cls, table, terms):
        obj = cls.__new__(cls)
        obj.table = table
        obj._terms = terms
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def degree_components(self) -> dict[int, "GradedPoly"]:
        parts: dict[int, dict] = {}
        for mono, c in self._terms.items():
            parts.setdefault(self.table.monomial_degree(mono), {})[mono] = c
        return {d: GradedPoly._raw(self.table, t) for d, t in sorted(parts.items())}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {self.table.monomial_degree(m) for m in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        degs = {self.table.monomial_degree(m) for m in self._terms}
        if len(degs) > 1:
            raise NotHomogeneousError(f"mixed degrees {sorted(degs)} in {self}")
        return degs.pop() if degs else None

    def support(self) -> set[str]:
        names = self.table.names
        return {names[i] for mono in self._terms for i, e in enumerate(mono) if e}

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get(self.table.unit(), Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            _check_same(self, other)
            return other
        return self.table.constant(other)

    def __add__(self, other) -> "GradedPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return GradedPoly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return GradedPoly._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "GradedPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GradedPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "GradedPoly":
        c = as_fraction(c)
        if not c:
            return self.table.zero()
        return GradedPoly._raw(self.table, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "GradedPoly":
        if not isinstance(other, GradedPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        _check_same(self, other)
        table = self.table
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                r = _mono_mul(table, m1, m2)
                if r is None:
                    continue
                mono, sign = r
                v = out.get(mono, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
                if v:
                    out[mono] = v
                else:
                    del out[mono]
        return GradedPoly._raw(table, out)

    def __rmul__(self, other) -> "GradedPoly":
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int) -> "GradedPoly":
        out = self.table.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return self.table == other.table and self._terms == other._terms
        try:
            return self == self.table.constant(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table, frozenset(self._terms.items())))

    # -- calculus -----------------------------------------------------------

    def derivative(self, name: str, side: str = "left") -> "GradedPoly":
        """Partial derivative by one generator acting from the left or right."""
        table = self.table
        i = table.index[name]
        odd = table.odd[i]
        if side not in ("left", "right"):
            raise ValueError(side)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = mono[i]
            if not e:
                continue
            if odd:
                if side == "left":
                    n = sum(mono[j] for j in table.odd_positions if j < i)
                else:
                    n = sum(mono[j] for j in table.odd_positions if j > i)
                coef = -c if n & 1 else c
            else:
                coef = c * e
            new = mono[:i] + (e - 1,) + mono[i + 1:]
            out[new] = out.get(new, 0) + coef
        return GradedPoly._raw(table, {m: v for m, v in out.items() if v})

    def evaluate(self, values: Mapping[str, Scalar]) -> "GradedPoly":
        """Substitute numbers for some degree-0 generators."""
        table = self.table
        subs = {}
        for name, v in values.items():
            i = table.index[name]
            if table.degrees[i] != 0:
                raise GradedError(f"can only evaluate degree-0 generators, not {name}")
            subs[i] = as_fraction(v)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            mono = list(mono)
            for i, v in subs.items():
                if mono[i]:
                    c = c * v ** mono[i]
                    mono[i] = 0
            mono = tuple(mono)
            out[mono] = out.get(mono, 0) + c
        return GradedPoly._raw(table, {m: v for m, v in out.items() if v})

    def embed(self, table: GeneratorTable) -> "GradedPoly":
        """Reinterpret in another table containing every generator used here."""
        if table == self.table:
            return self
        src = self.table
        pos = []
        for name in src.names:
            dst = table.index.get(name)
            if dst is not None and src.degree_of(name) != table.degrees[dst]:
                raise TableMismatchError(f"{name} changes degree")
            pos.append(dst)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            new = [0] * len(table)
            for i, e in enumerate(mono):
                if e:
                    if pos[i] is None:
                        raise TableMismatchError(f"{src.names[i]} missing from {table!r}")
                    new[pos[i]] = e
            seq = [pos[i] for i in src.odd_positions if mono[i]]
            inversions = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq))
                             if seq[x] > seq[y])
            out[tuple(new)] = -c if inversions & 1 else c
        return GradedPoly._raw(table, out)

    # -- printing -----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        table = self.table
        return sorted(self._terms.items(),
                      key=lambda mc: (table.monomial_degree(mc[0]),
                                      tuple(-e for e in mc[0])))

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"GradedPoly({to_string(self)!r})"


# ---------------------------------------------------------------------------
# functional interface


def mul(p: GradedPoly, q: GradedPoly) -> GradedPoly:
    _check_same(p, q)
    return p * q


def add(p: GradedPoly, q: GradedPoly) -> GradedPoly:
    _check_same(p, q)
    return p + q


def scale(c: Scalar, p: GradedPoly) -> GradedPoly:
    return p.scale(c)


def degree_components(p: GradedPoly) -> dict[int, GradedPoly]:
    return p.degree_components()


def word(table: GeneratorTable, names: Iterable[str]) -> GradedPoly:
    """Product of generators in the order written."""
    out = table.one()
    for name in names:
        out = out * table.gen(name)
    return out


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    """Graded derivation given by its images on generators."""

    __slots__ = ("table", "degree", "_values")

    def __init__(self, table: GeneratorTable, degree: int,
                 values: Mapping[str, GradedPoly | Scalar]):
        vals: dict[str, GradedPoly] = {}
        for name, img in values.items():
            if name not in table.index:
                raise GradedError(f"unknown generator {name!r}")
            if not isinstance(img, GradedPoly):
                img = table.constant(img)
            _check_same(table.zero(), img)
            target = table.degree_of(name) + degree
            if img and not img.is_homogeneous(target):
                raise NotHomogeneousError(
                    f"image of {name} must have degree {target}, got {img}")
            vals[name] = img
        self.table = table
        self.degree = degree
        self._values = vals

    @classmethod
    def zero(cls, table: GeneratorTable, degree: int) -> "Derivation":
        return cls(table, degree, {n: table.zero() for n in table.names})

    @classmethod
    def with_defaults(cls, table, degree, values) -> "Derivation":
        """Derivation with unspecified generators sent to zero."""
        full = {n: table.zero() for n in table.names}
        full.update(values)
        return cls(table, degree, full)

    @classmethod
    def partial(cls, table: GeneratorTable, name: str) -> "Derivation":
        """Left partial derivative by a generator."""
        return cls.with_defaults(table, -table.degree_of(name), {name: table.one()})

    @property
    def values(self) -> Mapping[str, GradedPoly]:
        return MappingProxyType(self._values)

    def __call__(self, p: GradedPoly) -> GradedPoly:
        return apply_derivation(self, p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.table != other.table:
            return False
        zero = self.table.zero()
        for name in self.table.names:
            if self._values.get(name, zero) != other._values.get(name, zero):
                return False
        nonzero = any(self._values.values()) or any(other._values.values())
        return self.degree == other.degree or not nonzero

    def __hash__(self):
        return hash((self.table, self.degree))

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.degree != other.degree:
            raise GradedError("adding derivations of different degrees")
        names = set(self._values) | set(other._values)
        zero = self.table.zero()
        return Derivation(self.table, self.degree,
                          {n: self._values.get(n, zero) + other._values.get(n, zero)
                           for n in names})

    def scale(self, c: Scalar) -> "Derivation":
        return Derivation(self.table, self.degree,
                          {n: v.scale(c) for n, v in self._values.items()})

    def commutator(self, other: "Derivation") -> "Derivation":
        """Graded commutator ``[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1``."""
        sign = -1 if (self.degree * other.degree) % 2 == 0 else 1
        vals = {}
        for name in self.table.names:
            g = self.table.gen(name)
            vals[name] = self(other(g)) + other(self(g)).scale(sign)
        return Derivation(self.table, self.degree + other.degree, vals)

    def __repr__(self) -> str:
        body = ", ".join(f"{n} -> {v}" for n, v in self._values.items() if v)
        return f"Derivation(degree={self.degree}; {body})"


def apply_derivation(d: Derivation, p: GradedPoly) -> GradedPoly:
    """Extend ``d`` from generators to ``p`` by the graded Leibniz rule."""
    _check_same(d.table.zero(), p)
    table = p.table
    n = len(table)
    odd_d = d.degree & 1
    out: dict[Monomial, Fraction] = {}
    for mono, c in p._terms.items():
        prefix_odd = 0
        for i, e in enumerate(mono):
            if not e:
                continue
            name = table.names[i]
            try:
                img = d._values[name]
            except KeyError:
                raise MissingImageError(f"no image for generator {name}") from None
            if img._terms:
                coef = c * e
                if odd_d and prefix_odd & 1:
                    coef = -coef
                prefix = mono[:i] + (0,) * (n - i)
                rest = (0,) * i + (e - 1,) + mono[i + 1:]
                for m_img, c_img in img._terms.items():
                    r1 = _mono_mul(table, prefix, m_img)
                    if r1 is None:
                        continue
                    r2 = _mono_mul(table, r1[0], rest)
                    if r2 is None:
                        continue
                    v = coef * c_img * (r1[1] * r2[1])
                    out[r2[0]] = out.get(r2[0], 0) + v
            if table.odd[i]:
                prefix_odd += 1
    return GradedPoly._raw(table, {m: v for m, v in out.items() if v})


# ---------------------------------------------------------------------------
# text form


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_string(p: GradedPoly) -> str:
    """Canonical sum-of-terms text; parsed back by :func:`parse_poly`."""
    if not p._terms:
        return "0"
    names = p.table.names
    pieces = []
    for mono, c in p.sorted_terms():
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        mag = abs(c)
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    text = pieces[0][1] if pieces[0][0] == "+" else "-" + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokens(text: str):
    for num, name, op in _TOKEN.findall(text):
        if num:
            yield ("num", int(num))
        elif name:
            yield ("name", name)
        elif op.strip():
            yield ("op", op)


def parse_poly(text: str, table: GeneratorTable) -> GradedPoly:
    """Parse ``"3/2*x1^2*alpha1 - a2"``.  Factors multiply in written order."""
    if isinstance(text, (int, Fraction)):
        return table.constant(text)
    toks = list(_tokens(str(text)))
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def factor() -> GradedPoly:
        kind, val = take()
        if kind == "num":
            if peek() == ("op", "/"):
                take()
                k2, den = take()
                if k2 != "num":
                    raise GradedError(f"bad rational in {text!r}")
                return table.constant(Fraction(val, den))
            return table.constant(val)
        if kind == "name":
            if val not in table.index:
                raise GradedError(f"unknown generator {val!r} in {text!r}")
            g = table.gen(val)
            if peek() == ("op", "^"):
                take()
                k2, ex = take()
                if k2 != "num":
                    raise GradedError(f"bad exponent in {text!r}")
                return g ** ex
            return g
        raise GradedError(f"unexpected token {val!r} in {text!r}")

    def term() -> GradedPoly:
        out = factor()
        while peek() == ("op", "*"):
            take()
            out = out * factor()
        return out

    total = table.zero()
    sign = 1
    if peek() in (("op", "+"), ("op", "-")):
        sign = -1 if take()[1] == "-" else 1
    total = total + term().scale(sign)
    while pos < len(toks):
        kind, val = take()
        if (kind, val) not in (("op", "+"), ("op", "-")):
            raise GradedError(f"unexpected {val!r} in {text!r}")
        total = total + term().scale(-1 if val == "-" else 1)
    return total


def random_homogeneous(table: GeneratorTable, degree: int, rng, *,
                       terms: int = 3, max_coeff: int = 3,
                       x_power: int = 1, names=None) -> GradedPoly:
    """Random element of a given degree with small integer coefficients.

    Degree-0 generators enter with exponent at most ``x_power``; ``names``
    restricts the generators used.
    """
    allowed = set(table.names if names is None else names)
    positive = [n for n, d in table.generators if d > 0 and n in allowed]
    zero_deg = [n for n, d in table.generators if d == 0 and n in allowed]
    monos = table.monomials_of_degree(degree, positive) if degree > 0 else [table.unit()]
    if not monos:
        return table.zero()
    out = table.zero()
    for _ in range(terms):
        mono = list(rng.choice(monos))
        for name in zero_deg:
            mono[table.index[name]] = rng.randint(0, x_power)
        c = rng.randint(-max_coeff, max_coeff)
        out = out + GradedPoly._raw(table, {tuple(mono): Fraction(c)} if c else {})
    return out
