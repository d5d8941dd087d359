"""Standard algebroids and random generators used by tests and the corpus."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebroid import LieAlgebroidData
from .graded import GradedPoly, random_homogeneous
from .symplectic import CotangentChart, base_table


def _zeros(n):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def _antisym(table, c, a, b, v):
    table[c][a][b] = v
    table[c][b][a] = -v


def levi_civita(a: int, b: int, c: int) -> int:
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


def so3():
    return [[[levi_civita(a, b, c) for b in range(3)] for a in range(3)] for c in range(3)]


def heisenberg():
    t = _zeros(3)
    _antisym(t, 2, 0, 1, 1)
    return t


def abelian(n: int):
    return _zeros(n)


def sl2():
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h with basis (h, e, f)
    t = _zeros(3)
    _antisym(t, 1, 0, 1, 2)
    _antisym(t, 2, 0, 2, -2)
    _antisym(t, 0, 1, 2, 1)
    return t


def affine_line():
    """The two dimensional non-abelian algebra ``[e1, e2] = e2``."""
    t = _zeros(2)
    _antisym(t, 1, 0, 1, 1)
    return t


def direct_sum(s, t):
    n1, n2 = len(s), len(t)
    n = n1 + n2
    out = _zeros(n)
    for c, a, b in itertools.product(range(n1), repeat=3):
        out[c][a][b] = s[c][a][b]
    for c, a, b in itertools.product(range(n2), repeat=3):
        out[n1 + c][n1 + a][n1 + b] = t[c][a][b]
    return out


def broken_jacobi(n: int = 3, rng: random.Random | None = None):
    """An antisymmetric table that (generically) violates Jacobi."""
    rng = rng or random.Random(0)
    while True:
        t = _zeros(n)
        for c in range(n):
            for a, b in itertools.combinations(range(n), 2):
                _antisym(t, c, a, b, rng.randint(-2, 2))
        if any(jacobiator_constants(t)):
            return t


def jacobiator_constants(t):
    """All components of the Jacobiator of a constant table."""
    n = len(t)
    out = []
    for a, b, c in itertools.combinations(range(n), 3):
        for d in range(n):
            v = 0
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                v += sum(Fraction(t[e][y][z]) * t[d][x][e] for e in range(n))
            out.append(v)
    return out


def change_basis(t, g):
    """Structure constants in the basis ``f_a = sum_b g[b][a] e_b``."""
    import sympy

    n = len(t)
    G = sympy.Matrix(n, n, lambda i, j: sympy.Rational(g[i][j]))
    Gi = G.inv()
    out = _zeros(n)
    for c, a, b in itertools.product(range(n), repeat=3):
        v = sympy.Integer(0)
        for i, j, e in itertools.product(range(n), repeat=3):
            if t[e][i][j]:
                v += G[i, a] * G[j, b] * t[e][i][j] * Gi[c, e]
        out[c][a][b] = Fraction(int(v.p), int(v.q))
    return out


def random_invertible(n: int, rng: random.Random, bound: int = 2):
    import sympy

    while True:
        g = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(g).det() != 0:
            return g


LIE_ALGEBRAS = {
    "so3": so3,
    "heisenberg": heisenberg,
    "sl2": sl2,
    "affine": affine_line,
    "abelian3": lambda: abelian(3),
    "abelian4": lambda: abelian(4),
    "so3+affine": lambda: direct_sum(so3(), affine_line()),
    "heisenberg+abelian": lambda: direct_sum(heisenberg(), abelian(1)),
}


def random_lie_algebra(rng: random.Random, max_rank: int = 5):
    """A catalog algebra in a random basis, rank at most ``max_rank``."""
    names = [k for k, f in LIE_ALGEBRAS.items() if len(f()) <= max_rank]
    name = rng.choice(names)
    t = LIE_ALGEBRAS[name]()
    return name, change_basis(t, random_invertible(len(t), rng))


# -- algebroids with a base ----------------------------------------------------


def tangent(m: int) -> LieAlgebroidData:
    """A = TM with the coordinate frame: rho = id, c = 0."""
    anchor = [[1 if i == a else 0 for i in range(m)] for a in range(m)]
    return LieAlgebroidData.from_arrays(m, m, anchor, None)


def tangent_frame(frame) -> LieAlgebroidData:
    """TM in the frame ``e_a = sum_i frame[a][i] d/dx^i``.

    ``frame`` must be unipotent upper triangular (entries base polynomials or
    strings) so that its inverse is polynomial.
    """
    m = len(frame)
    base = base_table(m)
    F = [[_bp(frame[a][i], base) for i in range(m)] for a in range(m)]
    for a in range(m):
        for i in range(m):
            if (i < a and F[a][i]) or (i == a and F[a][i] != base.one()):
                raise ValueError("frame must be unipotent upper triangular")
    # inverse by the finite Neumann series of the nilpotent part
    N = [[F[a][i] - (base.one() if a == i else base.zero()) for i in range(m)] for a in range(m)]
    inv = [[base.one() if a == i else base.zero() for i in range(m)] for a in range(m)]
    power = [row[:] for row in inv]
    for step in range(1, m):
        power = _matmul(power, N, base)
        sign = -1 if step % 2 else 1
        inv = [[inv[a][i] + power[a][i].scale(sign) for i in range(m)] for a in range(m)]
    structure = _zeros(m)
    for a, b in itertools.combinations(range(m), 2):
        vec = []
        for i in range(m):
            v = base.zero()
            for j in range(m):
                v = v + F[a][j] * F[b][i].derivative(f"x{j + 1}")
                v = v - F[b][j] * F[a][i].derivative(f"x{j + 1}")
            vec.append(v)
        for c in range(m):
            val = base.zero()
            for i in range(m):
                val = val + vec[i] * inv[i][c]
            structure[c][a][b] = val
            structure[c][b][a] = -val
    return LieAlgebroidData.from_arrays(m, m, F, structure)


def _matmul(A, B, base):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), base.zero()) for j in range(p)]
            for i in range(n)]


def _bp(v, base):
    from .algebroid import _base_poly
    return _base_poly(v, base)


def action(structure, matrices) -> LieAlgebroidData:
    """Action algebroid of g on R^m through linear vector fields.

    ``matrices[a]`` is the m x m matrix of the image of e_a; the anchor is
    ``rho(e_a) = -sum (M_a)_ij x^j d/dx^i``.  The minus sign makes the
    assignment a Lie algebra morphism when ``a -> M_a`` is a representation.
    """
    n = len(structure)
    m = len(matrices[0])
    base = base_table(m)
    anchor = []
    for a in range(n):
        row = []
        for i in range(m):
            v = base.zero()
            for j in range(m):
                if matrices[a][i][j]:
                    v = v + base.gen(f"x{j + 1}").scale(-Fraction(matrices[a][i][j]))
            row.append(v)
        anchor.append(row)
    return LieAlgebroidData.from_arrays(m, n, anchor, structure)


def adjoint_matrices(structure):
    """``(ad e_a)_cb = c^c_ab``."""
    n = len(structure)
    return [[[structure[c][a][b] for b in range(n)] for c in range(n)] for a in range(n)]


def bundle_of_algebras(structure, factor: str, m: int) -> LieAlgebroidData:
    """rho = 0 and ``c(x) = factor(x) * structure``."""
    base = base_table(m)
    f = _bp(factor, base)
    n = len(structure)
    st = [[[f.scale(Fraction(structure[c][a][b])) for b in range(n)] for a in range(n)]
          for c in range(n)]
    return LieAlgebroidData.from_arrays(m, n, None, st)


def tangent_plus(m: int, structure) -> LieAlgebroidData:
    """``TM + (M x g)``: coordinate fields bracket trivially with constant sections."""
    r = len(structure)
    n = m + r
    anchor = [[1 if i == a else 0 for i in range(m)] for a in range(n)]
    st = _zeros(n)
    for c, a, b in itertools.product(range(r), repeat=3):
        st[m + c][m + a][m + b] = structure[c][a][b]
    return LieAlgebroidData.from_arrays(m, n, anchor, st)


def random_algebroid(rng: random.Random) -> tuple[str, LieAlgebroidData]:
    """A genuine Lie algebroid, possibly with a polynomial base."""
    kind = rng.choice(["point", "tangent", "frame", "action", "bundle"])
    if kind == "point":
        name, t = random_lie_algebra(rng, 4)
        return name, LieAlgebroidData.lie_algebra(t)
    if kind == "tangent":
        m = rng.randint(1, 2)
        return f"T R^{m}", tangent(m)
    if kind == "frame":
        m = rng.choice([2, 3])
        frame = [[0] * m for _ in range(m)]
        for a in range(m):
            frame[a][a] = 1
            for i in range(a + 1, m):
                deps = [f"x{j + 1}" for j in range(m) if j != i]
                frame[a][i] = rng.choice(["0", "1"] + deps + [d + "^2" for d in deps])
        return "frame", tangent_frame(frame)
    if kind == "action":
        t = so3() if rng.random() < 0.5 else affine_line()
        return "action", action(t, adjoint_matrices(t))
    name, t = random_lie_algebra(rng, 3)
    return "bundle", bundle_of_algebras(t, rng.choice(["x1", "x1^2 + 1", "2"]), 1)


def random_form(chart: CotangentChart, degree: int, rng: random.Random,
                terms: int = 3, x_power: int = 1) -> GradedPoly:
    """A random element of degree ``degree`` in x and alpha."""
    names = chart.form_names()
    return random_homogeneous(chart.table, degree, rng, terms=terms, names=names,
                              x_power=x_power)


def random_section(chart: CotangentChart, rng: random.Random, x_power: int = 1) -> GradedPoly:
    base = chart.base
    coeffs = []
    for _ in range(chart.n):
        c = base.constant(rng.randint(-2, 2))
        for i in range(chart.m):
            if x_power and rng.random() < 0.4:
                c = c + base.gen(f"x{i + 1}").scale(rng.randint(-2, 2))
        coeffs.append(c)
    return chart.section(coeffs, random_form(chart, chart.k - 1, rng, x_power=x_power))


def random_rich_algebroid(rng: random.Random, min_rank: int) -> tuple[str, LieAlgebroidData]:
    """A Lie algebroid of rank at least ``min_rank``, so that forms of degree
    ``min_rank`` exist; the extra rank comes from sums with other algebras."""
    kind = rng.choice(["point", "tangent+", "bundle"])
    m = rng.randint(1, 2) if kind == "tangent+" else (1 if kind == "bundle" else 0)
    need = max(min_rank - (m if kind == "tangent+" else 0), 1)
    name, t = random_lie_algebra(rng, 4)
    while len(t) < need:
        extra_name, extra = random_lie_algebra(rng, min(4, max(need - len(t), 2)))
        name, t = f"{name}+{extra_name}", direct_sum(t, extra)
    if kind == "point":
        return name, LieAlgebroidData.lie_algebra(t)
    if kind == "tangent+":
        return f"T R^{m} + {name}", tangent_plus(m, t)
    return f"bundle {name}", bundle_of_algebras(t, rng.choice(["x1", "x1^2 + 1"]), 1)
