"""Two-term representations up to homotopy and L_k-algebroids in three degrees.

Frames: ``f_j`` for E_0, ``g_i`` for E_1, ``e_a`` for A.  Tables:

* ``partial[i][j]``: ``d f_j = sum_i partial[i][j] g_i``
* ``nabla[a][l][i]``: ``nabla_{e_a} s_l = sum_i nabla[a][l][i] s_i``
* ``K[a][b][i][j]``: ``K(e_a, e_b) g_j = sum_i K[a][b][i][j] f_i``

Sections are tuples of base polynomials.  The L_k identities are checked
through the square of the associated degree 1 vector field, whose components
are sorted into the seven Jacobi-like clauses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .algebroid import (LieAlgebroidData, _base_poly, _h_poly, build_theta, check_master,
                        interior)
from .errors import GradedError, UnsupportedRegimeError
from .graded import Derivation, GeneratorTable, GradedPoly
from .report import Report
from .symplectic import CotangentChart, base_table, hamiltonian_vf

Vec = tuple  # tuple of base polynomials


def _zero_vec(base, r) -> Vec:
    return tuple(base.zero() for _ in range(r))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vscale(f, u):
    return tuple(f * a for a in u)


def _table(value, base, shape):
    """Coerce nested lists to nested tuples of base polynomials of a given shape."""
    if not shape:
        return _base_poly(value, base)
    if len(value) != shape[0]:
        raise GradedError(f"table has length {len(value)}, expected {shape[0]}")
    return tuple(_table(v, base, shape[1:]) for v in value)


def _zeros(base, shape):
    if not shape:
        return base.zero()
    return tuple(_zeros(base, shape[1:]) for _ in range(shape[0]))


@dataclass(frozen=True)
class ConnectionData:
    """``nabla_{d/dx^i} e_b = sum_c gamma[i][b][c] e_c``."""

    m: int
    n: int
    gamma: tuple

    @classmethod
    def from_arrays(cls, m: int, n: int, gamma=None) -> "ConnectionData":
        base = base_table(m)
        if gamma is None:
            return cls(m, n, _zeros(base, (m, n, n)))
        return cls(m, n, _table(gamma, base, (m, n, n)))

    @classmethod
    def trivial(cls, m: int, n: int) -> "ConnectionData":
        return cls.from_arrays(m, n)

    def covariant(self, X: Vec, s: Vec) -> Vec:
        """``nabla_X s`` for a vector field X and a section s of A."""
        base = base_table(self.m)
        out = list(_zero_vec(base, self.n))
        for i in range(self.m):
            if not X[i]:
                continue
            for c in range(self.n):
                out[c] = out[c] + X[i] * s[c].derivative(f"x{i + 1}")
                for b in range(self.n):
                    if s[b] and self.gamma[i][b][c]:
                        out[c] = out[c] + X[i] * s[b] * self.gamma[i][b][c]
        return tuple(out)


@dataclass(frozen=True)
class RepUTHData:
    """``(E_0 -> E_1, partial, nabla0, nabla1, K)`` over an algebroid of rank n."""

    m: int
    n: int
    r0: int
    r1: int
    partial: tuple
    nabla0: tuple
    nabla1: tuple
    K: tuple

    def __post_init__(self):
        for a in range(self.n):
            for b in range(self.n):
                for i in range(self.r0):
                    for j in range(self.r1):
                        if self.K[a][b][i][j] != -self.K[b][a][i][j]:
                            raise GradedError("K must be antisymmetric in its A slots")

    @classmethod
    def from_arrays(cls, m, n, r0, r1, partial=None, nabla0=None, nabla1=None,
                    K=None) -> "RepUTHData":
        base = base_table(m)

        def tab(v, shape):
            return _zeros(base, shape) if v is None else _table(v, base, shape)

        return cls(m, n, r0, r1, tab(partial, (r1, r0)), tab(nabla0, (n, r0, r0)),
                   tab(nabla1, (n, r1, r1)), tab(K, (n, n, r0, r1)))

    @classmethod
    def zero(cls, m: int, n: int) -> "RepUTHData":
        return cls.from_arrays(m, n, 0, 0)

    def with_K(self, K) -> "RepUTHData":
        return RepUTHData(self.m, self.n, self.r0, self.r1, self.partial, self.nabla0,
                          self.nabla1, K)


# ---------------------------------------------------------------------------
# operators on sections


def _connection(alg: LieAlgebroidData, table, a: Vec, s: Vec) -> Vec:
    """``nabla_a s`` from a Christoffel table ``table[c][l][i]``."""
    r = len(s)
    out = list(_zero_vec(alg.base, r))
    for c in range(alg.n):
        if not a[c]:
            continue
        ec = alg.basis(c)
        for i in range(r):
            out[i] = out[i] + a[c] * alg.anchor_action(ec, s[i])
        for l in range(r):
            if not s[l]:
                continue
            for i in range(r):
                if table[c][l][i]:
                    out[i] = out[i] + a[c] * s[l] * table[c][l][i]
    return tuple(out)


def _apply(mat, s: Vec, base) -> Vec:
    rows = len(mat)
    return tuple(sum((mat[i][j] * s[j] for j in range(len(s)) if s[j] and mat[i][j]), base.zero())
                 for i in range(rows))


def _K_apply(rep: RepUTHData, a: Vec, b: Vec, s: Vec, base) -> Vec:
    out = _zero_vec(base, rep.r0)
    for c in range(rep.n):
        for d in range(rep.n):
            if a[c] and b[d]:
                out = _vadd(out, _vscale(a[c] * b[d], _apply(rep.K[c][d], s, base)))
    return out


def _unit(base, r, j) -> Vec:
    return tuple(base.one() if i == j else base.zero() for i in range(r))


def _curvature(alg, table, a, b, s):
    conn = lambda u, t: _connection(alg, table, u, t)  # noqa: E731
    first = conn(a, conn(b, s))
    second = conn(b, conn(a, s))
    third = conn(alg.bracket(a, b), s)
    return tuple(x - y - z for x, y, z in zip(first, second, third))


def check_ruth(rep: RepUTHData, alg: LieAlgebroidData) -> Report:
    """The four defining identities on basis sections."""
    if (rep.m, rep.n) != (alg.m, alg.n):
        raise GradedError("representation and algebroid ranks differ")
    base = alg.base
    n, r0, r1 = alg.n, rep.r0, rep.r1
    rep_out = Report("ruth")
    E = [alg.basis(a) for a in range(n)]
    f = [_unit(base, r0, j) for j in range(r0)]
    g = [_unit(base, r1, j) for j in range(r1)]
    d = lambda s: _apply(rep.partial, s, base)  # noqa: E731
    Kf = lambda a, b, s: _K_apply(rep, a, b, s, base)  # noqa: E731

    bad = None
    for a, j in itertools.product(range(n), range(r0)):
        lhs = d(_connection(alg, rep.nabla0, E[a], f[j]))
        rhs = _connection(alg, rep.nabla1, E[a], d(f[j]))
        if lhs != rhs:
            bad = {"a": a + 1, "f": j + 1}
            break
    rep_out.add("d∘∇0=∇1∘d", bad is None, bad)

    bad = None
    for (a, b), j in itertools.product(itertools.combinations(range(n), 2), range(r0)):
        if _curvature(alg, rep.nabla0, E[a], E[b], f[j]) != Kf(E[a], E[b], d(f[j])):
            bad = {"a": a + 1, "b": b + 1, "f": j + 1}
            break
    rep_out.add("F∇0=K∘d", bad is None, bad)

    bad = None
    for (a, b), j in itertools.product(itertools.combinations(range(n), 2), range(r1)):
        if _curvature(alg, rep.nabla1, E[a], E[b], g[j]) != d(Kf(E[a], E[b], g[j])):
            bad = {"a": a + 1, "b": b + 1, "g": j + 1}
            break
    rep_out.add("F∇1=d∘K", bad is None, bad)

    def hom_conn(a, b, c, s):
        """``(nabla_a K(b, c)) s``."""
        x = _connection(alg, rep.nabla0, a, Kf(b, c, s))
        y = Kf(b, c, _connection(alg, rep.nabla1, a, s))
        return tuple(p - q for p, q in zip(x, y))

    bad = None
    for (a, b, c), j in itertools.product(itertools.combinations(range(n), 3), range(r1)):
        ea, eb, ec = E[a], E[b], E[c]
        s = g[j]
        terms = [hom_conn(ea, eb, ec, s), _vscale(-base.one(), hom_conn(eb, ea, ec, s)),
                 hom_conn(ec, ea, eb, s),
                 _vscale(-base.one(), Kf(alg.bracket(ea, eb), ec, s)),
                 Kf(alg.bracket(ea, ec), eb, s),
                 _vscale(-base.one(), Kf(alg.bracket(eb, ec), ea, s))]
        total = _zero_vec(base, r0)
        for t in terms:
            total = _vadd(total, t)
        if any(total):
            bad = {"a": a + 1, "b": b + 1, "c": c + 1, "g": j + 1}
            break
    rep_out.add("d∇K=0", bad is None, bad)
    return rep_out


# ---------------------------------------------------------------------------
# adjoint and coadjoint


def require_lie(alg: LieAlgebroidData) -> None:
    """Raise unless ``{theta, theta} = 0`` for the algebroid."""
    chart = CotangentChart(4, alg.m, alg.n)
    if not check_master(build_theta(alg, chart=chart), chart).passed:
        raise GradedError("input is not a Lie algebroid")


def _check_conn(alg, nabla):
    if nabla is None:
        nabla = ConnectionData.trivial(alg.m, alg.n)
    if (nabla.m, nabla.n) != (alg.m, alg.n):
        raise GradedError("connection does not match the algebroid")
    return nabla


def _anchor_vec(alg, a: Vec) -> Vec:
    """``rho(a)`` as a vector field (tuple of base polynomials)."""
    return tuple(alg.anchor_action(a, alg.base.gen(f"x{i + 1}")) for i in range(alg.m))


def _vf_bracket(X: Vec, Y: Vec, m: int) -> Vec:
    base = base_table(m)
    out = []
    for i in range(m):
        v = base.zero()
        for j in range(m):
            v = v + X[j] * Y[i].derivative(f"x{j + 1}") - Y[j] * X[i].derivative(f"x{j + 1}")
        out.append(v)
    return tuple(out)


def adjoint_rep(alg: LieAlgebroidData, nabla: ConnectionData | None = None) -> RepUTHData:
    """``E_0 = A``, ``E_1 = TM``, ``partial = rho``, ``K = -R^bas``.

    With ``F(a, b) = [nabla_a, nabla_b] - nabla_[a,b]`` the identity
    ``F = K∘partial`` forces the minus sign in front of the basic curvature.
    """
    require_lie(alg)
    nabla = _check_conn(alg, nabla)
    base = alg.base
    n, m = alg.n, alg.m
    E = [alg.basis(a) for a in range(n)]
    X = [_unit(base, m, i) for i in range(m)]

    def nab0(a, b):
        return _vadd(alg.bracket(a, b), nabla.covariant(_anchor_vec(alg, b), a))

    def nab1(a, Y):
        return _vadd(_vf_bracket(_anchor_vec(alg, a), Y, m),
                     _anchor_vec(alg, nabla.covariant(Y, a)))

    partial = [[alg.anchor[a][i] for a in range(n)] for i in range(m)]
    n0 = [[list(nab0(E[a], E[b])) for b in range(n)] for a in range(n)]
    n1 = [[list(nab1(E[a], X[j])) for j in range(m)] for a in range(n)]
    K = [[[[base.zero()] * m for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a, b in itertools.product(range(n), repeat=2):
        for j in range(m):
            val = basic_curvature(alg, nabla, E[a], E[b], X[j])
            for i in range(n):
                K[a][b][i][j] = -val[i]
    return RepUTHData.from_arrays(m, n, n, m, partial, n0, n1, K)


def basic_curvature(alg, nabla, a: Vec, b: Vec, X: Vec) -> Vec:
    """``K(a,b)(X) = nabla_X[a,b] - [nabla_X a, b] - [a, nabla_X b]
    + nabla_{nabla1_a X} b - nabla_{nabla1_b X} a``."""
    m = alg.m
    cov = nabla.covariant

    def nab1(u, Y):
        return _vadd(_vf_bracket(_anchor_vec(alg, u), Y, m), _anchor_vec(alg, cov(Y, u)))

    terms = [cov(X, alg.bracket(a, b)),
             _vscale(-alg.base.one(), alg.bracket(cov(X, a), b)),
             _vscale(-alg.base.one(), alg.bracket(a, cov(X, b))),
             cov(nab1(a, X), b),
             _vscale(-alg.base.one(), cov(nab1(b, X), a))]
    out = _zero_vec(alg.base, alg.n)
    for t in terms:
        out = _vadd(out, t)
    return out


def dual_rep(rep: RepUTHData) -> RepUTHData:
    """``(E_1* -> E_0*, partial^T, dual connections, -K^T)``."""
    n, r0, r1 = rep.n, rep.r0, rep.r1
    partial = [[rep.partial[j][i] for j in range(r1)] for i in range(r0)]
    # new E_0 = E_1*, new E_1 = E_0*
    n0 = [[[-rep.nabla1[a][i][l] for i in range(r1)] for l in range(r1)] for a in range(n)]
    n1 = [[[-rep.nabla0[a][i][l] for i in range(r0)] for l in range(r0)] for a in range(n)]
    K = [[[[-rep.K[a][b][j][i] for j in range(r0)] for i in range(r1)] for b in range(n)]
         for a in range(n)]
    return RepUTHData.from_arrays(rep.m, n, r1, r0, partial, n0, n1, K)


def coadjoint_rep(alg: LieAlgebroidData, nabla: ConnectionData | None = None) -> RepUTHData:
    """``E_0 = T*M``, ``E_1 = A*``, ``partial = rho^*``: the dual of the adjoint."""
    return dual_rep(adjoint_rep(alg, nabla))


# ---------------------------------------------------------------------------
# L_k-algebroids


def _sorted_key(idx):
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, None
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


@dataclass(frozen=True)
class LkAlgebroidData:
    """Three-degree L_k-algebroid: ``A_0 = alg``, ``A_{-k+2}`` of rank r1,
    ``A_{-k+1}`` of rank r0.

    ``lk`` and ``lk1`` map increasing index tuples to vectors in ``A_{-k+2}``
    and ``A_{-k+1}``.
    """

    k: int
    alg: LieAlgebroidData
    r1: int
    r0: int
    partial: tuple
    Phi: tuple
    Psi: tuple
    l3: tuple
    lk: Mapping = field(default_factory=dict)
    lk1: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 3:
            raise GradedError("L_k layouts need k >= 3")
        base = self.alg.base
        for name, data, size, r in (("l_k", self.lk, self.k, self.r1),
                                    ("l_k+1", self.lk1, self.k + 1, self.r0)):
            clean = {}
            for key, vec in dict(data).items():
                key = tuple(key)
                if len(key) != size or list(key) != sorted(set(key)):
                    raise GradedError(f"{name} keys must be increasing {size}-tuples")
                vec = tuple(_base_poly(v, base) for v in vec)
                if len(vec) != r:
                    raise GradedError(f"{name} values must have {r} entries")
                if any(vec):
                    clean[key] = vec
            object.__setattr__(self, "lk" if name == "l_k" else "lk1", clean)

    @property
    def m(self) -> int:
        return self.alg.m

    @property
    def n(self) -> int:
        return self.alg.n

    def bracket_k(self, idx) -> Vec:
        sign, key = _sorted_key(idx)
        if not sign or key not in self.lk:
            return _zero_vec(self.alg.base, self.r1)
        return _vscale(self.alg.base.constant(sign), self.lk[key])

    def bracket_k1(self, idx) -> Vec:
        sign, key = _sorted_key(idx)
        if not sign or key not in self.lk1:
            return _zero_vec(self.alg.base, self.r0)
        return _vscale(self.alg.base.constant(sign), self.lk1[key])

    def with_tables(self, **changes) -> "LkAlgebroidData":
        data = {f: getattr(self, f) for f in
                ("k", "alg", "r1", "r0", "partial", "Phi", "Psi", "l3", "lk", "lk1")}
        data.update(changes)
        return LkAlgebroidData(**data)


def semidirect(alg: LieAlgebroidData, rep: RepUTHData, k: int) -> LkAlgebroidData:
    """``A ⋉ (E_0 -> E_1)[k-1]`` with vanishing l_k and l_{k+1}."""
    if k <= 2:
        raise GradedError("semidirect products need k > 2")
    if (rep.m, rep.n) != (alg.m, alg.n):
        raise GradedError("representation and algebroid ranks differ")
    return LkAlgebroidData(k, alg, rep.r1, rep.r0, rep.partial, rep.nabla1, rep.nabla0, rep.K)


def twisted_coadjoint_semidirect(alg: LieAlgebroidData, nabla: ConnectionData | None,
                                 H, k: int) -> LkAlgebroidData:
    """Coadjoint semidirect product with ``l_k = i_ak ... i_a1 H`` and
    ``l_{k+1} = (nabla H)(a_1, ..., a_{k+1})`` in T*M."""
    nabla = _check_conn(alg, nabla)
    base = semidirect(alg, coadjoint_rep(alg, nabla), k)
    chart = CotangentChart(k, alg.m, alg.n)
    Hp = _h_poly(H, chart)
    if not Hp:
        return base
    n, m = alg.n, alg.m
    E = [alg.basis(a) for a in range(n)]

    def H_on(vectors):
        out = Hp
        for v in vectors:
            out = interior(v, out, chart)
        return _to_base(out, chart)

    lk = {}
    for I in itertools.combinations(range(n), k):
        vecs = [E[i] for i in I]
        lk[I] = tuple(H_on(vecs + [E[c]]) for c in range(n))
    lk1 = {}
    if m:
        for I in itertools.combinations(range(n), k + 1):
            vecs = [E[i] for i in I]
            comp = []
            for j in range(m):
                X = _unit(alg.base, m, j)
                val = H_on(vecs).derivative(f"x{j + 1}")
                for pos in range(k + 1):
                    moved = list(vecs)
                    moved[pos] = nabla.covariant(X, vecs[pos])
                    val = val - H_on(moved)
                comp.append(val)
            lk1[I] = tuple(comp)
    return base.with_tables(lk=lk, lk1=lk1)


def _to_base(f: GradedPoly, chart) -> GradedPoly:
    if f.support() - set(chart.x):
        raise GradedError(f"expected a base function, got {f}")
    return f.embed(chart.base)


# ---------------------------------------------------------------------------
# the degree 1 vector field and its square


def lk_table(lk: LkAlgebroidData) -> GeneratorTable:
    k = lk.k
    return GeneratorTable([(f"x{i + 1}", 0) for i in range(lk.m)]
                          + [(f"alpha{a + 1}", 1) for a in range(lk.n)]
                          + [(f"v{i + 1}", k - 1) for i in range(lk.r1)]
                          + [(f"w{j + 1}", k) for j in range(lk.r0)])


# relative signs of the homotopy terms in Q (decalage conventions)
SIGN_PARTIAL = 1
SIGN_L3 = 1


def sign_lk(k: int) -> int:
    return -1 if k % 2 else 1


SIGN_LK1 = -1


def lk_vector_field(lk: LkAlgebroidData, names: Mapping[str, str] | None = None,
                    table: GeneratorTable | None = None) -> Derivation:
    """The homological vector field of the L_k-algebroid.

    ``names`` renames the generator families (``v`` and ``w``) when building
    the derivation on another table.
    """
    names = dict(names or {})
    vname, wname = names.get("v", "v"), names.get("w", "w")
    table = table or lk_table(lk)
    alg = lk.alg
    n, m = alg.n, alg.m
    g = table.gen
    emb = lambda f: f.embed(table)  # noqa: E731
    al = [g(f"alpha{a + 1}") for a in range(n)]
    vs = [g(f"{vname}{i + 1}") for i in range(lk.r1)]
    ws = [g(f"{wname}{j + 1}") for j in range(lk.r0)]
    values = {}
    for i in range(m):
        val = table.zero()
        for a in range(n):
            if alg.anchor[a][i]:
                val = val + emb(alg.anchor[a][i]) * al[a]
        values[f"x{i + 1}"] = val
    for c in range(n):
        val = table.zero()
        for a, b in itertools.combinations(range(n), 2):
            s = alg.structure[c][a][b]
            if s:
                val = val - emb(s) * al[a] * al[b]
        values[f"alpha{c + 1}"] = val
    for i in range(lk.r1):
        val = table.zero()
        for a in range(n):
            for l in range(lk.r1):
                if lk.Phi[a][l][i]:
                    val = val - emb(lk.Phi[a][l][i]) * al[a] * vs[l]
        for j in range(lk.r0):
            if lk.partial[i][j]:
                val = val + (emb(lk.partial[i][j]) * ws[j]).scale(SIGN_PARTIAL)
        for I, vec in lk.lk.items():
            if vec[i]:
                word = table.one()
                for a in I:
                    word = word * al[a]
                val = val + (emb(vec[i]) * word).scale(sign_lk(lk.k))
        values[f"{vname}{i + 1}"] = val
    for j in range(lk.r0):
        val = table.zero()
        for a in range(n):
            for l in range(lk.r0):
                if lk.Psi[a][l][j]:
                    val = val - emb(lk.Psi[a][l][j]) * al[a] * ws[l]
        for a, b in itertools.combinations(range(n), 2):
            for l in range(lk.r1):
                c = lk.l3[a][b][j][l]
                if c:
                    val = val + (emb(c) * al[a] * al[b] * vs[l]).scale(SIGN_L3)
        for I, vec in lk.lk1.items():
            if vec[j]:
                word = table.one()
                for a in I:
                    word = word * al[a]
                val = val + (emb(vec[j]) * word).scale(SIGN_LK1)
        values[f"{wname}{j + 1}"] = val
    return Derivation(table, 1, values)


CLAUSES = {
    1: "1: Jacobi and anchor",
    2: "2: Phi∘d = d∘Psi",
    3: "3: l3(a,b,dX) = F^Psi(a,b)X",
    4: "4: d l3(a,b,xi) = F^Phi(a,b)xi",
    5: "5: l3 cocycle",
    6: "6: l_k identity",
    7: "7: l_k+1 identity",
}


def _classify(gen: str, mono, table) -> int:
    kinds = {table.names[i][0] for i, e in enumerate(mono) if e and table.degrees[i] > 1}
    if gen[0] in "xa":
        return 1
    if gen[0] == "v":
        return 2 if "w" in kinds else 4 if "v" in kinds else 6
    return 3 if "w" in kinds else 5 if "v" in kinds else 7


def _tuple_of(mono, table) -> dict:
    out = {"alpha": [], "v": [], "w": []}
    for i, e in enumerate(mono):
        if not e:
            continue
        name = table.names[i]
        for key in ("alpha", "v", "w"):
            if name.startswith(key):
                out[key] += [int(name[len(key):])] * e
    return {k: v for k, v in out.items() if v}


def check_lk_jacobi(lk: LkAlgebroidData) -> Report:
    """All seven clauses, read off from the components of ``Q^2``."""
    if lk.k == 3:
        raise UnsupportedRegimeError("the k = 3 layout has extra brackets; use k >= 4")
    table = lk_table(lk)
    Q = lk_vector_field(lk, table=table)
    rep = Report("lk-jacobi")
    found: dict[int, dict] = {}
    for name in table.names:
        sq = Q(Q(table.gen(name)))
        for mono, c in sq.sorted_terms():
            clause = _classify(name, mono, table)
            if clause not in found:
                found[clause] = {"generator": name, "monomial": _tuple_of(mono, table),
                                 "coefficient": str(GradedPoly._raw(table, {mono: c}))}
    for num, title in CLAUSES.items():
        rep.add(title, num not in found, found.get(num))
    return rep


def failing_clauses(report: Report) -> set[int]:
    return {int(c.name.split(":")[0]) for c in report.clauses if not c.passed}


def q_from_lk(lk: LkAlgebroidData, chart: CotangentChart) -> Derivation:
    """The vector field of ``lk`` on the chart, with ``v_i -> a_i``.

    Only the point base is supported, where T*M = 0 and no splitting is needed.
    """
    if lk.m:
        raise UnsupportedRegimeError("q_from_lk needs a point base")
    if lk.r0:
        raise GradedError("A_{-k+1} must vanish over a point")
    if (chart.k, chart.m, chart.n) != (lk.k, 0, lk.n) or lk.r1 != chart.n:
        raise GradedError("chart does not match the L_k layout")
    return lk_vector_field(lk, names={"v": "a", "w": "p"}, table=chart.table)


def compare_with_hamiltonian(lk: LkAlgebroidData, theta_H: GradedPoly,
                             chart: CotangentChart) -> Report:
    """Generator-by-generator comparison of ``q_from_lk`` with ``{theta_H, .}``."""
    Q1 = q_from_lk(lk, chart)
    Q2 = hamiltonian_vf(theta_H, chart, degree=1)
    rep = Report("correspondence")
    for name in chart.table.names:
        a, b = Q1.values.get(name, chart.table.zero()), Q2.values[name]
        rep.add(name, a == b, None if a == b else {"lk": str(a), "hamiltonian": str(b)})
    return rep


# ---------------------------------------------------------------------------
# L_2 semidirect product (brackets stated explicitly for k = 2)


@dataclass(frozen=True)
class L2AlgebroidData:
    """``A_0 = A + E_1``, ``A_{-1} = E_0`` with l_1, l_2, l_3 as tables."""

    alg: LieAlgebroidData
    rep: RepUTHData


def l2_semidirect(alg: LieAlgebroidData, rep: RepUTHData) -> L2AlgebroidData:
    if (rep.m, rep.n) != (alg.m, alg.n):
        raise GradedError("representation and algebroid ranks differ")
    return L2AlgebroidData(alg, rep)


def l2_brackets(data: L2AlgebroidData):
    """Callables ``(l1, l2_00, l2_0m1, l3)`` acting on (A-part, E_1-part) pairs."""
    alg, rep = data.alg, data.rep
    base = alg.base
    minus = base.constant(-1)

    def l1(xi):
        return _apply(rep.partial, xi, base)

    def l2(u, v):
        a, e = u
        b, e2 = v
        return (alg.bracket(a, b),
                _vadd(_connection(alg, rep.nabla1, a, e2),
                      _vscale(minus, _connection(alg, rep.nabla1, b, e))))

    def l2_mixed(u, xi):
        return _connection(alg, rep.nabla0, u[0], xi)

    def l3(u, v, w):
        (a, e), (b, e2), (c, e3) = u, v, w
        out = _vscale(minus, _K_apply(rep, a, b, e3, base))
        out = _vadd(out, _K_apply(rep, a, c, e2, base))
        return _vadd(out, _vscale(minus, _K_apply(rep, b, c, e, base)))

    return l1, l2, l2_mixed, l3
