"""Randomized two-path comparisons, shared by the CLI corpus and the tests.

Every suite takes a ``random.Random`` and returns a :class:`Report` whose
clauses pass when the two computations agree.  Verdict tallies go into
``report.data`` so that both directions of an equivalence are visible.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

from . import catalog, linalg
from .algebroid import (LieAlgebroidData, PairingData, build_theta, cartan_bracket,
                        check_master, check_q3_conditions, d_A, derived_bracket)
from .dirac import (NambuTensor, PairSpec, PointModel, SubbundleSpec, check_higher_dirac,
                    check_lagrangian, check_nambu_dirac_hagiwara, check_pair_q_lagrangian,
                    check_twisted_nambu, extend_omega, from_pair, ideal_preserved,
                    multivector_table, same_pair, same_subbundle, to_pair)
from .report import Report
from .ruth import (ConnectionData, RepUTHData, adjoint_rep, check_lk_jacobi, check_ruth,
                   coadjoint_rep, compare_with_hamiltonian, failing_clauses, semidirect,
                   twisted_coadjoint_semidirect, _anchor_vec, _vf_bracket)
from .symplectic import CotangentChart, poisson, twist


def _tally(counter: Counter) -> dict:
    return {" / ".join(map(str, k)): v for k, v in sorted(counter.items(), key=str)}


# ---------------------------------------------------------------------------
# master equation


def brute_force_master(alg: LieAlgebroidData, H, chart: CotangentChart) -> bool:
    """Jacobiator, anchor morphism and ``d_A H`` computed without the bracket."""
    n = alg.n
    E = [alg.basis(a) for a in range(n)]
    for a, b, c in itertools.combinations(range(n), 3):
        if any(alg.jacobiator(E[a], E[b], E[c])):
            return False
    for a, b in itertools.combinations(range(n), 2):
        lhs = _anchor_vec(alg, alg.bracket(E[a], E[b]))
        rhs = _vf_bracket(_anchor_vec(alg, E[a]), _anchor_vec(alg, E[b]), alg.m)
        if lhs != rhs:
            return False
    if H is None or not H:
        return True
    return not d_A(H, alg, chart)


def master_instances(rng: random.Random) -> list[dict]:
    """Named Lie algebras, algebroids with a base and Jacobi violations, each
    with H = 0, an exact H and a random H."""
    out = []
    algs = [(name, LieAlgebroidData.lie_algebra(f())) for name, f in catalog.LIE_ALGEBRAS.items()]
    algs += [("T R^2", catalog.tangent(2)),
             ("action so3", catalog.action(catalog.so3(), catalog.adjoint_matrices(catalog.so3()))),
             ("T R^2 + so3", catalog.tangent_plus(2, catalog.so3())),
             ("T R + so3 + affine", catalog.tangent_plus(
                 1, catalog.direct_sum(catalog.so3(), catalog.affine_line()))),
             ("so3 bundle over R", catalog.bundle_of_algebras(
                 catalog.direct_sum(catalog.so3(), catalog.abelian(2)), "x1", 1))]
    for i in range(6):
        algs.append((f"broken {i}", LieAlgebroidData.lie_algebra(
            catalog.broken_jacobi(rng.choice([3, 4, 5]), rng))))
    for name, alg in algs:
        k = 3
        chart = CotangentChart(k, alg.m, alg.n)
        B = catalog.random_form(chart, k, rng)
        # prefer a non-closed H when one exists
        for _ in range(20):
            H = catalog.random_form(chart, k + 1, rng)
            if H and d_A(H, alg, chart):
                break
        Hs = [("H=0", None), ("H exact", d_A(B, alg, chart)), ("H random", H)]
        for hname, H in Hs:
            out.append({"name": f"{name}, {hname}", "alg": alg, "k": k, "H": H})
    return out


def master_vs_brute(instances) -> Report:
    rep = Report("master-vs-brute-force")
    tally = Counter()
    for inst in instances:
        alg, k, H = inst["alg"], inst["k"], inst["H"]
        chart = CotangentChart(k, alg.m, alg.n)
        got = check_master(build_theta(alg, H, chart=chart), chart).passed
        want = brute_force_master(alg, H, chart)
        tally[(got, want)] += 1
        rep.add(inst["name"], got == want, {"master": got, "brute_force": want})
    rep.data["tally (master / brute)"] = _tally(tally)
    return rep


# ---------------------------------------------------------------------------
# k = 3 with a pairing


def _extension_rank4():
    t = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for c, a, b in ((1, 0, 1), (2, 0, 2), (3, 1, 2)):
        t[c][a][b], t[c][b][a] = 1, -1
    return t


def q3_instances(rng: random.Random) -> list[dict]:
    so3 = LieAlgebroidData.lie_algebra(catalog.so3())
    heis = LieAlgebroidData.lie_algebra(catalog.heisenberg())
    ext = LieAlgebroidData.lie_algebra(_extension_rank4())
    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    killing = [[-2 * int(i == j) for j in range(3)] for i in range(3)]
    center = [[0, 0, 0], [0, 0, 0], [0, 0, 1]]
    so3r = LieAlgebroidData.lie_algebra(catalog.direct_sum(catalog.so3(), catalog.abelian(1)))
    killing4 = [[-2 * int(i == j < 3) for j in range(4)] for i in range(4)]
    heisr = LieAlgebroidData.lie_algebra(catalog.direct_sum(catalog.heisenberg(),
                                                            catalog.abelian(1)))
    center4 = [[int(i == j == 2) for j in range(4)] for i in range(4)]
    e44 = [[int(i == j == 3) for j in range(4)] for i in range(4)]
    out = [
        ("so3, Killing pairing, H=0", so3, killing, None),
        ("so3, identity pairing, H=0", so3, ident, None),
        ("so3+R, Killing pairing, H=alpha1234", so3r, killing4, "alpha1*alpha2*alpha3*alpha4"),
        ("so3, non-invariant pairing", so3, [[1, 0, 0], [0, 2, 0], [0, 0, 0]], None),
        ("heisenberg, central pairing", heis, center, None),
        ("heisenberg+R, central pairing, H=alpha1234", heisr, center4,
         "alpha1*alpha2*alpha3*alpha4"),
        ("heisenberg, identity pairing", heis, ident, None),
        ("extension, H compensates Jacobi", ext, e44, "2*alpha1*alpha2*alpha3*alpha4"),
        ("extension, wrong H", ext, e44, "alpha1*alpha2*alpha3*alpha4"),
        ("extension, H=0", ext, e44, None),
    ]
    inst = []
    for name, alg, pi, H in out:
        inst.append({"name": name, "alg": alg, "pi": pi, "H": H})
    for i in range(6):
        n = rng.choice([3, 4])
        t = catalog.broken_jacobi(n, rng) if rng.random() < 0.5 else \
            catalog.random_lie_algebra(rng, n)[1]
        alg = LieAlgebroidData.lie_algebra(t)
        pi = [[0] * alg.n for _ in range(alg.n)]
        for a in range(alg.n):
            for b in range(a, alg.n):
                pi[a][b] = pi[b][a] = rng.choice([0, 0, 1, -1])
        chart = CotangentChart(3, 0, alg.n)
        H = catalog.random_form(chart, 4, rng) if alg.n >= 4 else None
        inst.append({"name": f"random {i}", "alg": alg, "pi": pi, "H": H})
    return inst


def q3_vs_master(instances) -> Report:
    rep = Report("q3-vs-master")
    tally = Counter()
    for inst in instances:
        alg = inst["alg"]
        chart = CotangentChart(3, alg.m, alg.n)
        pi = PairingData.from_arrays(alg.m, inst["pi"])
        got = check_q3_conditions(alg, pi, inst["H"], chart).passed
        want = check_master(build_theta(alg, inst["H"], pi, chart), chart).passed
        tally[(got, want)] += 1
        rep.add(inst["name"], got == want, {"q3": got, "master": want})
    rep.data["tally (q3 / master)"] = _tally(tally)
    return rep


# ---------------------------------------------------------------------------
# brackets and twists


def bracket_two_path(rng: random.Random, count: int = 200, ks=(3, 4, 5)) -> Report:
    rep = Report("derived-vs-cartan")
    per_k = Counter()
    bad: dict[int, dict] = {}
    nonzero = 0
    for i in range(count):
        k = ks[i % len(ks)]
        if i % 2:
            _, alg = catalog.random_rich_algebroid(rng, k + 1)
        else:
            _, alg = catalog.random_algebroid(rng)
        chart = CotangentChart(k, alg.m, alg.n)
        H = catalog.random_form(chart, k + 1, rng) if i % 2 else None
        nonzero += bool(H)
        e1 = catalog.random_section(chart, rng)
        e2 = catalog.random_section(chart, rng)
        lhs = derived_bracket(e1, e2, build_theta(alg, H, chart=chart), chart)
        rhs = cartan_bracket(e1, e2, alg, H, chart)
        per_k[k] += 1
        if lhs != rhs and k not in bad:
            bad[k] = {"e1": str(e1), "e2": str(e2), "derived": str(lhs), "cartan": str(rhs)}
    for k in ks:
        rep.add(f"k={k}: {per_k[k]} pairs", k not in bad, bad.get(k))
    rep.data["pairs"] = count
    rep.data["pairs with H != 0"] = nonzero
    return rep


def twist_suite(rng: random.Random, count: int = 100, ks=(3, 4, 5)) -> Report:
    rep = Report("twist")
    bad_theta = bad_poisson = None
    for i in range(count):
        k = ks[i % len(ks)]
        if i % 2:
            _, alg = catalog.random_rich_algebroid(rng, k + 1)
        else:
            _, alg = catalog.random_algebroid(rng)
        chart = CotangentChart(k, alg.m, alg.n)
        H = catalog.random_form(chart, k + 1, rng) if i % 2 else None
        B = catalog.random_form(chart, k, rng)
        th = build_theta(alg, H, chart=chart)
        lhs = twist(B, th, chart)
        rhs = th + d_A(B, alg, chart)
        if lhs != rhs and bad_theta is None:
            bad_theta = {"B": str(B), "twisted": str(lhs), "expected": str(rhs)}
        f = _random_function(chart, rng)
        g = _random_function(chart, rng)
        left = poisson(twist(B, f, chart), twist(B, g, chart), chart)
        right = twist(B, poisson(f, g, chart), chart)
        if left != right and bad_poisson is None:
            bad_poisson = {"f": str(f), "g": str(g), "B": str(B)}
    rep.add(f"twist(B, theta_H) = theta_H + d_A B ({count} cases)", bad_theta is None, bad_theta)
    rep.add(f"tau^B preserves the bracket ({count} pairs)", bad_poisson is None, bad_poisson)
    return rep


def _random_function(chart: CotangentChart, rng: random.Random):
    from .graded import random_homogeneous
    degree = rng.randint(0, chart.k + 1)
    return random_homogeneous(chart.table, degree, rng, terms=2, max_coeff=2)


# ---------------------------------------------------------------------------
# lagrangian subbundles


def random_pair(rng: random.Random, k: int, n: int, density: float = 1.0) -> PairSpec:
    r = rng.randint(0, n)
    E = linalg.row_basis([[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(r)], n)
    om = {I: (rng.randint(-2, 2) if rng.random() < density else 0)
          for I in itertools.combinations(range(len(E)), k)}
    return PairSpec(k, n, E, om)


def round_trip_suite(rng: random.Random, count: int = 100, k: int = 4, max_n: int = 6) -> Report:
    rep = Report("lagrangian-round-trip")
    bad = {}
    ranks = Counter()
    for _ in range(count):
        n = rng.randint(2, max_n)
        p = random_pair(rng, k, n)
        ranks[p.rank] += 1
        L = from_pair(p)
        if not check_lagrangian(L).passed:
            bad.setdefault("from_pair is lagrangian", {"pair": p.to_dict()})
        q = to_pair(L)
        if not same_pair(p, q):
            bad.setdefault("to_pair(from_pair(E, Omega)) = (E, Omega)", {"pair": p.to_dict()})
        if not same_subbundle(from_pair(q), L):
            bad.setdefault("from_pair(to_pair(L)) = L", {"pair": p.to_dict()})
    for name in ("from_pair is lagrangian", "to_pair(from_pair(E, Omega)) = (E, Omega)",
                 "from_pair(to_pair(L)) = L"):
        rep.add(name, name not in bad, bad.get(name))
    rep.data["instances"] = count
    rep.data["ranks of E"] = dict(sorted(ranks.items()))
    return rep


def _perturb_point(rng, L: SubbundleSpec) -> SubbundleSpec:
    M = L.model
    k = L.k
    vecs = list(L.vectors)
    mode = rng.choice(["keep", "drop", "add", "mix"])
    if mode == "drop" and vecs:
        vecs.pop(rng.randrange(len(vecs)))
    elif mode == "add":
        vecs.append(M.poly([Fraction(rng.randint(-1, 1)) for _ in range(M.dim(k - 1))], k - 1))
    elif mode == "mix" and vecs:
        i = rng.randrange(len(vecs))
        vecs[i] = vecs[i] + M.poly([Fraction(rng.randint(-1, 1)) for _ in range(M.dim(k - 1))],
                                   k - 1)
    return SubbundleSpec(k, L.n, tuple(v for v in vecs if v))


def _sampled_instance(rng: random.Random) -> SubbundleSpec:
    """Subbundles over R^1 sampled at three points, lagrangian or not."""
    from .dirac import graph_of_nambu
    k = 3
    n = rng.choice([3, 4])
    choice = rng.choice(["nambu", "nambu-const", "graph", "broken"])
    pts = ((0,), (1,), (2,))
    if choice in ("nambu", "nambu-const"):
        coeff = "x1" if choice == "nambu" else rng.choice([1, 2])
        comps = {(0, 1, 2): coeff}
        return graph_of_nambu(NambuTensor.from_components(k, 1, n, comps, points=pts))
    chart = CotangentChart(k, 1, n)
    rows = []
    for _ in range(n + (1 if choice == "broken" else 0)):
        row = [rng.choice([0, 1, -1, "x1"]) for _ in range(n)]
        row += [rng.choice([0, 0, 1, "x1"]) for _ in range(len(list(
            itertools.combinations(range(n), k - 1))))]
        rows.append(row)
    if choice == "graph":
        from .dirac import graph_of_form
        om = catalog.random_form(chart, k, rng)
        return graph_of_form(om, chart, points=pts)
    try:
        L = SubbundleSpec.from_coefficients(k, n, rows, m=1, points=pts)
        check_lagrangian(L)
        return L
    except Exception:
        return graph_of_nambu(NambuTensor.from_components(k, 1, n, {(0, 1, 2): 1}, points=pts))


_MATCH = {("pass", "pass"), ("fail", "fail"), ("weak-lagrangian", "irregular")}


def hagiwara_suite(rng: random.Random, count: int = 100) -> Report:
    rep = Report("lagrangian-vs-hagiwara")
    tally = Counter()
    bad = None
    for i in range(count):
        if i % 4 == 3:
            L = _sampled_instance(rng)
        else:
            k = rng.choice([3, 4])
            n = rng.randint(3, 5)
            L = _perturb_point(rng, from_pair(random_pair(rng, k, n)))
        a = check_lagrangian(L).final()
        b = check_nambu_dirac_hagiwara(L).final()
        tally[(a, b)] += 1
        if (a, b) not in _MATCH and bad is None:
            bad = {"lagrangian": a, "hagiwara": b, "regime": L.regime}
    rep.add(f"verdicts agree on {count} instances", bad is None, bad)
    rep.data["tally (lagrangian / hagiwara)"] = _tally(tally)
    both = {a for a, _ in tally}
    rep.add("both directions exercised", {"pass", "fail"} <= both,
            None if {"pass", "fail"} <= both else sorted(both))
    return rep


def _close_under_bracket(alg, E, n):
    base = alg.base
    for _ in range(n):
        Eb = linalg.row_basis(E, n)
        new = list(Eb)
        for a, b in itertools.combinations(Eb, 2):
            br = alg.bracket([base.constant(c) for c in a], [base.constant(c) for c in b])
            new.append([c.constant_term for c in br])
        E = new
    return linalg.row_basis(E, n)


def higher_dirac_suite(rng: random.Random, count: int = 60) -> Report:
    """Bracket closure vs ideal preservation vs the pair criterion."""
    rep = Report("higher-dirac-vs-ideal")
    tally = Counter()
    bad = None
    for i in range(count):
        _, tab = catalog.random_lie_algebra(rng, 5)
        alg = LieAlgebroidData.lie_algebra(tab)
        n = alg.n
        k = rng.choice([3, 4])
        M = PointModel(k, n)
        ch = M.chart
        r = rng.randint(0, n)
        E = [[Fraction(rng.randint(-1, 1)) for _ in range(n)] for _ in range(r)]
        if E and rng.random() < 0.6:
            E = _close_under_bracket(alg, E, n)
        E = linalg.row_basis(E, n)
        p = PairSpec(k, n, E, {I: rng.choice([0, 0, 1, -1])
                               for I in itertools.combinations(range(len(E)), k)})
        L = from_pair(p)
        om = extend_omega(p, M)
        mode = ["zero", "exact", "random"][i % 3]
        H = {"zero": None, "exact": d_A(om, alg, ch) if om else None,
             "random": catalog.random_form(ch, k + 1, rng)}[mode]
        hd = check_higher_dirac(L, alg, H).final()
        ip = ideal_preserved(L, build_theta(alg, H, None, ch)).final()
        pq = check_pair_q_lagrangian(p, alg, H).final()
        tally[(hd, ip, pq)] += 1
        if not hd == ip == pq and bad is None:
            bad = {"closure": hd, "ideal": ip, "pair": pq, "pair_data": p.to_dict()}
    rep.add(f"closure = ideal preservation = pair criterion on {count} subspaces",
            bad is None, bad)
    rep.data["tally (closure / ideal / pair)"] = _tally(tally)
    seen = {t[0] for t in tally}
    rep.add("both verdicts exercised", {"pass", "fail"} <= seen, sorted(seen))
    return rep


def _random_decomposable(rng, alg, k):
    n = alg.n
    tbl = multivector_table(alg.m, n)
    while True:
        P = tbl.constant(rng.choice([1, 2]))
        if alg.m and rng.random() < 0.5:
            P = tbl.gen("x1") * P
        for _ in range(k):
            P = P * sum((tbl.gen(f"e{j + 1}").scale(rng.randint(-1, 1)) for j in range(n)),
                        tbl.zero())
        if P:
            return P


def nambu_suite(rng: random.Random, count: int = 60) -> Report:
    """Equation-level verdict vs graph closure, including perturbed tensors."""
    rep = Report("twisted-nambu-two-path")
    tally = Counter()
    bad = None
    vanishing = 0
    done = 0
    while done < count:
        if done % 2:
            _, alg = catalog.random_algebroid(rng)
        else:
            _, alg = catalog.random_rich_algebroid(rng, 4)
        if alg.n < 3:
            continue
        k = 3 if alg.n < 5 else rng.choice([3, 4])
        chart = CotangentChart(k, alg.m, alg.n)
        P = _random_decomposable(rng, alg, k)
        pts = ((0,) * alg.m, (1,) * alg.m, (2,) * alg.m) if alg.m else ()
        Pi = NambuTensor(k, alg.m, alg.n, P, points=pts)
        H = catalog.random_form(chart, k + 1, rng) if rng.random() < 0.5 else None
        r = check_twisted_nambu(Pi, alg, H, k)
        if r.final() == "precondition":
            continue
        done += 1
        if alg.m and "x1" in str(P):
            vanishing += 1
        a, b = r.clause("int-nan").passed, r.clause("graph-closure").passed
        tally[(a, b)] += 1
        if a != b and bad is None:
            bad = {"Pi": str(P), "H": str(H)}
    rep.add(f"int-nan verdict = graph closure verdict on {count} tensors", bad is None, bad)
    rep.data["tally (int-nan / closure)"] = _tally(tally)
    rep.data["tensors with a vanishing locus"] = vanishing
    seen = {a for a, _ in tally}
    rep.add("both verdicts exercised", seen == {True, False}, sorted(seen))
    return rep


# ---------------------------------------------------------------------------
# representations up to homotopy and L_k-algebroids


def random_connection(rng: random.Random, alg) -> ConnectionData:
    m, n = alg.m, alg.n
    g = [[[rng.choice([0, 0, 0, 1, -1, "x1"]) for _ in range(n)] for _ in range(n)]
         for _ in range(m)]
    return ConnectionData.from_arrays(m, n, g)


RUTH_TO_LK = {"d∘∇0=∇1∘d": 2, "F∇0=K∘d": 3, "F∇1=d∘K": 4, "d∇K=0": 5}


def perturb_rep(rng: random.Random, rep: RepUTHData) -> tuple[RepUTHData, str]:
    x = rep.partial[0][0].table.gen("x1") if rep.m else None
    v = rng.choice([1, -1] + ([x] if x is not None else []))
    d = dict(partial=[list(r) for r in rep.partial],
             nabla0=[[list(r) for r in M] for M in rep.nabla0],
             nabla1=[[list(r) for r in M] for M in rep.nabla1],
             K=[[[list(r) for r in M] for M in row] for row in rep.K])
    which = rng.choice(["partial", "nabla0", "nabla1", "K"])
    if which == "partial" and rep.r0 and rep.r1:
        d["partial"][rng.randrange(rep.r1)][rng.randrange(rep.r0)] += v
    elif which in ("nabla0", "nabla1"):
        r = rep.r0 if which == "nabla0" else rep.r1
        if r:
            d[which][rng.randrange(rep.n)][rng.randrange(r)][rng.randrange(r)] += v
    elif which == "K" and rep.n > 1 and rep.r0 and rep.r1:
        a, b = rng.sample(range(rep.n), 2)
        i, j = rng.randrange(rep.r0), rng.randrange(rep.r1)
        d["K"][a][b][i][j] += v
        d["K"][b][a][i][j] -= v
    return RepUTHData.from_arrays(rep.m, rep.n, rep.r0, rep.r1, **d), which


def ruth_suite(rng: random.Random, count: int = 12) -> Report:
    rep = Report("ruth")
    bad_con = bad_cor = None
    tally = Counter()
    for _ in range(count):
        name, alg = catalog.random_algebroid(rng)
        nab = random_connection(rng, alg)
        for ctor in (adjoint_rep, coadjoint_rep):
            R = ctor(alg, nab)
            r = check_ruth(R, alg)
            if not r.passed and bad_con is None:
                bad_con = {"algebroid": name, "constructor": ctor.__name__,
                           "failing": r.failing()}
            for P in (R, perturb_rep(rng, R)[0]):
                want = {RUTH_TO_LK[c] for c in check_ruth(P, alg).failing()}
                got = failing_clauses(check_lk_jacobi(semidirect(alg, P, rng.choice([4, 5]))))
                tally[tuple(sorted(want))] += 1
                if want != got and bad_cor is None:
                    bad_cor = {"algebroid": name, "ruth": sorted(want), "lk": sorted(got)}
    rep.add(f"adjoint and coadjoint pass on {count} algebroids", bad_con is None, bad_con)
    rep.add("semidirect clauses = representation clauses", bad_cor is None, bad_cor)
    rep.data["failing clause sets seen"] = _tally(tally)
    return rep


def twisted_lk_instances(rng: random.Random) -> list[dict]:
    so3 = catalog.so3()
    algs = [(catalog.tangent_plus(1, catalog.direct_sum(so3, catalog.affine_line())), 4),
            (catalog.tangent_plus(2, catalog.direct_sum(so3, catalog.abelian(1))), 4),
            (catalog.tangent_plus(1, catalog.direct_sum(
                so3, catalog.direct_sum(catalog.affine_line(), catalog.abelian(1)))), 5),
            (LieAlgebroidData.lie_algebra(catalog.direct_sum(so3, catalog.direct_sum(
                catalog.affine_line(), catalog.abelian(1)))), 4),
            (catalog.bundle_of_algebras(catalog.direct_sum(so3, catalog.direct_sum(
                catalog.affine_line(), catalog.abelian(1))), "x1", 1), 4)]
    out = []
    for alg, k in algs:
        chart = CotangentChart(k, alg.m, alg.n)
        nab = random_connection(rng, alg)
        for mode in ("closed", "random"):
            for _ in range(50):
                if mode == "closed":
                    H = d_A(catalog.random_form(chart, k, rng, terms=2), alg, chart)
                else:
                    H = catalog.random_form(chart, k + 1, rng, terms=2)
                if H and (mode == "closed") != bool(d_A(H, alg, chart)):
                    break
            out.append({"alg": alg, "k": k, "nabla": nab, "H": H, "mode": mode})
    return out


def twisted_lk_suite(instances) -> Report:
    rep = Report("twisted-coadjoint")
    tally = Counter()
    shapes = Counter()
    bad_iff = bad_last = None
    for inst in instances:
        alg, k, H = inst["alg"], inst["k"], inst["H"]
        chart = CotangentChart(k, alg.m, alg.n)
        closed = not d_A(H, alg, chart)
        lk = twisted_coadjoint_semidirect(alg, inst["nabla"], H, k)
        failing = failing_clauses(check_lk_jacobi(lk))
        tally[(closed, not failing)] += 1
        if closed != (not failing) and bad_iff is None:
            bad_iff = {"closed": closed, "failing": sorted(failing)}
        if not closed and not (6 in failing and failing <= {6, 7}) and bad_last is None:
            bad_last = {"failing": sorted(failing)}
        if not closed:
            shapes[tuple(sorted(failing))] += 1
    rep.add("Jacobi holds iff d_A H = 0", bad_iff is None, bad_iff)
    rep.add("non-closed H fails the l_k clause and nothing outside the last two",
            bad_last is None, bad_last)
    rep.data["failing sets for non-closed H"] = _tally(shapes)
    rep.data["tally (closed / jacobi)"] = _tally(tally)
    return rep


def correspondence_suite(rng: random.Random, count: int = 12) -> Report:
    rep = Report("point-base-correspondence")
    fixed = [("so3", catalog.so3()), ("so3+affine", catalog.direct_sum(catalog.so3(),
                                                                       catalog.affine_line())),
             ("abelian5", catalog.abelian(5))]
    cases = []
    for i in range(count):
        if i < len(fixed):
            name, t = fixed[i]
        else:
            name, t = catalog.random_lie_algebra(rng, 5)
            while len(t) < 6:
                extra, e = catalog.random_lie_algebra(rng, 3)
                name, t = f"{name}+{extra}", catalog.direct_sum(t, e)
        cases.append((name, t))
    bad = None
    nontrivial = 0
    for i, (name, t) in enumerate(cases):
        alg = LieAlgebroidData.lie_algebra(t)
        k = [3, 4, 5][i % 3]
        chart = CotangentChart(k, 0, alg.n)
        H = catalog.random_form(chart, k + 1, rng) if i % 4 and alg.n > k else None
        nontrivial += bool(H)
        lk = twisted_coadjoint_semidirect(alg, None, H, k)
        r = compare_with_hamiltonian(lk, build_theta(alg, H, chart=chart), chart)
        if not r.passed and bad is None:
            bad = {"algebra": name, "k": k, "failing": r.failing()}
    rep.add(f"q_from_lk = {{theta_H, .}} on {count} Lie algebras", bad is None, bad)
    rep.data["cases with H != 0"] = nontrivial
    return rep
