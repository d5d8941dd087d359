"""Acceptance criteria 1-12.

Each test records a one-line verdict in RESULTS; conftest prints them at the
end of the run.  ``python tests/test_acceptance.py`` runs them standalone.
"""

import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from higherdirac import catalog
from higherdirac import properties as P
from higherdirac.algebroid import build_theta, check_master
from higherdirac.graded import random_homogeneous
from higherdirac.symplectic import CotangentChart, poisson, twist

from oracles import d_A_oracle, master_oracle

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def poisson_axioms(k: int, count: int, rng: random.Random) -> tuple[int, int]:
    """Returns ``(failures, triples with a nonzero double bracket)``."""
    bad = nontrivial = 0
    for _ in range(count):
        chart = CotangentChart(k, rng.randint(0, 2), rng.randint(1, 4))
        degs = [rng.choice([0, 1, k - 1, k, k, k + 1, k + 1, k + 2]) for _ in range(3)]
        f, g, h = (random_homogeneous(chart.table, d, rng, terms=rng.randint(2, 4), x_power=2)
                   for d in degs)
        df, dg, _ = degs

        def br(u, v):
            return poisson(u, v, chart)

        skew = br(f, g) == br(g, f).scale(-_sign((df + k) * (dg + k)))
        leibniz = br(f, g * h) == br(f, g) * h + (g * br(f, h)).scale(_sign((df + k) * dg))
        lhs = br(f, br(g, h))
        jacobi = lhs == br(br(f, g), h) + br(g, br(f, h)).scale(_sign((df + k) * (dg + k)))
        nontrivial += bool(lhs)
        bad += not (skew and leibniz and jacobi)
    return bad, nontrivial


def test_criterion_01_poisson_axioms():
    rng = random.Random(101)
    parts, ok = [], True
    for k in (3, 4, 5):
        bad, nontrivial = poisson_axioms(k, 500, rng)
        ok &= bad == 0 and nontrivial > 0
        parts.append(f"k={k}: 500 triples, {bad} failures, {nontrivial} nonzero Jacobi sides")
    record(1, ok, "; ".join(parts))


def test_criterion_02_master_classification():
    inst = P.master_instances(random.Random(2))
    agree = 0
    seen = {"so3": 0, "heisenberg": 0, "abelian": 0, "broken": 0}
    closed = nonclosed = 0
    for i in inst:
        alg, k, H = i["alg"], i["k"], i["H"]
        chart = CotangentChart(k, alg.m, alg.n)
        got = check_master(build_theta(alg, H, chart=chart), chart).passed
        want = master_oracle(alg, H, chart)
        agree += got == want
        for key in seen:
            if i["name"].startswith(key) and "H=0" in i["name"]:
                seen[key] += 1
        if H:
            if d_A_oracle(H, alg, chart):
                nonclosed += 1
            else:
                closed += 1
    ok = (agree == len(inst) and len(inst) >= 20 and seen["broken"] >= 5
          and all(seen.values()) and closed and nonclosed)
    record(2, ok, f"{agree}/{len(inst)} verdicts match the sympy brute force; "
                  f"{seen['broken']} Jacobi violations; H closed {closed}, non-closed {nonclosed}")


def test_criterion_03_q3_consistency():
    inst = P.q3_instances(random.Random(3))
    with_pi = [i for i in inst if any(any(r) for r in i["pi"])]
    rep = P.q3_vs_master(with_pi)
    killing = any("Killing" in i["name"] and i["name"].startswith("so3,") for i in with_pi)
    ok = rep.passed and len(with_pi) >= 10 and killing
    record(3, ok, f"{len(with_pi)} instances with nonzero pairing; "
                  f"{rep.data['tally (q3 / master)']}")


def test_criterion_04_derived_vs_cartan():
    rep = P.bracket_two_path(random.Random(4), 200)
    ok = rep.passed and rep.data["pairs"] >= 200 and 0 < rep.data["pairs with H != 0"] < 200
    record(4, ok, f"{rep.data['pairs']} pairs over k=3,4,5, "
                  f"{rep.data['pairs with H != 0']} with H != 0; failing: {rep.failing()}")


def test_criterion_05_twist():
    rng = random.Random(5)
    rep = P.twist_suite(rng, 100)
    # gauge identity once more against the sympy differential
    bad = 0
    for _ in range(20):
        name, alg = catalog.random_rich_algebroid(rng, 3)
        k = rng.choice([3, 4, 5])
        chart = CotangentChart(k, alg.m, alg.n)
        B = catalog.random_form(chart, k, rng)
        H = catalog.random_form(chart, k + 1, rng)
        lhs = twist(B, build_theta(alg, H, chart=chart), chart)
        bad += lhs != build_theta(alg, H, chart=chart) + d_A_oracle(B, alg, chart)
    ok = rep.passed and bad == 0
    record(5, ok, f"twist suite on 100 pairs: {rep.final()}; "
                  f"gauge identity vs sympy d_A: {20 - bad}/20")


def test_criterion_06_round_trip():
    rep = P.round_trip_suite(random.Random(6), 100, k=4, max_n=6)
    record(6, rep.passed, f"100 random (E, Omega), k=4, rank <= 6: {rep.final()}; "
                          f"failing: {rep.failing()}")


def test_criterion_07_hagiwara():
    rep = P.hagiwara_suite(random.Random(7), 100)
    tally = rep.data["tally (lagrangian / hagiwara)"]
    both = tally.get("pass / pass", 0) and tally.get("fail / fail", 0)
    record(7, rep.passed and bool(both), f"100 instances: {tally}")


def test_criterion_08_higher_dirac():
    rep = P.higher_dirac_suite(random.Random(8), 60)
    tally = rep.data["tally (closure / ideal / pair)"]
    record(8, rep.passed and len(tally) > 1, f"60 subspaces: {tally}")


def test_criterion_09_twisted_nambu():
    rep = P.nambu_suite(random.Random(9), 60)
    vanishing = rep.data["tensors with a vanishing locus"]
    ok = rep.passed and vanishing > 0
    record(9, ok, f"60 tensors, {vanishing} with a vanishing locus: "
                  f"{rep.data['tally (int-nan / closure)']}")


def test_criterion_10_ruth_and_lk():
    rng = random.Random(10)
    ruth = P.ruth_suite(rng, 12)
    lk = P.twisted_lk_suite(P.twisted_lk_instances(rng))
    tally = lk.data["tally (closed / jacobi)"]
    both = tally.get("True / True", 0) and tally.get("False / False", 0)
    ok = ruth.passed and lk.passed and bool(both)
    record(10, ok, f"ruth on 12 algebroids: {ruth.final()} "
                   f"(clause sets {len(ruth.data['failing clause sets seen'])}); "
                   f"twisted coadjoint: {tally}")


def test_criterion_11_correspondence():
    rep = P.correspondence_suite(random.Random(11), 12)
    ok = rep.passed and rep.data["cases with H != 0"] > 0
    record(11, ok, f"12 Lie algebras, {rep.data['cases with H != 0']} with H != 0: {rep.final()}")


# criterion -> corpus documents reproducing it
CORPUS_MAP = {2: ["c02-master-vs-brute"], 3: ["c03-q3-vs-master"],
              4: ["c04-derived-vs-cartan"], 5: ["c05-twist"], 6: ["c06-round-trip"],
              7: ["c07-lagrangian-vs-hagiwara"], 8: ["c08-higher-dirac-vs-ideal"],
              9: ["c09-twisted-nambu"], 10: ["c10-ruth", "c10-twisted-coadjoint"],
              11: ["c11-correspondence"]}


def _cli(*args, cwd=ROOT):
    return subprocess.run([sys.executable, "-m", "higherdirac.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def corpus_runs():
    first = _cli("corpus", str(CORPUS), "--format", "json")
    second = _cli("corpus", str(CORPUS), "--format", "json", "--jobs", "2")
    return first, second


def test_criterion_12_cli(corpus_runs, tmp_path):
    first, second = corpus_runs
    problems = []
    if first.returncode != 0:
        problems.append(f"corpus exit {first.returncode}")
    docs = {d["document"]: d for d in json.loads(first.stdout)["documents"]}
    for n, names in CORPUS_MAP.items():
        for name in names:
            d = docs.get(name)
            if d is None or not d["ok"] or d["verdict"] != "pass":
                problems.append(f"criterion {n} document {name}")
    if first.stdout != second.stdout:
        problems.append("serial and parallel reports differ")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    if _cli("run", str(bad)).returncode != 2:
        problems.append("malformed document does not exit 2")
    broken = tmp_path / "broken.json"
    doc = json.loads((CORPUS / "master-broken-jacobi.json").read_text())
    del doc["expect"]
    broken.write_text(json.dumps(doc))
    if _cli("run", str(broken)).returncode != 1:
        problems.append("failing document does not exit 1")
    empty = tmp_path / "empty"
    empty.mkdir()
    if _cli("corpus", str(empty)).returncode != 0:
        problems.append("empty corpus does not exit 0")
    record(12, not problems, f"{len(docs)} documents, all ok, deterministic, exit codes 0/1/2"
           if not problems else "; ".join(problems))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
