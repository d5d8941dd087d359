"""Problem documents: loading, schema validation and dispatch to the checks.

A document is JSON (or TOML) with a top-level ``schema`` tag, a ``kind`` and a
``payload``.  Payloads either describe one instance or name a randomized
suite (``{"suite": ..., "seed": ..., "count": ...}``).  Rationals are written
as ``"p/q"`` strings and polynomials in the chart's generator names.
"""

from __future__ import annotations

import json
import random
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from . import catalog, properties
from .algebroid import (LieAlgebroidData, PairingData, build_theta, cartan_bracket,
                        check_master, check_q3_conditions, d_A, derived_bracket)
from .dirac import (NambuTensor, PairSpec, SubbundleSpec, check_coisotropic,
                    check_higher_dirac, check_lagrangian, check_nambu_dirac_hagiwara,
                    check_pair_q_lagrangian, check_quadruple, check_twisted_nambu,
                    check_wade_w2, from_pair, graph_of_nambu, ideal_coisotropic,
                    is_decomposable, same_pair, same_subbundle, to_pair)
from .errors import GradedError
from .graded import parse_poly, to_string
from .report import Report
from .ruth import (ConnectionData, RepUTHData, adjoint_rep, check_lk_jacobi, check_ruth,
                   coadjoint_rep, compare_with_hamiltonian, semidirect,
                   twisted_coadjoint_semidirect)
from .symplectic import CotangentChart, twist

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_TAG = "higherdirac/1"
REPORT_TAG = "higherdirac-report/1"


class DocumentError(Exception):
    """Unreadable or schema-invalid input (exit code 2)."""


def _schema() -> dict:
    text = resources.files("higherdirac").joinpath("schemas/problem-1.json").read_text()
    return json.loads(text)


_VALIDATOR = None


def validate(doc: Any) -> None:
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(_schema())
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise DocumentError(f"schema violation at {where}: {e.message}")


def load(path: str | Path) -> dict:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        if path.suffix == ".toml":
            doc = tomllib.loads(raw.decode())
        else:
            doc = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise DocumentError(f"{path}: malformed document: {exc}") from exc
    validate(doc)
    return doc


# ---------------------------------------------------------------------------
# payload pieces


def algebroid(obj: dict) -> LieAlgebroidData:
    lie = catalog.LIE_ALGEBRAS
    if "lie_algebra" in obj:
        return LieAlgebroidData.lie_algebra(lie[obj["lie_algebra"]]())
    if "tangent" in obj:
        return catalog.tangent(obj["tangent"])
    if "tangent_plus" in obj:
        spec = obj["tangent_plus"]
        return catalog.tangent_plus(spec["m"], lie[spec["lie_algebra"]]())
    if "action" in obj:
        t = lie[obj["action"]]()
        return catalog.action(t, catalog.adjoint_matrices(t))
    if "bundle" in obj:
        spec = obj["bundle"]
        return catalog.bundle_of_algebras(lie[spec["lie_algebra"]](), str(spec["factor"]), 1)
    structure = obj["structure"]
    n = obj.get("n", len(structure))
    m = obj.get("m", 0)
    return LieAlgebroidData.from_arrays(m, n, obj.get("anchor"), structure)


def _poly(value, chart: CotangentChart):
    if value is None:
        return None
    return parse_poly(str(value), chart.table)


def _connection(payload, alg) -> ConnectionData | None:
    if "connection" not in payload:
        return None
    return ConnectionData.from_arrays(alg.m, alg.n, payload["connection"])


def _rep(payload, alg) -> RepUTHData:
    spec = payload["rep"]
    nabla = _connection(payload, alg)
    if spec == "adjoint":
        rep = adjoint_rep(alg, nabla)
    elif spec in ("coadjoint", "twisted-coadjoint"):
        rep = coadjoint_rep(alg, nabla)
    elif spec == "zero":
        rep = RepUTHData.zero(alg.m, alg.n)
    else:
        rep = RepUTHData.from_arrays(alg.m, alg.n, spec["r0"], spec["r1"], spec.get("partial"),
                                     spec.get("nabla0"), spec.get("nabla1"), spec.get("K"))
    if "perturb" in payload:
        rep = _perturb(rep, payload["perturb"])
    return rep


def _perturb(rep: RepUTHData, spec: dict) -> RepUTHData:
    tables = {"partial": rep.partial, "nabla0": rep.nabla0, "nabla1": rep.nabla1, "K": rep.K}

    def thaw(t):
        return [thaw(x) for x in t] if isinstance(t, tuple) else t

    data = {k: thaw(v) for k, v in tables.items()}
    base = rep.partial[0][0].table if rep.partial and rep.partial[0] else None
    idx = spec["index"]
    target = data[spec["table"]]
    try:
        for i in idx[:-1]:
            target = target[i]
        cell = target[idx[-1]]
    except (IndexError, TypeError) as exc:
        raise DocumentError(f"perturbation index {idx} out of range") from exc
    delta = parse_poly(str(spec["value"]), cell.table if base is None else base)
    target[idx[-1]] = cell + delta
    if spec["table"] == "K":
        a, b = idx[0], idx[1]
        other = data["K"][b][a][idx[2]]
        other[idx[3]] = other[idx[3]] - delta
    return RepUTHData.from_arrays(rep.m, rep.n, rep.r0, rep.r1, data["partial"],
                                  data["nabla0"], data["nabla1"], data["K"])


def _pair(payload) -> PairSpec:
    spec = payload["pair"]
    om = {tuple(I): c for I, c in spec.get("Omega", [])}
    return PairSpec(payload["k"], payload["n"], spec["E"], om)


def _subbundle(payload) -> SubbundleSpec:
    if "pair" in payload:
        return from_pair(_pair(payload))
    if "rows" not in payload:
        raise DocumentError("dirac-check needs rows or pair")
    return SubbundleSpec.from_coefficients(payload["k"], payload["n"], payload["rows"],
                                           payload.get("m", 0), payload.get("points", ()))


def _nambu(payload) -> NambuTensor:
    comps = {tuple(idx): c for idx, c in payload["components"]}
    n = payload.get("n")
    if n is None:
        n = max((max(idx) for idx in comps), default=-1) + 1
    return NambuTensor.from_components(payload["k"], payload.get("m", 0), n, comps,
                                       payload.get("points", ()))


# ---------------------------------------------------------------------------
# single-instance runners


def _run_master(p):
    alg = algebroid(p["algebroid"])
    chart = CotangentChart(p["k"], alg.m, alg.n)
    H = _poly(p.get("H"), chart)
    pi = PairingData.from_arrays(alg.m, p["pi"]) if "pi" in p else None
    rep = check_master(build_theta(alg, H, pi, chart), chart)
    if p.get("brute_force"):
        if pi is not None:
            raise DocumentError("brute force comparison is only defined without a pairing")
        rep.data["brute_force"] = properties.brute_force_master(alg, H, chart)
    return rep


def _run_q3(p):
    alg = algebroid(p["algebroid"])
    chart = CotangentChart(3, alg.m, alg.n)
    return check_q3_conditions(alg, PairingData.from_arrays(alg.m, p["pi"]),
                               _poly(p.get("H"), chart), chart)


def _run_bracket(p):
    alg = algebroid(p["algebroid"])
    chart = CotangentChart(p["k"], alg.m, alg.n)
    H = _poly(p.get("H"), chart)
    e1, e2 = _poly(p["e1"], chart), _poly(p["e2"], chart)
    lhs = derived_bracket(e1, e2, build_theta(alg, H, chart=chart), chart)
    rhs = cartan_bracket(e1, e2, alg, H, chart)
    rep = Report("bracket")
    rep.add("derived = cartan", lhs == rhs,
            None if lhs == rhs else {"derived": to_string(lhs), "cartan": to_string(rhs)})
    rep.data["bracket"] = to_string(lhs)
    return rep


def _run_twist(p):
    alg = algebroid(p["algebroid"])
    chart = CotangentChart(p["k"], alg.m, alg.n)
    H = _poly(p.get("H"), chart)
    B = _poly(p["B"], chart)
    th = build_theta(alg, H, chart=chart)
    lhs = twist(B, th, chart)
    rhs = th + d_A(B, alg, chart)
    rep = Report("twist")
    rep.add("twist(B, theta_H) = theta_H + d_A B", lhs == rhs,
            None if lhs == rhs else {"twisted": to_string(lhs), "expected": to_string(rhs)})
    rep.data["twisted"] = to_string(lhs)
    return rep


def _run_dirac(p):
    check = p["check"]
    if check == "round-trip":
        pair = _pair(p)
        L = from_pair(pair)
        q = to_pair(L)
        rep = Report("round-trip")
        rep.add("from_pair is lagrangian", check_lagrangian(L).passed)
        rep.add("to_pair(from_pair(E, Omega)) = (E, Omega)", same_pair(pair, q))
        rep.add("from_pair(to_pair(L)) = L", same_subbundle(from_pair(q), L))
        return rep
    if check == "wade-w2":
        return check_wade_w2(_pair(p))
    if check == "q-lagrangian-pair":
        alg = algebroid(p["algebroid"])
        chart = CotangentChart(p["k"], alg.m, alg.n)
        return check_pair_q_lagrangian(_pair(p), alg, _poly(p.get("H"), chart))
    L = _subbundle(p)
    if check == "lagrangian":
        return check_lagrangian(L)
    if check == "hagiwara":
        return check_nambu_dirac_hagiwara(L)
    alg = algebroid(p["algebroid"])
    return check_higher_dirac(L, alg, _poly(p.get("H"), L.chart))


def _run_nambu(p):
    Pi = _nambu(p)
    check = p.get("check", "twisted-nambu")
    if check == "decomposable":
        return is_decomposable(Pi)
    if check == "graph-lagrangian":
        return check_lagrangian(graph_of_nambu(Pi))
    alg = algebroid(p["algebroid"]) if "algebroid" in p else \
        LieAlgebroidData.from_arrays(Pi.m, Pi.n)
    chart = CotangentChart(Pi.k, alg.m, alg.n)
    return check_twisted_nambu(Pi, alg, _poly(p.get("H"), chart), Pi.k)


def _run_quadruple(p):
    spec = SubbundleSpec.from_coefficients(p["k"], p["n"], p["rows"], D=p.get("D"),
                                           K=p.get("K"))
    return {"quadruple": check_quadruple, "coisotropic": check_coisotropic,
            "ideal-coisotropic": ideal_coisotropic}[p["check"]](spec)


def _run_ruth(p):
    alg = algebroid(p["algebroid"])
    return check_ruth(_rep(p, alg), alg)


def _run_lk(p):
    alg = algebroid(p["algebroid"])
    k = p["k"]
    if p["rep"] == "twisted-coadjoint":
        chart = CotangentChart(k, alg.m, alg.n)
        lk = twisted_coadjoint_semidirect(alg, _connection(p, alg), _poly(p.get("H"), chart), k)
    else:
        lk = semidirect(alg, _rep(p, alg), k)
    return check_lk_jacobi(lk)


def _run_correspondence(p):
    alg = algebroid(p["algebroid"])
    k = p["k"]
    chart = CotangentChart(k, alg.m, alg.n)
    H = _poly(p.get("H"), chart)
    lk = twisted_coadjoint_semidirect(alg, None, H, k)
    return compare_with_hamiltonian(lk, build_theta(alg, H, chart=chart), chart)


SINGLE = {
    "master-check": _run_master,
    "q3-check": _run_q3,
    "bracket": _run_bracket,
    "twist": _run_twist,
    "dirac-check": _run_dirac,
    "nambu-check": _run_nambu,
    "quadruple-check": _run_quadruple,
    "ruth-check": _run_ruth,
    "lk-check": _run_lk,
    "correspondence-check": _run_correspondence,
}

# suite name -> (kind, runner(rng, count), default count)
SUITES = {
    "master-vs-brute": ("master-check",
                        lambda rng, c: properties.master_vs_brute(properties.master_instances(rng)),
                        None),
    "q3-vs-master": ("q3-check",
                     lambda rng, c: properties.q3_vs_master(properties.q3_instances(rng)), None),
    "derived-vs-cartan": ("bracket", properties.bracket_two_path, 200),
    "twist": ("twist", properties.twist_suite, 100),
    "round-trip": ("dirac-check", properties.round_trip_suite, 100),
    "lagrangian-vs-hagiwara": ("dirac-check", properties.hagiwara_suite, 100),
    "higher-dirac-vs-ideal": ("dirac-check", properties.higher_dirac_suite, 50),
    "twisted-nambu": ("nambu-check", properties.nambu_suite, 50),
    "ruth": ("ruth-check", properties.ruth_suite, 12),
    "twisted-coadjoint": ("lk-check",
                          lambda rng, c: properties.twisted_lk_suite(
                              properties.twisted_lk_instances(rng)), None),
    "correspondence": ("correspondence-check", properties.correspondence_suite, 12),
}


@dataclass
class Outcome:
    name: str
    kind: str
    report: Report | None
    expect: str | None = None
    error: str | None = None
    options: dict | None = None

    @property
    def verdict(self) -> str:
        return "error" if self.report is None else self.report.final()

    @property
    def ok(self) -> bool:
        if self.report is None:
            return False
        return self.verdict == (self.expect or "pass")

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        out = {"schema": REPORT_TAG, "document": self.name, "kind": self.kind,
               "verdict": self.verdict, "ok": self.ok}
        if self.expect is not None:
            out["expect"] = self.expect
        if self.error is not None:
            out["error"] = self.error
        if self.report is not None:
            out["report"] = _jsonable(self.report.to_dict())
        return out

    def render(self) -> str:
        head = f"{self.name} [{self.kind}]"
        if self.error is not None:
            return f"{head}: ERROR\n  {self.error}"
        tail = f" (expected {self.expect})" if self.expect else ""
        lines = [f"{head}: {'OK' if self.ok else 'NOT OK'}{tail}", self.report.render()]
        for key, value in self.report.data.items():
            lines.append(f"  {key}: {json.dumps(_jsonable(value), ensure_ascii=False)}")
        return "\n".join(lines)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def run_document(doc: dict, name: str = "<document>", seed: int | None = None) -> Outcome:
    """Validate and run one document; errors become an ``error`` outcome."""
    kind = doc.get("kind", "?") if isinstance(doc, dict) else "?"
    try:
        validate(doc)
        name = doc.get("name", name)
        payload = doc["payload"]
        if "suite" in payload:
            suite = payload["suite"]
            if suite not in SUITES:
                raise DocumentError(f"unknown suite {suite!r}")
            suite_kind, runner, default = SUITES[suite]
            if suite_kind != kind:
                raise DocumentError(f"suite {suite!r} belongs to kind {suite_kind!r}")
            rng = random.Random(seed if seed is not None else payload.get("seed", 0))
            report = runner(rng, payload.get("count", default))
        else:
            report = SINGLE[kind](payload)
    except (DocumentError, GradedError, KeyError, IndexError, TypeError, ValueError) as exc:
        return Outcome(name, kind, None, error=f"{type(exc).__name__}: {exc}")
    return Outcome(name, kind, report, expect=doc.get("expect"), options=doc.get("options"))


def run_path(path: str | Path, seed: int | None = None) -> Outcome:
    path = Path(path)
    try:
        doc = load(path)
    except DocumentError as exc:
        return Outcome(path.name, "?", None, error=str(exc))
    return run_document(doc, name=doc.get("name", path.stem), seed=seed)
