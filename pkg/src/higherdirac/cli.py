"""Command line front end.

    higherdirac run DOC [--format human|json] [--out PATH] [--seed N]
    higherdirac corpus DIR [--jobs N] [--format human|json] [--out PATH] [--seed N]

Exit codes: 0 when every document meets its expectation, 1 when a check
fails, 2 on unreadable or schema-invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .documents import REPORT_TAG, Outcome, run_path

SUFFIXES = (".json", ".toml")


def _emit(text: str, data, fmt: str, out: str | None) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)
    if out:
        Path(out).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def cmd_run(args) -> int:
    outcome = run_path(args.document, seed=args.seed)
    fmt = args.format or (outcome.options or {}).get("format", "human")
    _emit(outcome.render(), outcome.to_dict(), fmt, args.out)
    return outcome.exit_code


def _run_one(item):
    path, seed = item
    return run_path(path, seed=seed)


def run_corpus(directory: Path, jobs: int = 1, seed: int | None = None) -> list[Outcome]:
    paths = sorted(p for p in directory.iterdir() if p.suffix in SUFFIXES and p.is_file())
    items = [(p, seed) for p in paths]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, items))
    return [_run_one(i) for i in items]


def summary_table(outcomes: list[Outcome]) -> str:
    if not outcomes:
        return "no documents"
    width = max(len(o.name) for o in outcomes)
    kw = max(len(o.kind) for o in outcomes)
    lines = [f"{'document'.ljust(width)}  {'kind'.ljust(kw)}  {'verdict':15}  {'expect':15}  status"]
    for o in outcomes:
        status = "error" if o.error else ("ok" if o.ok else "FAILED")
        lines.append(f"{o.name.ljust(width)}  {o.kind.ljust(kw)}  {o.verdict:15}  "
                     f"{(o.expect or 'pass'):15}  {status}")
    bad = sum(1 for o in outcomes if not o.ok)
    lines.append(f"{len(outcomes)} documents, {len(outcomes) - bad} ok, {bad} not ok")
    return "\n".join(lines)


def cmd_corpus(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"not a directory: {directory}", file=sys.stderr)
        return 2
    outcomes = run_corpus(directory, args.jobs, args.seed)
    data = {"schema": REPORT_TAG, "documents": [o.to_dict() for o in outcomes]}
    text = summary_table(outcomes)
    failed = [o for o in outcomes if not o.ok]
    fmt = args.format or "human"
    if failed and fmt == "human":
        text += "\n\n" + "\n\n".join(o.render() for o in failed)
    _emit(text, data, fmt, args.out)
    return max((o.exit_code for o in outcomes), default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higherdirac",
                                     description="Verify identities on T*[k]A[1].")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json"],
                        help="output format (default: the document's option, else human)")
    common.add_argument("--out", help="also write the JSON report here")
    common.add_argument("--seed", type=int, help="override the seed of randomized suites")
    run = sub.add_parser("run", parents=[common], help="run one problem document")
    run.add_argument("document")
    run.set_defaults(func=cmd_run)
    corpus = sub.add_parser("corpus", parents=[common], help="run every document in a directory")
    corpus.add_argument("directory")
    corpus.add_argument("--jobs", type=int, default=1)
    corpus.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
