"""Command-line interface.

Three commands over CoNLL-U or JSONL corpora:

* ``augment``: run a pipeline config over a corpus;
* ``validate``: report invariant findings per document;
* ``stats``: print a corpus summary.

Exit codes: 0 on success, 1 for parse or validation errors, 2 for
resource errors. Output files are written via a temp file and an atomic
rename, so a failing run never leaves a partial file; stdout output is
fully buffered before printing. Runs are deterministic: the same inputs,
pipeline, and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus_io import emit_conllu, emit_jsonl, parse_conllu, parse_jsonl
from .doc import validate
from .errors import AugmentError, InvalidParamError, ResourceError
from .pipeline import pipeline_from_path, run_corpus
from .resources import ResourceDir

__all__ = ["main", "entrypoint"]

_FORMATS = ("conllu", "jsonl")


def _infer_format(path: str | None, flag: str | None, role: str) -> str:
    if flag:
        return flag
    if path:
        suffix = Path(path).suffix.lower()
        if suffix == ".conllu":
            return "conllu"
        if suffix == ".jsonl":
            return "jsonl"
    raise InvalidParamError(
        f"cannot infer {role} format; pass --{role}-format conllu|jsonl"
    )


def _read_input(args) -> tuple[list, str]:
    fmt = _infer_format(args.input, args.input_format, "input")
    text = Path(args.input).read_text(encoding="utf-8")
    do_validate = not getattr(args, "_defer_validation", False)
    if fmt == "conllu":
        docs = parse_conllu(text, do_validate=do_validate)
    else:
        docs = parse_jsonl(text, do_validate=do_validate)
    return docs, fmt


def _emit(docs, fmt: str) -> str:
    return emit_conllu(docs) if fmt == "conllu" else emit_jsonl(docs)


def _write_atomic(path: str, data: str) -> None:
    target = Path(path)
    tmp = target.with_name(target.name + f".tmp.{os.getpid()}")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, target)
    finally:
        if tmp.exists():
            tmp.unlink()


def _deliver(data: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(data)
        sys.stdout.flush()
    else:
        _write_atomic(path, data)


def _output_format(args, in_fmt: str) -> str:
    if args.output_format:
        return args.output_format
    if args.output:
        suffix = Path(args.output).suffix.lower()
        if suffix == ".conllu":
            return "conllu"
        if suffix == ".jsonl":
            return "jsonl"
    return in_fmt


def cmd_augment(args) -> int:
    resources = ResourceDir(args.resources)
    node = pipeline_from_path(args.pipeline, resources)
    docs, in_fmt = _read_input(args)
    out_fmt = _output_format(args, in_fmt)
    out_docs, stats = run_corpus(node, docs, seed=args.seed, jobs=args.jobs)
    payload = _emit(out_docs, out_fmt)
    stats_payload = None
    if args.stats:
        stats_payload = (
            json.dumps(stats.to_dict(), ensure_ascii=False, separators=(",", ":"))
            + "\n"
        )
    _deliver(payload, args.output)
    if stats_payload is not None:
        _write_atomic(args.stats, stats_payload)
    return 0


def cmd_validate(args) -> int:
    args._defer_validation = True
    docs, _ = _read_input(args)
    lines = []
    bad = 0
    for i, doc in enumerate(docs):
        report = validate(doc)
        if not report.is_valid:
            bad += 1
        for f in report.findings:
            lines.append(f"doc {i}: {f}")
    if bad:
        lines.append(f"FAIL {bad} of {len(docs)} docs have errors")
        sys.stdout.write("\n".join(lines) + "\n")
        return 1
    if lines:
        lines.append(f"OK {len(docs)} docs (warnings above)")
    else:
        lines.append(f"OK {len(docs)} docs")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_stats(args) -> int:
    docs, _ = _read_input(args)
    ents: dict[str, int] = {}
    for doc in docs:
        for sp in doc.ents:
            ents[sp.label] = ents.get(sp.label, 0) + 1
    summary = {
        "docs": len(docs),
        "sentences": sum(len(d.sents) for d in docs),
        "tokens": sum(len(d.tokens) for d in docs),
        "ents": dict(sorted(ents.items())),
    }
    payload = json.dumps(summary, ensure_ascii=False, separators=(",", ":")) + "\n"
    _deliver(payload, args.output)
    return 0


def _add_io_flags(sub, output: bool = True) -> None:
    sub.add_argument("--input", required=True, help="input corpus file")
    sub.add_argument(
        "--input-format",
        choices=_FORMATS,
        help="corpus format (inferred from the file extension when omitted)",
    )
    if output:
        sub.add_argument("--output", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docaug",
        description="Structured text augmentation with consistent annotations.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    aug = subs.add_parser("augment", help="run a pipeline over a corpus")
    _add_io_flags(aug)
    aug.add_argument(
        "--output-format",
        choices=_FORMATS,
        help="output format (default: the input format)",
    )
    aug.add_argument("--pipeline", required=True, help="pipeline config JSON file")
    aug.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    aug.add_argument("--resources", help="directory for resource files")
    aug.add_argument("--stats", help="also write run statistics JSON to this file")
    aug.add_argument(
        "--jobs", type=int, default=1, help="worker threads (output is identical)"
    )
    aug.set_defaults(func=cmd_augment)

    val = subs.add_parser("validate", help="check every document's invariants")
    _add_io_flags(val, output=False)
    val.set_defaults(func=cmd_validate)

    st = subs.add_parser("stats", help="print a corpus summary")
    _add_io_flags(st)
    st.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except AugmentError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IO_ERROR: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
