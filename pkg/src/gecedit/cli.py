"""Command-line entry point exposing the library for scripting.

Subcommands: ``validate``, ``stats``, ``derive``, ``normalize``,
``encode-stg``, ``decode-stg``, ``eval``, ``serve``. Exit codes: 0 success,
1 domain error (bad data, failed validation), 2 usage error. All output is
byte-deterministic for identical inputs and flags; JSON is compact UTF-8
with a fixed key order.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus as corpus_mod
from .errors import GecEditError
from .metrics import EvalRow, evaluate_corpus
from .minedit import derive_operations, normalize_reference
from .stg import DEFAULT_T_MAX, decode_instance, encode_instance


def dumps(obj) -> str:
    """Canonical compact JSON used by every subcommand."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _read_pairs_tsv(path):
    """2-column TSV, UTF-8, no header: one (source, target) pair per line."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != 2:
                raise GecEditError(f"{path}:{lineno}: expected 2 tab-separated columns")
            pairs.append((cells[0], cells[1]))
    return pairs


def _cmd_validate(args, out):
    if args.lenient:
        instances, failures = corpus_mod.parse_corpus_lenient(args.corpus)
        for failure in failures:
            print(str(failure), file=out)
    else:
        instances, failures = corpus_mod.parse_corpus(args.corpus), []
    findings = corpus_mod.validate_corpus(instances)
    for finding in findings:
        print(str(finding), file=out)
    if failures or findings:
        return 1
    print(f"ok: {len(instances)} instances", file=out)
    return 0


def _cmd_stats(args, out):
    stats = corpus_mod.compute_stats(corpus_mod.parse_corpus(args.corpus), dedupe=args.dedupe)
    if args.format == "records":
        print(dumps(stats.as_record()), file=out)
    else:
        print(stats.as_text(), file=out)
    return 0


def _cmd_derive(args, out):
    if args.batch:
        pairs = _read_pairs_tsv(args.batch)
    elif args.src is not None and args.tgt is not None:
        pairs = [(args.src, args.tgt)]
    else:
        raise UsageError("derive requires --src and --tgt, or --batch")
    for src, tgt in pairs:
        reference = derive_operations(src, tgt)
        print(dumps(corpus_mod.reference_to_json(reference)), file=out)
    return 0


def _cmd_normalize(args, out):
    instances = corpus_mod.parse_corpus(args.corpus)
    normalized = []
    for instance in instances:
        references = tuple(
            normalize_reference(instance.sentence, r) for r in instance.references
        )
        normalized.append(
            type(instance)(
                id=instance.id,
                sentence=instance.sentence,
                error_flag=instance.error_flag,
                error_types=instance.error_types,
                references=references,
                external=instance.external,
            )
        )
    print(dumps(corpus_mod.serialize_corpus(normalized)), file=out)
    return 0


def _cmd_encode_stg(args, out):
    instances = corpus_mod.parse_corpus(args.corpus)
    lines = []
    for instance in instances:
        for k, reference in enumerate(instance.references):
            labels = encode_instance(instance.sentence, reference, t_max=args.t_max)
            rid = instance.id if len(instance.references) == 1 else f"{instance.id}#{k}"
            lines.append(dumps(corpus_mod.stg_labels_to_record(rid, labels)))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {len(lines)} records to {args.out}", file=out)
    else:
        out.write(text)
    return 0


def _cmd_decode_stg(args, out):
    with open(args.src, encoding="utf-8") as handle:
        sources = [line.rstrip("\n") for line in handle if line.strip()]
    with open(args.labels, encoding="utf-8") as handle:
        records = [json.loads(line) for line in handle if line.strip()]
    if len(sources) != len(records):
        raise GecEditError(
            f"{len(sources)} source lines but {len(records)} label records"
        )
    for src, record in zip(sources, records):
        _, labels = corpus_mod.stg_labels_from_record(record)
        print(decode_instance(src, labels), file=out)
    return 0


def _cmd_eval(args, out):
    instances = {i.id: i for i in corpus_mod.parse_corpus(args.corpus)}
    rows = []
    with open(args.hyp, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != 2:
                raise GecEditError(f"{args.hyp}:{lineno}: expected id<TAB>hypothesis")
            rid, hyp = cells
            if rid not in instances:
                raise GecEditError(f"{args.hyp}:{lineno}: unknown instance id {rid!r}")
            instance = instances[rid]
            rows.append(
                EvalRow(
                    source=instance.sentence,
                    hypothesis=hyp,
                    references=instance.references,
                    error_types=instance.error_types,
                )
            )
    report = evaluate_corpus(rows)
    print(f"rows       {report.rows}", file=out)
    print(f"EM         {100.0 * report.exact_match:.2f}", file=out)
    print(f"precision  {100.0 * report.precision:.2f}", file=out)
    print(f"recall     {100.0 * report.recall:.2f}", file=out)
    print(f"F0.5       {100.0 * report.f_half:.2f}", file=out)
    for name, em in report.per_type.items():
        print(f"EM[{name}]    {100.0 * em:.2f}", file=out)
    return 0


def _cmd_serve(args, out):
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data)
    print(f"serving on port {args.port}", file=out)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gecedit",
        description="Operation-oriented sentence correction toolkit.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="schema- and invariant-check a corpus file")
    p.add_argument("corpus")
    p.add_argument("--lenient", action="store_true", help="collect per-record failures")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("corpus")
    p.add_argument("--dedupe", action="store_true", help="drop duplicate references")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("derive", help="minimal operations for (source, target) pairs")
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--batch", help="2-column TSV of source/target pairs")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("normalize", help="rewrite every reference in minimal form")
    p.add_argument("corpus")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("encode-stg", help="corpus to pointer/tag/fill label records")
    p.add_argument("corpus")
    p.add_argument("--out", help="output path (line-delimited JSON); default stdout")
    p.add_argument("--t-max", type=int, default=DEFAULT_T_MAX, dest="t_max")
    p.set_defaults(func=_cmd_encode_stg)

    p = sub.add_parser("decode-stg", help="label records back to corrected sentences")
    p.add_argument("--src", required=True, help="one source sentence per line")
    p.add_argument("--labels", required=True, help="line-delimited label records")
    p.set_defaults(func=_cmd_decode_stg)

    p = sub.add_parser("eval", help="EM and span F0.5 of hypotheses against a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--hyp", required=True, help="TSV of instance id and hypothesis")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data", required=True, help="data directory (seed corpus + log)")
    p.set_defaults(func=_cmd_serve)

    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except (GecEditError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=err)
        return 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
