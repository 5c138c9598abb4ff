"""Command-line entry point exposing every pipeline stage.

Exit codes: 0 success, 1 runtime failure, 2 usage error. All machine-readable
output is canonical JSON (sorted keys, fixed float precision) so identical
inputs and seeds produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .codec import Vocabulary, build_vocab
from .corpus import (
    audit,
    czn_normalize,
    czn_restore,
    default_superscript_table,
    detokenize,
    load_corpus,
    load_parallel,
    load_table,
    map_unsupported_punct,
    merge,
    save_corpus,
)
from .corpus.types import parse_pair_label, register_language
from .errors import CharmtError
from .metrics import ChrfParams, corpus_chrf
from .model.checkpoint import init_random, load_checkpoint
from .model.config import TrainConfig, TransformerShape, desk_config
from .decode import EnsembleSpec, translate_with_spec, load_scorers


def emit_report(obj, precision: int = 4) -> str:
    """Canonical JSON: stable key order, floats at fixed precision."""

    def normalize(value):
        if isinstance(value, float):
            return round(value, precision)
        if isinstance(value, dict):
            return {k: normalize(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [normalize(v) for v in value]
        return value

    return json.dumps(normalize(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _print_report(obj, out: str | None) -> None:
    text = emit_report(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _read_lines(path: str) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _write_lines(path: str, lines: list[str]) -> None:
    Path(path).write_text("".join(l + "\n" for l in lines), encoding="utf-8")


def _register_pair(label: str) -> tuple[str, str]:
    src, _, tgt = label.partition("-")
    register_language(src)
    register_language(tgt)
    return parse_pair_label(label)


def _cmd_ingest(args) -> int:
    pair = _register_pair(args.pair)
    corpus = load_parallel(args.src, args.tgt, pair, args.provenance)
    save_corpus(corpus, args.prefix)
    _print_report({"pair": args.pair, "count": len(corpus), "prefix": str(args.prefix)}, args.out)
    return 0


def _cmd_normalize(args) -> int:
    lines = _read_lines(args.input)
    report = {}
    if args.detok:
        lines = [detokenize(l) for l in lines]
    if args.punct_map:
        mapping = load_table(args.punct_map)
        vocab = Vocabulary.load(args.vocab) if args.vocab else set("".join(lines))
        replaced: dict[str, int] = {}
        unmapped: dict[str, int] = {}
        out_lines = []
        for line in lines:
            new, rep = map_unsupported_punct(line, vocab, mapping)
            out_lines.append(new)
            for ch, n in rep.replaced.items():
                replaced[ch] = replaced.get(ch, 0) + n
            for ch, n in rep.unmapped.items():
                unmapped[ch] = unmapped.get(ch, 0) + n
        lines = out_lines
        report["replaced"] = dict(sorted(replaced.items()))
        report["unmapped"] = dict(sorted(unmapped.items()))
    table = load_table(args.czn_table) if args.czn_table else default_superscript_table()
    if args.czn == "normalize":
        lines = [czn_normalize(l, table) for l in lines]
    elif args.czn == "restore":
        lines = [czn_restore(l, table) for l in lines]
    _write_lines(args.output, lines)
    _print_report({"lines": len(lines), **report}, None)
    return 0


def _cmd_audit(args) -> int:
    corpora = [load_corpus(p) for p in args.corpus]
    _print_report(audit(corpora).to_json_obj(), args.out)
    return 0


def _cmd_merge(args) -> int:
    corpora = [load_corpus(p) for p in args.corpus]
    merged, manifest = merge(corpora, dedup=args.dedup)
    save_corpus(merged, args.output)
    _print_report(manifest.to_json_obj(), args.out)
    return 0


def _cmd_vocab(args) -> int:
    corpora = [load_corpus(p) for p in args.corpus]
    vocab = build_vocab(corpora, min_count=args.min_count)
    vocab.save(args.output)
    _print_report({"size": len(vocab), "fingerprint": vocab.fingerprint()}, None)
    return 0


def _cmd_score(args) -> int:
    params = ChrfParams(
        char_order=args.char_order,
        word_order=args.word_order,
        beta=args.beta,
        remove_whitespace=not args.keep_whitespace,
        lowercase=args.lowercase,
        effective_order=not args.no_effective_order,
    )
    hyps = _read_lines(args.hyp)
    refs = _read_lines(args.ref)
    report = corpus_chrf(hyps, refs, params, jobs=args.jobs)
    _print_report(report.to_json_obj(), args.out)
    return 0


def _cmd_translate(args) -> int:
    spec = EnsembleSpec.load(args.spec)
    register_language(args.tgt_lang)
    segments = _read_lines(args.input)
    result = translate_with_spec(spec, segments, args.tgt_lang, jobs=args.jobs)
    _write_lines(args.output, result.hypotheses)
    _print_report(
        {"segments": len(segments), "errors": [list(e) for e in result.errors]}, args.out
    )
    return 0


def _load_train_job(config_path: str, seed: int | None):
    job = json.loads(Path(config_path).read_text(encoding="utf-8"))
    corpora = {}
    for label, entry in job["corpora"].items():
        pair = _register_pair(label)
        if "prefix" in entry:
            corpora[label] = load_corpus(entry["prefix"])
        else:
            corpora[label] = load_parallel(
                entry["src"], entry["tgt"], pair, entry.get("provenance", "user")
            )
    dev_sets = {
        lang: (_read_lines(entry["src"]), _read_lines(entry["ref"]))
        for lang, entry in job.get("dev", {}).items()
    }
    for lang in dev_sets:
        register_language(lang)
    if job.get("desk"):
        config, profile = desk_config(**job["desk"])
    else:
        config, profile = TrainConfig.from_json_obj(job.get("train", {})), None
    if seed is not None:
        from dataclasses import replace

        config = replace(config, seed=seed)
    shape = TransformerShape.from_json_obj(job.get("shape", {}))
    init = load_checkpoint(job["init"]) if job.get("init") else None
    return corpora, dev_sets, config, shape, init, profile


def _cmd_train(args) -> int:
    from .pipeline import train_run

    corpora, dev_sets, config, shape, init, profile = _load_train_job(
        args.config, args.seed
    )
    meta = {"profile": profile} if profile else {}
    record, checkpoints = train_run(
        config, corpora, dev_sets, args.out, init=init, shape=shape, meta=meta
    )
    _print_report(
        {
            "run_id": record.run_id,
            "snapshots": [s.to_json_obj() for s in record.snapshots],
            "checkpoints": [str(p) for p in checkpoints],
        },
        None,
    )
    return 0


def _cmd_backtranslate(args) -> int:
    from .pipeline import backtranslate_expand

    spec = EnsembleSpec.load(args.spec)
    register_language(args.mono_lang)
    base = load_corpus(args.base)
    result = backtranslate_expand(
        _read_lines(args.mono),
        args.mono_lang,
        load_scorers(spec),
        base,
        reverse_checkpoint=args.reverse_id,
        beam_size=spec.beam_size,
        max_len=spec.max_len,
        jobs=args.jobs,
    )
    save_corpus(result.corpus, args.output)
    _print_report(
        {
            "manifest": result.manifest.to_json_obj(),
            "synthetic": len(result.synthetic),
            "reverse_checkpoint": result.reverse_checkpoint,
            "errors": [list(e) for e in result.errors],
        },
        args.out,
    )
    return 0


def _cmd_select(args) -> int:
    from .pipeline import load_run, pick_ensembles, select_best_mean, select_best_per_language

    runs = [load_run(d) for d in args.run]
    if args.strategy == "best_mean":
        report = select_best_mean(runs[0])
    elif args.strategy == "best_per_language":
        report = select_best_per_language(runs)
    else:
        baseline = select_best_per_language(runs)
        candidates = [EnsembleSpec.load(p) for p in args.candidate]
        dev_sets = {}
        for item in args.dev:
            lang, src, ref = item.split(":")
            register_language(lang)
            dev_sets[lang] = (_read_lines(src), _read_lines(ref))
        report = pick_ensembles(candidates, baseline, dev_sets, jobs=args.jobs)
    _print_report(report.to_json_obj(), args.out)
    return 0


def _cmd_zeroshot(args) -> int:
    from .pipeline import zero_shot_eval

    spec = EnsembleSpec.load(args.spec)
    columns = {}
    for item in args.column:
        lang, path = item.split(":", 1)
        register_language(lang)
        columns[lang] = _read_lines(path)
    directions = []
    for d in args.direction:
        src, _, tgt = d.partition("-")
        directions.append((src, tgt))
    report, _ = zero_shot_eval(
        load_scorers(spec),
        columns,
        directions,
        label=args.label,
        beam_size=spec.beam_size,
        max_len=spec.max_len,
        jobs=args.jobs,
    )
    _print_report(report.to_json_obj(), args.out)
    return 0


def _cmd_ablate(args) -> int:
    from .pipeline import AblationToggle, ablation_run

    job = json.loads(Path(args.config).read_text(encoding="utf-8"))
    corpora, dev_sets, config, shape, init, profile = _load_train_job(
        args.config, args.seed
    )
    toggles = [
        AblationToggle(
            name=t["name"],
            single_language=t.get("single_language"),
            exclude_provenance=tuple(t.get("exclude_provenance", ())),
            random_init=t.get("random_init", False),
            freeze_scope=t.get("freeze_scope"),
        )
        for t in job["toggles"]
    ]
    _, table = ablation_run(
        config, toggles, corpora, dev_sets, args.out, base_init=init, shape=shape
    )
    _print_report(table, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charmt",
        description="Character-level multilingual MT toolkit",
    )
    parser.add_argument("--version", action="version", version=f"charmt {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for scoring/decoding")
    common.add_argument("--out", default=None, help="also write the JSON report here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="load aligned files into a corpus")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--pair", required=True, help="language pair, e.g. es-aym")
    p.add_argument("--provenance", default="user")
    p.add_argument("--out-prefix", dest="out", required=True)
    p.set_defaults(func=_cmd_ingest, out=None)
    p.add_argument("--corpus-out", dest="out_prefix")
    # keep a single clear spelling: --out-prefix maps to args.out for ingest
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("normalize", parents=[common], help="text normalization passes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-file", dest="output", required=True)
    p.add_argument("--detokenize", dest="detok", action="store_true")
    p.add_argument("--punct-map", default=None, help="two-column TSV mapping table")
    p.add_argument("--vocab", default=None, help="vocabulary JSON for OOV detection")
    p.add_argument("--czn", choices=["normalize", "restore"], default=None)
    p.add_argument("--czn-table", default=None, help="two-column TSV superscript table")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("audit", parents=[common], help="duplicate and overlap report")
    p.add_argument("--corpus", action="append", required=True, help="corpus prefix (repeatable)")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("merge", parents=[common], help="merge corpora, emit manifest")
    p.add_argument("--corpus", action="append", required=True)
    p.add_argument("--out-prefix", dest="output", required=True)
    p.add_argument("--dedup", action="store_true")
    p.set_defaults(func=_cmd_merge)

    p = sub.add_parser("vocab", parents=[common], help="build a character vocabulary")
    p.add_argument("--corpus", action="append", required=True)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--out-file", dest="output", required=True)
    p.set_defaults(func=_cmd_vocab)

    p = sub.add_parser("score", parents=[common], help="chrF score with signature")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--char-order", type=int, default=6)
    p.add_argument("--word-order", type=int, default=0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--keep-whitespace", action="store_true")
    p.add_argument("--no-effective-order", action="store_true")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("translate", parents=[common], help="decode a file with an ensemble")
    p.add_argument("--spec", required=True, help="EnsembleSpec JSON")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-file", dest="output", required=True)
    p.add_argument("--tgt-lang", required=True)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("train", parents=[common], help="run training from a job config")
    p.add_argument("--config", required=True, help="training job JSON")
    p.add_argument("--out-dir", dest="out", required=True, help="run directory")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("backtranslate", parents=[common], help="expand with synthetic pairs")
    p.add_argument("--mono", required=True, help="monolingual text file")
    p.add_argument("--mono-lang", required=True)
    p.add_argument("--spec", required=True, help="reverse-model EnsembleSpec JSON")
    p.add_argument("--base", required=True, help="base corpus prefix")
    p.add_argument("--out-prefix", dest="output", required=True)
    p.add_argument("--reverse-id", default="backtrans-1")
    p.set_defaults(func=_cmd_backtranslate)

    p = sub.add_parser("select", parents=[common], help="checkpoint/ensemble selection")
    p.add_argument("--run", action="append", required=True, help="run directory (repeatable)")
    p.add_argument(
        "--strategy",
        choices=["best_mean", "best_per_language", "ensemble"],
        default="best_mean",
    )
    p.add_argument("--candidate", action="append", default=[], help="EnsembleSpec JSON (repeatable)")
    p.add_argument("--dev", action="append", default=[], help="lang:src:ref dev files")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("zeroshot", parents=[common], help="multiparallel zero-shot evaluation")
    p.add_argument("--spec", required=True)
    p.add_argument("--column", action="append", required=True, help="lang:path (repeatable)")
    p.add_argument("--direction", action="append", required=True, help="src-tgt (repeatable)")
    p.add_argument("--label", default="model")
    p.set_defaults(func=_cmd_zeroshot)

    p = sub.add_parser("ablate", parents=[common], help="toggle-based ablation runs")
    p.add_argument("--config", required=True, help="job JSON with a 'toggles' list")
    p.add_argument("--out-dir", dest="out", required=True)
    p.set_defaults(func=_cmd_ablate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CharmtError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
