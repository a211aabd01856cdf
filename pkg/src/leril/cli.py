"""Command-line surface for the toolkit.

Machine output (parsed documents, exports, converted notation) goes to
stdout; diagnostics and progress go to stderr so pipelines stay clean.
Exit codes: 0 clean, 1 warnings under --strict, 2 errors, 3 usage or I/O
failure. The LERIL_TAGSET environment variable names a default tagset
file; --tagset overrides it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import anncorra, corpus_store, dict_model, shabdasutra, transfer, translexgram
from .diagnostics import (
    Diagnostic,
    LerilError,
    Severity,
    error,
    info,
    warning,
    worst_severity,
)

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_ERRORS = 2
EXIT_USAGE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # route usage problems to exit code 3
        raise _UsageError(message)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _dump_json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _load_registry(args) -> anncorra.TagRegistry:
    path = getattr(args, "tagset", None) or os.environ.get("LERIL_TAGSET")
    if path:
        return anncorra.load_tagset(_read_text(path))
    return anncorra.default_registry()


def _print(text: str) -> None:
    if text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------- dict


def _cmd_dict_parse(args):
    dictionary, diags = dict_model.parse_dictionary(_read_text(args.file))
    if args.format == "interchange":
        _print(_dump_json(dict_model.to_interchange(dictionary)))
    else:
        _print(dict_model.emit_dictionary(dictionary))
    return diags


def _cmd_dict_emit(args):
    dictionary, diags = dict_model.parse_dictionary(_read_text(args.file))
    _print(dict_model.emit_dictionary(dictionary))
    return diags


def _cmd_dict_lookup(args):
    dictionary, diags = dict_model.parse_dictionary(_read_text(args.file))
    entries = dict_model.lookup(dictionary, args.headword, args.pos)
    result = dict_model.Dictionary.from_entries(entries)
    if args.format == "interchange":
        _print(_dump_json(dict_model.to_interchange(result)))
    else:
        _print(dict_model.emit_dictionary(result))
    if not entries:
        diags.append(info(f"no entry for {args.headword!r}"))
    return diags


def _cmd_dict_filter(args):
    dictionary, diags = dict_model.parse_dictionary(_read_text(args.file))
    words = {
        line.strip()
        for line in _read_text(args.wordlist).splitlines()
        if line.strip() and not line.strip().startswith("#")
    }
    _print(dict_model.emit_dictionary(dict_model.frequency_filter(dictionary, words)))
    return diags


# ---------------------------------------------------------------- tlg


def _cmd_tlg_parse(args):
    records, diags = translexgram.parse_tlg(_read_text(args.file))
    if args.format == "interchange":
        _print(_dump_json(translexgram.to_interchange(records)))
    else:
        _print(translexgram.emit_tlg(records))
    return diags


def _cmd_tlg_validate(args):
    records, diags = translexgram.parse_tlg(_read_text(args.file))
    policy = "strict" if args.strict else "lenient"
    for record in records:
        diags.extend(translexgram.validate_tlg(record, policy))
    return diags


def _cmd_tlg_seed(args):
    dictionary, diags = dict_model.parse_dictionary(_read_text(args.dict))
    if args.headword is not None:
        entries = dict_model.lookup(dictionary, args.headword)
        if not entries:
            diags.append(error(f"headword {args.headword!r} not found"))
            return diags
    else:
        entries = list(dictionary.entries)
    records = []
    for entry in entries:
        record, seed_diags = translexgram.seed_from_dictionary(entry)
        records.append(record)
        diags.extend(seed_diags)
    _print(translexgram.emit_tlg(records))
    return diags


def _cmd_tlg_emit(args):
    records, diags = translexgram.parse_tlg(_read_text(args.file))
    _print(translexgram.emit_tlg(records))
    return diags


def _cmd_tlg_corpus(args):
    records, diags = translexgram.parse_tlg(_read_text(args.file))
    pairs = translexgram.extract_parallel_corpus(records)
    _print(translexgram.pairs_to_tsv(pairs))
    return diags


# ---------------------------------------------------------------- anncorra


def _with_line(diags, lineno):
    return [
        Diagnostic(d.severity, d.message, lineno, d.column, d.field)
        if d.line is None
        else d
        for d in diags
    ]


def _cmd_anncorra_parse(args):
    registry = _load_registry(args)
    diags: list[Diagnostic] = []
    sentences = []
    for sentence_id, lineno, line in anncorra.iter_sentences(_read_text(args.file)):
        tree, tree_diags = anncorra.parse_sentence(line, registry)
        diags.extend(_with_line(tree_diags, lineno))
        if tree is not None:
            sentences.append(
                {"id": sentence_id, "line": lineno, "tree": anncorra.to_interchange(tree)}
            )
    _print(_dump_json({"format": "anncorra", "sentences": sentences}))
    return diags


def _cmd_anncorra_check(args):
    registry = _load_registry(args)
    diags: list[Diagnostic] = []
    for _sentence_id, lineno, line in anncorra.iter_sentences(_read_text(args.file)):
        tree, tree_diags = anncorra.parse_sentence(line, registry)
        diags.extend(_with_line(tree_diags, lineno))
        if tree is not None:
            diags.extend(_with_line(anncorra.validate_tree(tree), lineno))
    return diags


def _cmd_anncorra_convert(args):
    registry = _load_registry(args)
    diags: list[Diagnostic] = []
    out_lines = []
    for lineno, raw in enumerate(_read_text(args.file).splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            out_lines.append(raw)
            continue
        tree, tree_diags = anncorra.parse_sentence(stripped, registry)
        diags.extend(_with_line(tree_diags, lineno))
        if tree is None:
            continue
        if args.minimize:
            out_lines.append(anncorra.emit_minimal(tree, registry))
        else:
            out_lines.append(anncorra.emit_explicit(tree))
    _print("\n".join(out_lines))
    return diags


# ---------------------------------------------------------------- sutra


def _cmd_sutra_parse_formula(args):
    formulas, diags = shabdasutra.parse_formula_file(_read_text(args.file))
    doc = {"formulas": [shabdasutra.formula_to_interchange(f) for f in formulas]}
    _print(_dump_json(doc))
    return diags


def _cmd_sutra_parse_thread(args):
    threads, diags = shabdasutra.parse_thread_file(_read_text(args.file))
    doc = {"threads": [shabdasutra.thread_to_interchange(t) for t in threads]}
    _print(_dump_json(doc))
    return diags


def _cmd_sutra_check(args):
    formulas, diags = shabdasutra.parse_formula_file(_read_text(args.formulas))
    threads, thread_diags = shabdasutra.parse_thread_file(_read_text(args.threads))
    diags.extend(thread_diags)
    aliases = None
    if args.alias:
        aliases = shabdasutra.load_aliases(_read_text(args.alias))
    if len(formulas) != len(threads):
        diags.append(
            error(
                f"cannot pair {len(formulas)} formulas with {len(threads)} threads"
            )
        )
        return diags
    for formula, thread in zip(formulas, threads):
        diags.extend(shabdasutra.check_consistency(formula, thread, aliases))
    return diags


# ---------------------------------------------------------------- transfer


def _cmd_transfer(args):
    if args.sense is not None and args.headword is None:
        raise LerilError("--sense requires --headword")
    literal_frames = args.frame_e is not None or args.frame_i is not None
    if literal_frames and not (args.frame_e and args.frame_i):
        raise LerilError("--frame-e and --frame-i must be given together")
    if not literal_frames and args.lexicon is None:
        raise LerilError("--lexicon is required unless --frame-e/--frame-i are given")

    diags: list[Diagnostic] = []
    records: list[translexgram.TlgRecord] = []
    gloss_index: dict[str, str] = {}
    if args.lexicon is not None:
        records, diags = translexgram.parse_tlg(_read_text(args.lexicon))
        # first-sense glosses for --gloss-slots come from the whole lexicon
        gloss_index = {
            r.headword.lower(): r.meanings[0].gloss
            for r in records
            if r.meanings and r.meanings[0].gloss
        }

    # candidate frame pairs: (label, meaning number, frame_e, frame_i)
    candidates: list[tuple[str, int, str, str]] = []
    if literal_frames:
        candidates.append(("literal frames", 0, args.frame_e, args.frame_i))
    else:
        if args.headword is not None:
            records = [r for r in records if r.headword == args.headword]
            if not records:
                diags.append(error(f"headword {args.headword!r} not found in lexicon"))
                return diags
        for record in records:
            meanings = record.meanings
            if args.sense is not None:
                meanings = [m for m in meanings if m.number == args.sense]
                if not meanings:
                    diags.append(error(f"'{record.headword}' has no meaning {args.sense}"))
                    continue
            for meaning in sorted(meanings, key=lambda m: m.number):
                frame_e = meaning.frame_e or ""
                frame_i = meaning.frame_i or ""
                if not frame_e and not frame_i:
                    continue
                if not frame_e or not frame_i:
                    diags.append(
                        warning(
                            f"meaning {meaning.number}: incomplete frame pair; skipped"
                        )
                    )
                    continue
                candidates.append(
                    (f"meaning {meaning.number} of '{record.headword}'", meaning.number, frame_e, frame_i)
                )

    def annotate(binding: transfer.SlotBinding) -> transfer.SlotBinding:
        return transfer.SlotBinding(
            {
                letter: tuple(
                    f"{tok}{{={gloss_index[tok.lower()]}}}"
                    if tok.lower() in gloss_index
                    else tok
                    for tok in span
                )
                for letter, span in binding.bindings.items()
            }
        )

    tokens = transfer.tokenize_sentence(args.sentence)
    blocks = []
    for label, _number, frame_e, frame_i in candidates:
        try:
            source = transfer.parse_frame(frame_e, "source")
            target = transfer.parse_frame(frame_i, "target")
        except transfer.FrameError as exc:
            diags.append(warning(f"{label}: {exc}"))
            continue
        binding = transfer.match_frame(source, tokens)
        if binding is None:
            continue
        render_binding = annotate(binding) if args.gloss_slots else binding
        output = transfer.render_target(target, render_binding, args.optional)
        table = [
            f"{letter}\t{' '.join(span)}"
            for letter, span in sorted(binding.bindings.items())
        ]
        blocks.append("\n".join([output] + table))
        diags.append(info(f"matched {label}"))
    if blocks:
        _print("\n\n".join(blocks))
    else:
        diags.append(info("no frame matched the sentence"))
    return diags


# ---------------------------------------------------------------- corpus


def _cmd_corpus_add(args):
    registry = _load_registry(args)
    diags: list[Diagnostic] = []
    added = []
    with corpus_store.CorpusStore(args.store, "rw", registry) as store:
        text = _read_text(args.file)
        auto = len(store)
        for sentence_id, lineno, line in anncorra.iter_sentences(text):
            if sentence_id is None:
                auto += 1
                sentence_id = f"{args.lang}-{auto}"
                while sentence_id in store:
                    auto += 1
                    sentence_id = f"{args.lang}-{auto}"
            try:
                store.add_sentence(sentence_id, line, args.lang, diagnostics=diags)
            except corpus_store.CorpusError as exc:
                diags.append(error(str(exc), line=lineno))
                continue
            added.append(sentence_id)
    _print("\n".join(added))
    return diags


def _cmd_corpus_query(args):
    registry = _load_registry(args)
    with corpus_store.CorpusStore(args.store, "r", registry) as store:
        hits, diags = store.query_by_relation(args.tag)
    _print("\n".join(f"{record_id}\t{position}" for record_id, position in hits))
    return diags


def _cmd_corpus_stats(args):
    registry = _load_registry(args)
    with corpus_store.CorpusStore(args.store, "r", registry) as store:
        stats = store.stats()
    doc = {
        "sentences": stats.sentences,
        "relation_counts": stats.relation_counts,
        "node_counts": stats.node_counts,
        "average_depth": stats.average_depth,
    }
    _print(_dump_json(doc))
    return []


def _cmd_corpus_export(args):
    registry = _load_registry(args)
    with corpus_store.CorpusStore(args.store, "r", registry) as store:
        _print(store.export(args.format))
    return []


# ---------------------------------------------------------------- parser


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="leril", description=__doc__)
    strict = argparse.ArgumentParser(add_help=False)
    strict.add_argument(
        "--strict", action="store_true", help="exit 1 when warnings remain"
    )
    tagset = argparse.ArgumentParser(add_help=False)
    tagset.add_argument("--tagset", help="tagset config file (default: $LERIL_TAGSET)")

    top = parser.add_subparsers(dest="command")

    p_dict = top.add_parser("dict", help="Shabdaanjali dictionaries")
    dict_sub = p_dict.add_subparsers(dest="subcommand")
    p = dict_sub.add_parser("parse", parents=[strict])
    p.add_argument("file")
    p.add_argument("--format", choices=["interchange", "text"], default="interchange")
    p.set_defaults(func=_cmd_dict_parse)
    p = dict_sub.add_parser("emit", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_dict_emit)
    p = dict_sub.add_parser("lookup", parents=[strict])
    p.add_argument("file")
    p.add_argument("headword")
    p.add_argument("--pos")
    p.add_argument("--format", choices=["interchange", "text"], default="text")
    p.set_defaults(func=_cmd_dict_lookup)
    p = dict_sub.add_parser("filter", parents=[strict])
    p.add_argument("file")
    p.add_argument("--wordlist", required=True)
    p.set_defaults(func=_cmd_dict_filter)

    p_tlg = top.add_parser("tlg", help="TransLexGram records")
    tlg_sub = p_tlg.add_subparsers(dest="subcommand")
    p = tlg_sub.add_parser("parse", parents=[strict])
    p.add_argument("file")
    p.add_argument("--format", choices=["interchange", "text"], default="interchange")
    p.set_defaults(func=_cmd_tlg_parse)
    p = tlg_sub.add_parser("validate", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_tlg_validate)
    p = tlg_sub.add_parser("seed", parents=[strict])
    p.add_argument("--dict", required=True)
    p.add_argument("--headword")
    p.set_defaults(func=_cmd_tlg_seed)
    p = tlg_sub.add_parser("emit", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_tlg_emit)
    p = tlg_sub.add_parser("corpus", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_tlg_corpus)

    p_ann = top.add_parser("anncorra", help="linear dependency notation")
    ann_sub = p_ann.add_subparsers(dest="subcommand")
    p = ann_sub.add_parser("parse", parents=[strict, tagset])
    p.add_argument("file")
    p.set_defaults(func=_cmd_anncorra_parse)
    p = ann_sub.add_parser("check", parents=[strict, tagset])
    p.add_argument("file")
    p.set_defaults(func=_cmd_anncorra_check)
    p = ann_sub.add_parser("convert", parents=[strict, tagset])
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--explicit", action="store_true", help="write all references (default)")
    mode.add_argument("--minimize", action="store_true", help="drop recoverable references")
    p.set_defaults(func=_cmd_anncorra_convert)

    p_sutra = top.add_parser("sutra", help="Shabda-Sutra formulas and threads")
    sutra_sub = p_sutra.add_subparsers(dest="subcommand")
    p = sutra_sub.add_parser("parse-formula", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_sutra_parse_formula)
    p = sutra_sub.add_parser("parse-thread", parents=[strict])
    p.add_argument("file")
    p.set_defaults(func=_cmd_sutra_parse_thread)
    p = sutra_sub.add_parser("check", parents=[strict])
    p.add_argument("formulas")
    p.add_argument("threads")
    p.add_argument("--alias", help="alias table (label TAB alias)")
    p.set_defaults(func=_cmd_sutra_check)

    p_tr = top.add_parser(
        "transfer", parents=[strict], help="frame-based structural transfer"
    )
    p_tr.add_argument("sentence")
    p_tr.add_argument("--lexicon")
    p_tr.add_argument("--headword")
    p_tr.add_argument("--sense", type=int)
    p_tr.add_argument("--frame-e", help="literal source frame (with --frame-i)")
    p_tr.add_argument("--frame-i", help="literal target frame (with --frame-e)")
    p_tr.add_argument(
        "--optional", choices=list(transfer.OPTIONAL_POLICIES), default="include"
    )
    p_tr.add_argument(
        "--gloss-slots",
        action="store_true",
        help="annotate slot tokens with first-sense lexicon glosses",
    )
    p_tr.set_defaults(func=_cmd_transfer)

    p_corpus = top.add_parser("corpus", help="treebank store")
    corpus_sub = p_corpus.add_subparsers(dest="subcommand")
    p = corpus_sub.add_parser("add", parents=[strict, tagset])
    p.add_argument("file")
    p.add_argument("--store", required=True)
    p.add_argument("--lang", default="und")
    p.set_defaults(func=_cmd_corpus_add)
    p = corpus_sub.add_parser("query", parents=[strict, tagset])
    p.add_argument("tag")
    p.add_argument("--store", required=True)
    p.set_defaults(func=_cmd_corpus_query)
    p = corpus_sub.add_parser("stats", parents=[strict, tagset])
    p.add_argument("--store", required=True)
    p.set_defaults(func=_cmd_corpus_stats)
    p = corpus_sub.add_parser("export", parents=[strict, tagset])
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=["linear", "interchange"], default="linear")
    p.set_defaults(func=_cmd_corpus_export)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        diagnostics = args.func(args) or []
    except (LerilError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for diag in diagnostics:
        print(diag.render(), file=sys.stderr)
    worst = worst_severity(diagnostics)
    if worst is None or worst <= Severity.INFO:
        return EXIT_OK
    if worst >= Severity.ERROR:
        return EXIT_ERRORS
    return EXIT_WARNINGS if getattr(args, "strict", False) else EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
