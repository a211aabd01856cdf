"""TransLexGram transfer-lexicon records.

A record is a block of ``FIELD:: value`` lines. It opens with a HEADWORD
line and holds one block per meaning:

    HEADWORD::"go","V"
    MEANING::1::"jAnA"
    ENG_EXP:: I go to school.
    TR_NAT:: maiM skUla jAtA hUM.
    TR_ENG-INFLNC::
    FRAME_E:: A goes to B
    FRAME_I:: A B [ko] jAtA hai
    ERR::
    COMNT::

Field names are matched case-sensitively. TR_NAT may repeat; the other
meaning fields are single-valued and a duplicate is a warning with the
later value winning. A line without ``::`` continues the previous field
value, joined with a single space (long translations wrap this way in
hand-authored files). ``TR_ENG_INFLNCE`` is accepted as a spelling variant
of ``TR_ENG-INFLNC`` with a warning. Unknown fields are kept verbatim in
the meaning's ``extras`` list.

A field line that is present but empty parses to ``""``; an absent field
is ``None``. Emission writes empty fields as bare ``FIELD::`` lines, which
keeps parse/emit round-trips exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .dict_model import DictEntry, emit_gloss
from .diagnostics import Diagnostic, error, info, warning
from .transfer import FrameError, parse_frame


@dataclass
class TlgMeaning:
    number: int
    gloss: str = ""
    gloss_other: str | None = None
    eng_exp: str | None = None
    tr_nat: list[str] = field(default_factory=list)
    tr_eng_influence: str | None = None
    frame_e: str | None = None
    frame_i: str | None = None
    err: str | None = None
    comment: str | None = None
    extras: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class TlgRecord:
    headword: str
    pos: str = ""
    meanings: list[TlgMeaning] = field(default_factory=list)


@dataclass(frozen=True)
class ParallelPair:
    """One aligned sentence pair extracted from a record."""

    english: str
    translation: str
    headword: str
    sense_number: int


_FIELD_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_-]*)\s*::\s*(.*?)\s*$")
_MEANING_VALUE_RE = re.compile(r"^(\d+)\s*::\s*(.*)$")
_HEADWORD_VALUE_RE = re.compile(r'^"([^"]*)"\s*,\s*"([^"]*)"$')

# Meaning-level single-valued fields, in canonical emission order.
_SINGLE_FIELDS = {
    "MEANING_OTH": "gloss_other",
    "ENG_EXP": "eng_exp",
    "TR_ENG-INFLNC": "tr_eng_influence",
    "FRAME_E": "frame_e",
    "FRAME_I": "frame_i",
    "ERR": "err",
    "COMNT": "comment",
}
_FIELD_ALIASES = {"TR_ENG_INFLNCE": "TR_ENG-INFLNC"}


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        return value[1:-1]
    return value


def parse_tlg(source: str | Iterable[str]) -> tuple[list[TlgRecord], list[Diagnostic]]:
    """Parse TLG text into records plus diagnostics; never raises."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]

    records: list[TlgRecord] = []
    diagnostics: list[Diagnostic] = []
    record: TlgRecord | None = None
    record_line = 0
    meaning: TlgMeaning | None = None
    last: tuple | None = None  # continuation target
    skipping = False
    saw_content = False

    def flush_record() -> None:
        nonlocal record, meaning
        if record is None:
            return
        numbers = [m.number for m in record.meanings]
        if not numbers:
            diagnostics.append(
                warning(f"record '{record.headword}' has no meanings", line=record_line)
            )
        elif numbers != list(range(1, len(numbers) + 1)):
            diagnostics.append(
                warning(
                    f"non-consecutive meaning numbers in record '{record.headword}'",
                    line=record_line,
                )
            )
        records.append(record)
        record = None
        meaning = None

    def extend(text: str) -> None:
        kind = last[0]
        target: TlgMeaning = last[1]
        if kind == "attr":
            current = getattr(target, last[2])
            setattr(target, last[2], f"{current} {text}" if current else text)
        elif kind == "tr_nat":
            target.tr_nat[-1] = f"{target.tr_nat[-1]} {text}"
        else:  # extras
            name, value = target.extras[-1]
            target.extras[-1] = (name, f"{value} {text}" if value else text)

    for lineno, raw in enumerate(lines, 1):
        if not raw.strip():
            continue
        saw_content = True

        m = _FIELD_RE.match(raw)
        if m is None:
            if skipping:
                continue
            if last is None:
                diagnostics.append(
                    error("continuation line without a preceding field", line=lineno)
                )
                continue
            extend(raw.strip())
            continue

        name, value = m.group(1), m.group(2)

        if name == "HEADWORD":
            flush_record()
            hv = _HEADWORD_VALUE_RE.match(value)
            if hv is None or not hv.group(1):
                diagnostics.append(
                    error("malformed HEADWORD value; record skipped", line=lineno, field="HEADWORD")
                )
                skipping = True
                last = None
                continue
            record = TlgRecord(hv.group(1), hv.group(2))
            record_line = lineno
            meaning = None
            last = None
            skipping = False
            continue

        if skipping:
            continue

        if name == "MEANING":
            if record is None:
                diagnostics.append(
                    error("MEANING before HEADWORD; content skipped", line=lineno, field="MEANING")
                )
                continue
            mv = _MEANING_VALUE_RE.match(value)
            if mv is None:
                diagnostics.append(error("malformed MEANING line", line=lineno, field="MEANING"))
                continue
            meaning = TlgMeaning(number=int(mv.group(1)), gloss=_unquote(mv.group(2)))
            record.meanings.append(meaning)
            last = ("attr", meaning, "gloss")
            continue

        if record is None:
            diagnostics.append(
                error(f"field {name} before HEADWORD; skipped", line=lineno, field=name)
            )
            continue
        if meaning is None:
            diagnostics.append(
                error(f"field {name} before MEANING; skipped", line=lineno, field=name)
            )
            continue

        canonical = name
        if name in _FIELD_ALIASES:
            canonical = _FIELD_ALIASES[name]
            diagnostics.append(
                warning(f"field name {name} accepted as {canonical}", line=lineno, field=name)
            )

        if canonical == "TR_NAT":
            if value:
                meaning.tr_nat.append(value)
                last = ("tr_nat", meaning)
            else:
                diagnostics.append(
                    warning("empty TR_NAT value ignored", line=lineno, field="TR_NAT")
                )
                last = None
            continue

        if canonical in _SINGLE_FIELDS:
            attr = _SINGLE_FIELDS[canonical]
            if getattr(meaning, attr) is not None:
                diagnostics.append(
                    warning(
                        f"duplicate {canonical} in meaning {meaning.number}; later value wins",
                        line=lineno,
                        field=canonical,
                    )
                )
            setattr(meaning, attr, value)
            last = ("attr", meaning, attr)
            continue

        diagnostics.append(warning(f"unknown field {name}", line=lineno, field=name))
        meaning.extras.append((name, value))
        last = ("extras", meaning)

    flush_record()
    if not saw_content:
        diagnostics.append(info("empty input: no records"))
    return records, diagnostics


def validate_tlg(record: TlgRecord, policy: str = "lenient") -> list[Diagnostic]:
    """Check one record against the contribution rules.

    Errors: a meaning without an English example or without any natural
    translation. Warnings: an empty or half-empty frame pair, target-frame
    slots that the source frame never binds, and (strict policy only) a
    TR_ENG-INFLNC line that is present but empty.
    """
    if policy not in ("strict", "lenient"):
        raise ValueError(f"unknown validation policy: {policy!r}")
    diagnostics: list[Diagnostic] = []
    if not record.meanings:
        diagnostics.append(warning(f"record '{record.headword}' has no meanings"))
    for m in record.meanings:
        if not m.eng_exp:
            diagnostics.append(
                error(f"meaning {m.number}: missing English example sentence", field="ENG_EXP")
            )
        if not m.tr_nat:
            diagnostics.append(
                error(f"meaning {m.number}: no natural translation", field="TR_NAT")
            )
        frame_e = m.frame_e or ""
        frame_i = m.frame_i or ""
        if not frame_e and not frame_i:
            diagnostics.append(
                warning(f"meaning {m.number}: empty frame pair", field="FRAME_E")
            )
        elif not frame_e or not frame_i:
            diagnostics.append(
                warning(
                    f"meaning {m.number}: incomplete frame pair",
                    field="FRAME_E" if not frame_e else "FRAME_I",
                )
            )
        else:
            try:
                src = parse_frame(frame_e, "source")
                tgt = parse_frame(frame_i, "target")
            except FrameError as exc:
                diagnostics.append(warning(f"meaning {m.number}: unparseable frame: {exc}"))
            else:
                for letter in sorted(set(tgt.slots) - set(src.slots)):
                    diagnostics.append(
                        warning(
                            f"meaning {m.number}: slot {letter} unbound in source frame",
                            field="FRAME_I",
                        )
                    )
        if policy == "strict" and m.tr_eng_influence == "":
            diagnostics.append(
                warning(
                    f"meaning {m.number}: empty TR_ENG-INFLNC line", field="TR_ENG-INFLNC"
                )
            )
    return diagnostics


def seed_from_dictionary(entry: DictEntry) -> tuple[TlgRecord, list[Diagnostic]]:
    """Build a contributor skeleton from a dictionary entry.

    One meaning per sense; the gloss is copied, ENG_EXP is the sense's
    first example, and all translation and frame fields are left empty.
    """
    diagnostics: list[Diagnostic] = []
    meanings = []
    for sense in entry.senses:
        if sense.examples:
            eng_exp = sense.examples[0]
        else:
            eng_exp = ""
            diagnostics.append(
                warning(
                    f"sense {sense.number} of '{entry.headword}' has no example; "
                    "ENG_EXP left empty",
                    field="ENG_EXP",
                )
            )
        meanings.append(
            TlgMeaning(
                number=sense.number,
                gloss=emit_gloss(sense.gloss),
                eng_exp=eng_exp,
                tr_eng_influence="",
                frame_e="",
                frame_i="",
                err="",
                comment="",
            )
        )
    return TlgRecord(entry.headword, entry.pos, meanings), diagnostics


def _field_line(name: str, value: str) -> str:
    return f"{name}:: {value}" if value else f"{name}::"


def emit_record(record: TlgRecord) -> str:
    lines = [f'HEADWORD::"{record.headword}","{record.pos}"']
    for m in record.meanings:
        lines.append(f'MEANING::{m.number}::"{m.gloss}"')
        if m.gloss_other is not None:
            lines.append(_field_line("MEANING_OTH", m.gloss_other))
        if m.eng_exp is not None:
            lines.append(_field_line("ENG_EXP", m.eng_exp))
        for value in m.tr_nat:
            lines.append(_field_line("TR_NAT", value))
        if m.tr_eng_influence is not None:
            lines.append(_field_line("TR_ENG-INFLNC", m.tr_eng_influence))
        if m.frame_e is not None:
            lines.append(_field_line("FRAME_E", m.frame_e))
        if m.frame_i is not None:
            lines.append(_field_line("FRAME_I", m.frame_i))
        if m.err is not None:
            lines.append(_field_line("ERR", m.err))
        if m.comment is not None:
            lines.append(_field_line("COMNT", m.comment))
        for name, value in m.extras:
            lines.append(_field_line(name, value))
    return "\n".join(lines)


def emit_tlg(records: list[TlgRecord]) -> str:
    """Canonical text form; ``parse_tlg(emit_tlg(rs))`` reproduces ``rs``."""
    if not records:
        return ""
    return "\n\n".join(emit_record(r) for r in records) + "\n"


def extract_parallel_corpus(records: list[TlgRecord]) -> list[ParallelPair]:
    """One pair per (meaning, TR_NAT value); empty TR_NAT contributes none."""
    return [
        ParallelPair(m.eng_exp or "", translation, record.headword, m.number)
        for record in records
        for m in record.meanings
        for translation in m.tr_nat
    ]


def pairs_to_tsv(pairs: list[ParallelPair]) -> str:
    lines = [
        f"{p.english}\t{p.translation}\t{p.headword}\t{p.sense_number}" for p in pairs
    ]
    return "\n".join(lines) + "\n" if lines else ""


def to_interchange(records: list[TlgRecord]) -> dict:
    """JSON-shaped export mirroring the record structure."""
    return {
        "format": "translexgram",
        "records": [
            {
                "headword": r.headword,
                "pos": r.pos,
                "meanings": [
                    {
                        "number": m.number,
                        "gloss": m.gloss,
                        "gloss_other": m.gloss_other,
                        "eng_exp": m.eng_exp,
                        "tr_nat": list(m.tr_nat),
                        "tr_eng_influence": m.tr_eng_influence,
                        "frame_e": m.frame_e,
                        "frame_i": m.frame_i,
                        "err": m.err,
                        "comment": m.comment,
                        "extras": [[n, v] for n, v in m.extras],
                    }
                    for m in r.meanings
                ],
            }
            for r in records
        ],
    }
