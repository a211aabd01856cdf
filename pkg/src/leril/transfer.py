"""Frame-based structural transfer.

A frame is a whitespace-separated pattern such as ``A goes to B`` (source
side) or ``A B [ko] jAtA hai`` (target side). Single uppercase letters are
slots, ``[tok]`` is an optional literal, and anything else is a literal
anchor. Frames are written in simple present tense regardless of the
example sentence, so literal matching folds case and a small set of
inflectional suffixes before comparing.

Matching binds each slot to a contiguous, nonempty span of sentence
tokens. The whole sentence must be consumed. When several bindings exist,
slots are resolved left to right and each takes the shortest span that
still lets the rest of the frame match, which makes matching
deterministic. Rendering substitutes captured spans verbatim; slot fillers
are never translated here, that belongs to a full MT system downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

from .diagnostics import Diagnostic, LerilError, warning

if TYPE_CHECKING:  # pragma: no cover
    from .translexgram import TlgRecord


class FrameError(LerilError):
    """Malformed frame pattern."""


class TransferError(LerilError):
    """Rendering failure, e.g. an unbound slot."""


@dataclass(frozen=True)
class FrameElement:
    kind: str  # "slot" | "literal" | "optional"
    value: str


@dataclass(frozen=True)
class Frame:
    side: str  # "source" | "target"
    elements: tuple[FrameElement, ...]

    @property
    def slots(self) -> list[str]:
        return [el.value for el in self.elements if el.kind == "slot"]


@dataclass(frozen=True)
class SlotBinding:
    bindings: Mapping[str, tuple[str, ...]]


@dataclass(frozen=True)
class TransferResult:
    output: str
    binding: SlotBinding
    meaning_number: int
    unmatched: bool = False


OPTIONAL_POLICIES = ("include", "drop", "bracket")


def parse_frame(text: str, side: str = "source") -> Frame:
    """Parse a frame pattern. Slot letters must be unique within a frame."""
    if side not in ("source", "target"):
        raise ValueError(f"unknown frame side: {side!r}")
    tokens = text.split()
    if not tokens:
        raise FrameError("empty frame")
    elements: list[FrameElement] = []
    seen: set[str] = set()
    for token in tokens:
        if len(token) == 1 and token.isascii() and token.isalpha() and token.isupper():
            if token in seen:
                raise FrameError(f"duplicate slot letter '{token}'")
            seen.add(token)
            elements.append(FrameElement("slot", token))
        elif token.startswith("[") and token.endswith("]"):
            inner = token[1:-1]
            if not inner:
                raise FrameError("empty optional literal '[]'")
            elements.append(FrameElement("optional", inner))
        else:
            elements.append(FrameElement("literal", token))
    return Frame(side, tuple(elements))


_FOLD_SUFFIXES = ("es", "ed", "ing", "s")


def inflection_fold(token: str) -> str:
    """Lowercase and strip inflectional suffixes until stable.

    A suffix among ``es``, ``ed``, ``ing``, ``s`` is removed only while the
    remaining stem keeps at least two letters, so "is" survives unchanged.
    Stripping repeats to a fixed point, which makes the fold idempotent.
    """
    folded = token.lower()
    while True:
        for suffix in _FOLD_SUFFIXES:
            if folded.endswith(suffix) and len(folded) - len(suffix) >= 2:
                folded = folded[: -len(suffix)]
                break
        else:
            return folded


def tokenize_sentence(sentence: str) -> list[str]:
    """Split on whitespace and strip trailing sentence punctuation."""
    tokens = []
    for raw in sentence.split():
        token = raw.rstrip(".,!?")
        if token:
            tokens.append(token)
    return tokens


def match_frame(frame: Frame, sentence: list[str]) -> SlotBinding | None:
    """Match a source frame against tokenized sentence text.

    Returns the slot binding, or None when no assignment exists.
    """

    elements = frame.elements
    n = len(sentence)

    def matches(pattern: str, token: str) -> bool:
        return inflection_fold(pattern) == inflection_fold(token)

    def backtrack(ei: int, ti: int, bound: dict[str, tuple[str, ...]]):
        if ei == len(elements):
            return dict(bound) if ti == n else None
        el = elements[ei]
        if el.kind == "literal":
            if ti < n and matches(el.value, sentence[ti]):
                return backtrack(ei + 1, ti + 1, bound)
            return None
        if el.kind == "optional":
            if ti < n and matches(el.value, sentence[ti]):
                result = backtrack(ei + 1, ti + 1, bound)
                if result is not None:
                    return result
            return backtrack(ei + 1, ti, bound)
        # slot: shortest capture first
        for end in range(ti + 1, n + 1):
            bound[el.value] = tuple(sentence[ti:end])
            result = backtrack(ei + 1, end, bound)
            if result is not None:
                return result
        bound.pop(el.value, None)
        return None

    result = backtrack(0, 0, {})
    return SlotBinding(result) if result is not None else None


def render_target(
    frame: Frame, binding: SlotBinding, optional_policy: str = "include"
) -> str:
    """Substitute captured spans into a target frame.

    ``optional_policy`` controls ``[tok]`` elements: "include" emits the
    bare token, "drop" omits it, "bracket" keeps it bracketed.
    """
    if optional_policy not in OPTIONAL_POLICIES:
        raise ValueError(f"unknown optional-literal policy: {optional_policy!r}")
    out: list[str] = []
    for el in frame.elements:
        if el.kind == "slot":
            span = binding.bindings.get(el.value)
            if not span:
                raise TransferError(f"slot {el.value} is unbound")
            out.extend(span)
        elif el.kind == "literal":
            out.append(el.value)
        else:
            if optional_policy == "include":
                out.append(el.value)
            elif optional_policy == "bracket":
                out.append(f"[{el.value}]")
    return " ".join(out)


def transfer_meaning(
    meaning, tokens: list[str], optional_policy: str = "include"
) -> TransferResult:
    """Apply one meaning's frame pair to pre-tokenized sentence text."""
    source = parse_frame(meaning.frame_e or "", "source")
    target = parse_frame(meaning.frame_i or "", "target")
    binding = match_frame(source, tokens)
    if binding is None:
        return TransferResult("", SlotBinding({}), meaning.number, unmatched=True)
    output = render_target(target, binding, optional_policy)
    return TransferResult(output, binding, meaning.number)


def transfer_sentence(
    record: "TlgRecord", sentence: str, optional_policy: str = "include"
) -> tuple[list[TransferResult], list[Diagnostic]]:
    """Try every meaning's frame pair against a sentence, in numeric order.

    Returns one result per matching meaning. Meanings with only half a
    frame pair are skipped with a warning; meanings with no frames at all
    are skipped silently.
    """
    tokens = tokenize_sentence(sentence)
    results: list[TransferResult] = []
    diagnostics: list[Diagnostic] = []
    for meaning in sorted(record.meanings, key=lambda m: m.number):
        frame_e = meaning.frame_e or ""
        frame_i = meaning.frame_i or ""
        if not frame_e and not frame_i:
            continue
        if not frame_e or not frame_i:
            diagnostics.append(
                warning(
                    f"meaning {meaning.number}: incomplete frame pair; skipped",
                    field="FRAME_E" if not frame_e else "FRAME_I",
                )
            )
            continue
        try:
            result = transfer_meaning(meaning, tokens, optional_policy)
        except (FrameError, TransferError) as exc:
            diagnostics.append(warning(f"meaning {meaning.number}: {exc}"))
            continue
        if not result.unmatched:
            results.append(result)
    return results, diagnostics
