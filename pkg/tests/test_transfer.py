from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leril.diagnostics import Severity
from leril.transfer import (
    Frame,
    FrameElement,
    FrameError,
    SlotBinding,
    TransferError,
    inflection_fold,
    match_frame,
    parse_frame,
    render_target,
    tokenize_sentence,
    transfer_sentence,
)
from leril.translexgram import parse_tlg


class TestParseFrame:
    def test_source_frame(self):
        frame = parse_frame("A goes to B", "source")
        assert frame.elements == (
            FrameElement("slot", "A"),
            FrameElement("literal", "goes"),
            FrameElement("literal", "to"),
            FrameElement("slot", "B"),
        )

    def test_target_frame_with_optional(self):
        frame = parse_frame("A B [ko] jAtA hai", "target")
        assert frame.elements == (
            FrameElement("slot", "A"),
            FrameElement("slot", "B"),
            FrameElement("optional", "ko"),
            FrameElement("literal", "jAtA"),
            FrameElement("literal", "hai"),
        )

    def test_single_slot(self):
        assert parse_frame("A").elements == (FrameElement("slot", "A"),)

    def test_multiword_literal(self):
        frame = parse_frame("A B meM rakhA_jAtA_hai", "target")
        assert frame.elements[-1] == FrameElement("literal", "rakhA_jAtA_hai")

    def test_duplicate_slot_is_error(self):
        with pytest.raises(FrameError):
            parse_frame("A goes A")

    def test_empty_frame_is_error(self):
        with pytest.raises(FrameError):
            parse_frame("   ")


class TestInflectionFold:
    @pytest.mark.parametrize(
        "token,expected",
        [
            ("goes", "go"),
            ("Goes", "go"),
            ("go", "go"),
            ("is", "is"),
            ("going", "go"),
            ("walked", "walk"),
            ("into", "into"),
        ],
    )
    def test_folds(self, token, expected):
        assert inflection_fold(token) == expected

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzGOES", min_size=1, max_size=12))
    def test_idempotent(self, token):
        once = inflection_fold(token)
        assert inflection_fold(once) == once


class TestTokenize:
    def test_strips_terminal_punctuation(self):
        assert tokenize_sentence("I go to school.") == ["I", "go", "to", "school"]

    def test_question_mark(self):
        assert tokenize_sentence("Have you gone mad?") == ["Have", "you", "gone", "mad"]


class TestMatchFrame:
    def test_simple_sentence(self):
        frame = parse_frame("A goes to B")
        binding = match_frame(frame, tokenize_sentence("I go to school."))
        assert binding.bindings == {"A": ("I",), "B": ("school",)}

    def test_multiword_spans(self):
        frame = parse_frame("A goes into B")
        binding = match_frame(
            frame, tokenize_sentence("These clothes go into that suitcase.")
        )
        assert binding.bindings == {
            "A": ("These", "clothes"),
            "B": ("that", "suitcase"),
        }

    def test_missing_anchor_fails(self):
        frame = parse_frame("A goes to B")
        assert match_frame(frame, tokenize_sentence("I went home.")) is None

    def test_leftmost_shortest_is_deterministic(self):
        frame = parse_frame("A x B")
        binding = match_frame(frame, ["p", "x", "q", "x", "r"])
        # A takes the shortest span that still lets the rest match
        assert binding.bindings == {"A": ("p",), "B": ("q", "x", "r")}


class TestRenderTarget:
    def test_include_policy(self):
        frame = parse_frame("A B [ko] jAtA hai", "target")
        binding = SlotBinding({"A": ("I",), "B": ("school",)})
        assert render_target(frame, binding) == "I school ko jAtA hai"

    def test_bracket_policy(self):
        frame = parse_frame("A B [ko] jAtA hai", "target")
        binding = SlotBinding({"A": ("I",), "B": ("school",)})
        assert render_target(frame, binding, "bracket") == "I school [ko] jAtA hai"

    def test_drop_policy(self):
        frame = parse_frame("A B [ko] jAtA hai", "target")
        binding = SlotBinding({"A": ("I",), "B": ("school",)})
        assert render_target(frame, binding, "drop") == "I school jAtA hai"

    def test_multiword_literal_stays_joined(self):
        frame = parse_frame("A B meM rakhA_jAtA_hai", "target")
        binding = SlotBinding({"A": ("These", "clothes"), "B": ("that", "suitcase")})
        assert (
            render_target(frame, binding)
            == "These clothes that suitcase meM rakhA_jAtA_hai"
        )

    def test_unbound_slot_names_the_letter(self):
        frame = parse_frame("A B jAtA hai", "target")
        with pytest.raises(TransferError, match="slot B"):
            render_target(frame, SlotBinding({"A": ("I",)}))


class TestTransferSentence:
    @pytest.fixture()
    def go_record(self, go_tlg_text):
        records, _ = parse_tlg(go_tlg_text)
        return records[0]

    def test_school_sentence_matches_meaning_1(self, go_record):
        results, diags = transfer_sentence(go_record, "I go to school.")
        assert diags == []
        assert len(results) == 1
        assert results[0].meaning_number == 1
        assert results[0].output == "I school ko jAtA hai"

    def test_suitcase_sentence_matches_meaning_2(self, go_record):
        results, _ = transfer_sentence(go_record, "These clothes go into that suitcase.")
        assert len(results) == 1
        assert results[0].meaning_number == 2
        assert results[0].output == "These clothes that suitcase meM rakhA_jAtA_hai"

    def test_no_anchor_no_results(self, go_record):
        results, _ = transfer_sentence(go_record, "The sky is blue.")
        assert results == []

    def test_half_frame_pair_warns(self, go_record):
        go_record.meanings[0].frame_i = ""
        results, diags = transfer_sentence(go_record, "I go to school.")
        assert results == []
        assert any(
            d.severity == Severity.WARNING and "incomplete frame pair" in d.message
            for d in diags
        )


def _render_source(frame: Frame, binding: dict[str, tuple[str, ...]]) -> list[str]:
    tokens = []
    for el in frame.elements:
        if el.kind == "slot":
            tokens.extend(binding[el.value])
        else:
            tokens.append(el.value)
    return tokens


@pytest.mark.parametrize("pattern", ["A goes to B", "A goes into B"])
def test_slot_recovery_brute_force(pattern):
    """Planted fillers are recovered exactly for every filler combination."""
    frame = parse_frame(pattern)
    vocabulary = ["alpha", "beta", "gamma", "delta"]
    spans = [
        tuple(combo)
        for size in (1, 2)
        for combo in product(vocabulary, repeat=size)
    ]
    for a_span in spans:
        for b_span in spans:
            planted = {"A": a_span, "B": b_span}
            sentence = _render_source(frame, planted)
            binding = match_frame(frame, sentence)
            assert binding is not None
            assert binding.bindings == planted


@given(
    st.lists(st.sampled_from(["alpha", "beta", "gamma"]), min_size=1, max_size=3),
    st.lists(st.sampled_from(["alpha", "beta", "gamma"]), min_size=1, max_size=3),
    st.sampled_from(["include", "drop", "bracket"]),
)
def test_render_token_count(a_span, b_span, policy):
    frame = parse_frame("A B [ko] jAtA hai", "target")
    binding = SlotBinding({"A": tuple(a_span), "B": tuple(b_span)})
    rendered = render_target(frame, binding, policy).split()
    literal_count = 2 + (0 if policy == "drop" else 1)
    assert len(rendered) == literal_count + len(a_span) + len(b_span)
