import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treegen import enumerate_trees, make_tree, random_tree

from leril.anncorra import (
    AnnCorraParseError,
    AnnToken,
    DepNode,
    DepTree,
    TagsetError,
    default_registry,
    emit_explicit,
    emit_minimal,
    load_tagset,
    parse_sentence,
    parse_token,
    resolve,
    to_interchange,
    validate_tree,
)
from leril.diagnostics import Severity, has_errors


def _shape(tree):
    """Surface/tags/attachment view of a tree, for readable assertions."""
    return [
        (n.surface, n.rel_tag, n.node_tag, n.parent, tuple(n.children))
        for n in tree.nodes
    ]


class TestRegistry:
    def test_default_contents(self, registry):
        assert {"k1", "k2", "k3", "s", "kr"} <= set(registry.relation_tags)
        assert {"v", "Kr", "vH", "yo"} <= set(registry.node_tags)
        assert "kr" in registry.verbal_relation_tags
        assert {"v", "Kr", "vH"} <= registry.verbal_node_tags
        assert "yo" not in registry.verbal_node_tags

    def test_empty_config_gives_default(self, registry):
        loaded = load_tagset("")
        assert loaded.relation_tags == registry.relation_tags
        assert loaded.node_tags == registry.node_tags

    def test_case_insensitive_lookup_keeps_casing(self, registry):
        assert registry.canonical_relation("KR") == "kr"
        assert registry.canonical_node("kr") == "Kr"
        assert registry.canonical_node("VH") == "vH"

    def test_config_extends_registry(self, fixtures_dir):
        config = (fixtures_dir / "tagset_k4.cfg").read_text()
        loaded = load_tagset(config)
        assert loaded.canonical_relation("k4") == "k4"
        token = parse_token("rAjA_ko/k4", loaded)
        assert token.rel_tag == "k4"

    def test_duplicate_config_tag_is_error(self):
        config = "k9\trelation\tnonverbal\tx\nk9\trelation\tverbal\ty\n"
        with pytest.raises(TagsetError):
            load_tagset(config)

    def test_unknown_category_is_error(self):
        with pytest.raises(TagsetError) as exc:
            load_tagset("k9\tedge\tnonverbal\tx\n")
        assert "line 1" in str(exc.value)


class TestParseToken:
    def test_relation_with_self_and_parent(self, registry):
        token = parse_token("kATakara/kr:j->i", registry)
        assert token == AnnToken("kATakara", "kr", "j", "i", None)

    def test_node_with_self(self, registry):
        token = parse_token("piyA::v:i", registry)
        assert token == AnnToken("piyA", None, "i", None, "v")

    def test_bare_word(self, registry):
        assert parse_token("phala", registry) == AnnToken("phala")

    def test_multiword_surface(self, registry):
        assert parse_token("rAma_ne/k1->i", registry).surface == "rAma_ne"

    def test_relation_and_node_together(self, registry):
        token = parse_token("soyA/k2->i::v", registry)
        assert token == AnnToken("soyA", "k2", None, "i", "v")

    def test_unknown_tag_warns_but_parses(self, registry):
        diags = []
        token = parse_token("x/k9", registry, diagnostics=diags)
        assert token.rel_tag == "k9"
        assert len(diags) == 1 and diags[0].severity == Severity.WARNING

    def test_case_folds_to_registry_casing(self, registry):
        assert parse_token("x/KR", registry).rel_tag == "kr"
        assert parse_token("x::KR", registry).node_tag == "Kr"

    @pytest.mark.parametrize(
        "bad",
        [
            "x->i",  # arrow without a relation
            "x/k1:",  # empty self index
            "x/k1->",  # empty parent index
            "x/",  # missing relation tag
            "x::",  # missing node tag
            "x/k1:A",  # index labels are lowercase
            "x:y",  # lone ':' outside an annotation
            "x/k1:i::v:j",  # two self indexes
            "/k1",  # no surface
            "piyA::v:i->j",  # arrow after the node part
        ],
    )
    def test_malformed_tokens(self, registry, bad):
        with pytest.raises(AnnCorraParseError):
            parse_token(bad, registry)


def _parse_tokens(line, registry):
    return [parse_token(t, registry) for t in line.split()]


class TestResolve:
    def test_explicit_sentence(self, registry, explicit_line):
        tree, diags = resolve(_parse_tokens(explicit_line, registry), registry)
        assert not has_errors(diags)
        assert _shape(tree) == [
            ("rAma_ne", "k1", None, 4, ()),
            ("phala", "k2", None, 2, ()),
            ("kATakara", "kr", None, 4, (1,)),
            ("pAnI", "k2", None, 4, ()),
            ("piyA", None, "v", None, (0, 2, 3)),
        ]
        assert tree.root == 4

    def test_defaults_reproduce_explicit_tree(self, registry, explicit_line, defaulted_line):
        explicit, _ = resolve(_parse_tokens(explicit_line, registry), registry)
        defaulted, _ = resolve(_parse_tokens(defaulted_line, registry), registry)
        assert defaulted == explicit

    def test_single_token(self, registry):
        tree, diags = resolve(_parse_tokens("piyA::v:i", registry), registry)
        assert diags == []
        assert len(tree.nodes) == 1 and tree.root == 0

    def test_k2_attaches_to_nearest_verbal_rightward_first(self, registry):
        # ties between left and right neighbours go rightward
        tree, _ = resolve(_parse_tokens("kATakara/kr pAnI/k2 piyA::v:i", registry), registry)
        assert tree.nodes[1].parent == 2

    def test_undefined_label_is_error(self, registry):
        tree, diags = resolve(_parse_tokens("a/k1->q piyA::v:i", registry), registry)
        assert tree is None
        assert any("undefined index label 'q'" in d.message for d in diags)

    def test_duplicate_label_is_error(self, registry):
        tree, diags = resolve(_parse_tokens("a/k1:i piyA::v:i", registry), registry)
        assert tree is None
        assert any("duplicate index label" in d.message for d in diags)

    def test_no_verbal_token_is_error(self, registry):
        tree, diags = resolve(_parse_tokens("phala/k2 pAnI/k2", registry), registry)
        assert tree is None
        assert any("no verbal token" in d.message for d in diags)

    def test_cycle_is_error(self, registry):
        line = "a/k1:i->j b/k2:j->i"
        tree, diags = resolve(_parse_tokens(line, registry), registry)
        assert tree is None
        assert any("cycle" in d.message for d in diags)

    def test_multiple_roots_is_error(self, registry):
        tree, diags = resolve(_parse_tokens("piyA::v soyA::v", registry), registry)
        assert tree is None
        assert any("multiple roots" in d.message for d in diags)


class TestValidateTree:
    def test_clean_tree(self, registry, explicit_line):
        tree, _ = resolve(_parse_tokens(explicit_line, registry), registry)
        assert validate_tree(tree) == []

    def test_hand_built_cycle(self):
        a = DepNode(0, "a", parent=1, children=[1])
        b = DepNode(1, "b", parent=0, children=[0])
        diags = validate_tree(DepTree([a, b], root=0))
        assert any("cycle" in d.message for d in diags)

    def test_two_parentless_nodes(self):
        a = DepNode(0, "a")
        b = DepNode(1, "b")
        diags = validate_tree(DepTree([a, b], root=0))
        assert any("multiple roots" in d.message for d in diags)


class TestEmit:
    def test_explicit_sentence_round_trips_byte_exactly(self, registry, explicit_line):
        tree, _ = resolve(_parse_tokens(explicit_line, registry), registry)
        emitted = emit_explicit(tree)
        again, diags = parse_sentence(emitted, registry)
        assert not has_errors(diags)
        assert again == tree
        # the published line up to index renaming (canonical labels swap i and j)
        assert emitted == (
            "rAma_ne/k1->j phala/k2->i kATakara/kr:i->j pAnI/k2->j piyA::v:j"
        )

    def test_minimal_matches_published_defaulted_line(
        self, registry, explicit_line, defaulted_line
    ):
        tree, _ = resolve(_parse_tokens(explicit_line, registry), registry)
        assert emit_minimal(tree, registry) == defaulted_line

    def test_one_node_tree(self, registry):
        tree, _ = resolve(_parse_tokens("piyA::v:i", registry), registry)
        assert emit_explicit(tree) == "piyA::v:i"
        assert emit_minimal(tree, registry) == "piyA::v:i"

    def test_minimal_keeps_no_recoverable_ref(self, registry):
        rng = random.Random(7)
        for _ in range(50):
            tree = random_tree(rng, n=8)
            minimal = emit_minimal(tree, registry)
            for chunk in minimal.split():
                if "->" not in chunk:
                    continue
                # dropping this ref must change the resolved tree
                pruned = minimal.replace(chunk, chunk.split("->")[0], 1)
                other, diags = parse_sentence(pruned, registry)
                assert other is None or other != tree

    def test_exhaustive_round_trip_small(self, registry):
        count = 0
        for tree in enumerate_trees(max_nodes=4):
            explicit = emit_explicit(tree)
            back, diags = parse_sentence(explicit, registry)
            assert not has_errors(diags), explicit
            assert back == tree, explicit
            minimal = emit_minimal(tree, registry)
            back, diags = parse_sentence(minimal, registry)
            assert not has_errors(diags), minimal
            assert back == tree, minimal
            count += 1
        assert count == 1 + 4 + 36 + 512

    def test_random_trees_round_trip(self, registry):
        rng = random.Random(2024)
        for _ in range(200):
            tree = random_tree(rng, n=8)
            for emitted in (emit_explicit(tree), emit_minimal(tree, registry)):
                back, diags = parse_sentence(emitted, registry)
                assert not has_errors(diags), emitted
                assert back == tree, emitted

    def test_many_labels_roll_over_to_digits(self, registry):
        # a 30-node star forces labels past the single-letter range
        n = 30
        parents = [None] + [0] * (n - 1)
        rels = [None] + ["k1"] * (n - 1)
        node_tags = [None] * n
        node_tags[0] = "v"
        tree = make_tree(parents, rels, node_tags)
        emitted = emit_explicit(tree)
        back, diags = parse_sentence(emitted, registry)
        assert not has_errors(diags)
        assert back == tree


class TestParseSentence:
    def test_group_with_tag(self, registry):
        tree, diags = parse_sentence("[rAma_ne/k1 khIra/k2 khAyI::v]<s>", registry)
        assert not has_errors(diags)
        assert len(tree.nodes) == 3
        assert [g for g in tree.groups] == [type(tree.groups[0])(0, 3, "s")]
        assert tree.nodes[0].parent == 2 and tree.nodes[1].parent == 2

    def test_no_brackets_means_no_groups(self, registry, explicit_line):
        tree, _ = parse_sentence(explicit_line, registry)
        assert tree.groups == []

    def test_unbalanced_brackets(self, registry):
        tree, diags = parse_sentence("[a/k1 [b", registry)
        assert tree is None
        assert any("unbalanced" in d.message for d in diags)

    def test_unknown_group_tag_warns(self, registry):
        tree, diags = parse_sentence("[rAma_ne/k1 khAyI::v]<zz>", registry)
        assert tree is not None
        assert any("unknown group tag" in d.message for d in diags)

    def test_bare_token_in_group_attaches_to_head(self, registry):
        tree, diags = parse_sentence("[rAma_ne/k1 khIra khAyI::v]<s>", registry)
        assert tree is not None
        assert tree.nodes[1].parent == 2
        assert tree.nodes[1].rel_tag is None
        assert any("bare token" in d.message for d in diags)

    def test_group_round_trips_through_emit(self, registry):
        tree, _ = parse_sentence("[rAma_ne/k1 khIra khAyI::v]<s>", registry)
        emitted = emit_explicit(tree)
        back, _ = parse_sentence(emitted, registry)
        assert back == tree

    def test_parse_error_reports_column(self, registry):
        tree, diags = parse_sentence("piyA::v:i x/k1->", registry)
        assert tree is None
        errors = [d for d in diags if d.severity == Severity.ERROR]
        # column points at the missing index right after the arrow
        assert errors and errors[0].column == 17


# Random-tree property: explicit emission always reparses to the same tree.
@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**31), st.integers(min_value=1, max_value=9))
def test_round_trip_property(seed, n):
    registry = default_registry()
    tree = random_tree(random.Random(seed), n=n)
    back, diags = parse_sentence(emit_explicit(tree), registry)
    assert not has_errors(diags)
    assert back == tree


def test_interchange_shape(registry, explicit_line):
    tree, _ = parse_sentence(explicit_line, registry)
    doc = to_interchange(tree)
    assert doc["root"] == 4
    assert doc["nodes"][2] == {
        "position": 2,
        "surface": "kATakara",
        "rel": "kr",
        "node": None,
        "parent": 4,
    }
