"""AnnCorra linear dependency notation.

One annotated sentence per line. A token is a surface form followed by
optional annotations:

    surface/REL[:self][->parent]::NODE[:self]

``/REL`` names the grammatical relation to the token's head (k1, k2, ...),
``::NODE`` names the node type (v for verb, and so on), ``:x`` defines an
index label and ``->x`` points at the head's label. The explicit form of
the standard example sentence is

    rAma_ne/k1->i phala/k2->j kATakara/kr:j->i pAnI/k2->i piyA::v:i

and the same tree can be written with defaults, dropping every ``->ref``
the reader can recover: a token bearing a relation but no head reference
attaches to the nearest verbal token (smallest token distance, ties and
search going rightward first). The unique token left unattached becomes
the root. This notation can express arbitrary dependency trees.

Bracketed segments group tokens: ``[rAma_ne/k1 khIra/k2 khAyI::v]<s>``.
Bare tokens inside a group attach to the group's head verb with a warning.

Tags are matched case-insensitively against a registry; emission keeps
registry casing. ``kr`` is registered both as a relation and (as ``Kr``) a
node tag; the ``/`` versus ``::`` position disambiguates. Tree equality
ignores index labels, which are a serialization artifact: two trees are
equal when surfaces, tags, attachments and groups agree.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .diagnostics import Diagnostic, LerilError, error, warning


class AnnCorraParseError(LerilError):
    """Malformed token or sentence; ``column`` is 1-based where known."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class TagsetError(LerilError):
    """Malformed tagset configuration."""


class EmitError(LerilError):
    """A tree that the linear notation cannot express."""


@dataclass(frozen=True)
class TagDef:
    code: str
    category: str  # "relation" | "node"
    verbal: bool = False
    description: str = ""


class TagRegistry:
    """Tag inventory; lookups fold case, stored codes keep their casing."""

    def __init__(self, tags: Iterable[TagDef]):
        self._relations: dict[str, TagDef] = {}
        self._nodes: dict[str, TagDef] = {}
        for tag in tags:
            if tag.category == "relation":
                self._relations[tag.code.lower()] = tag
            elif tag.category == "node":
                self._nodes[tag.code.lower()] = tag
            else:
                raise ValueError(f"unknown tag category: {tag.category!r}")

    @property
    def relation_tags(self) -> dict[str, str]:
        return {t.code: t.description for t in self._relations.values()}

    @property
    def node_tags(self) -> dict[str, str]:
        return {t.code: t.description for t in self._nodes.values()}

    @property
    def verbal_relation_tags(self) -> set[str]:
        return {t.code for t in self._relations.values() if t.verbal}

    @property
    def verbal_node_tags(self) -> set[str]:
        return {t.code for t in self._nodes.values() if t.verbal}

    def canonical_relation(self, code: str) -> str | None:
        tag = self._relations.get(code.lower())
        return tag.code if tag else None

    def canonical_node(self, code: str) -> str | None:
        tag = self._nodes.get(code.lower())
        return tag.code if tag else None

    def is_verbal(self, rel_tag: str | None, node_tag: str | None) -> bool:
        if node_tag is not None:
            tag = self._nodes.get(node_tag.lower())
            if tag is not None and tag.verbal:
                return True
        if rel_tag is not None:
            tag = self._relations.get(rel_tag.lower())
            if tag is not None and tag.verbal:
                return True
        return False


# The published tag inventory is larger (around 35 tags); the built-in
# registry carries the documented sample and is extended via load_tagset.
DEFAULT_TAGS = (
    TagDef("s", "relation", False, "sentence"),
    TagDef("k1", "relation", False, "karta (agent-like relation)"),
    TagDef("k2", "relation", False, "karma (patient-like relation)"),
    TagDef("k3", "relation", False, "karana (instrument relation)"),
    TagDef("kr", "relation", True, "gerund/absolutive link"),
    TagDef("v", "node", True, "verb"),
    TagDef("Kr", "node", True, "gerund"),
    TagDef("vH", "node", True, "copular verb BE"),
    TagDef("yo", "node", False, "conjunct"),
)


def default_registry() -> TagRegistry:
    return TagRegistry(DEFAULT_TAGS)


def load_tagset(config: str) -> TagRegistry:
    """Build a registry from config text, extending the built-in default.

    Config lines are ``tag TAB relation|node TAB verbal|nonverbal TAB
    description`` (description optional); ``#`` comments and blank lines
    are skipped. An empty config yields the default registry. A config
    line may override a default tag; two config lines for the same tag and
    category are an error.
    """
    tags = list(DEFAULT_TAGS)
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(config.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in raw.split("\t")]
        if len(parts) < 3:
            raise TagsetError(f"line {lineno}: expected tag, category and verbality")
        code, category, verbality = parts[0], parts[1], parts[2]
        description = parts[3] if len(parts) > 3 else ""
        if not code:
            raise TagsetError(f"line {lineno}: empty tag code")
        if category not in ("relation", "node"):
            raise TagsetError(f"line {lineno}: unknown category {category!r}")
        if verbality not in ("verbal", "nonverbal"):
            raise TagsetError(f"line {lineno}: unknown verbality {verbality!r}")
        key = (code.lower(), category)
        if key in seen:
            raise TagsetError(f"line {lineno}: duplicate {category} tag {code!r}")
        seen.add(key)
        tags.append(TagDef(code, category, verbality == "verbal", description))
    return TagRegistry(tags)


@dataclass(frozen=True)
class AnnToken:
    surface: str
    rel_tag: str | None = None
    self_index: str | None = None
    parent_ref: str | None = None
    node_tag: str | None = None


@dataclass
class DepNode:
    position: int
    surface: str
    rel_tag: str | None = None
    node_tag: str | None = None
    index: str | None = field(default=None, compare=False)
    parent: int | None = None
    children: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class Group:
    """Bracketed token span, half-open over token positions."""

    start: int
    stop: int
    tag: str


@dataclass
class DepTree:
    nodes: list[DepNode]
    root: int
    groups: list[Group] = field(default_factory=list)


_TAG_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_LABEL_RE = re.compile(r"[a-z][0-9]*")


def _col(column: int | None, offset: int) -> int:
    return (column or 1) + offset


def parse_token(
    token: str,
    registry: TagRegistry,
    *,
    diagnostics: list[Diagnostic] | None = None,
    column: int | None = None,
) -> AnnToken:
    """Parse a single whitespace-free token.

    Unknown tags parse successfully with a warning appended to
    ``diagnostics``; structural problems raise AnnCorraParseError.
    """
    if not token:
        raise AnnCorraParseError("empty token", column=column)
    n = len(token)
    i = 0
    while i < n:
        ch = token[i]
        if ch in "/:":
            break
        if ch == "-" and token.startswith("->", i):
            break
        if ch in "[]<>":
            raise AnnCorraParseError(
                f"stray {ch!r} inside token {token!r}", column=_col(column, i)
            )
        i += 1
    surface = token[:i]
    if not surface:
        raise AnnCorraParseError(
            f"token {token!r} has no surface text", column=_col(column, 0)
        )

    rel_tag = node_tag = self_index = parent_ref = None

    if i < n and token[i] == "/":
        i += 1
        m = _TAG_RE.match(token, i)
        if m is None:
            raise AnnCorraParseError("missing relation tag after '/'", column=_col(column, i))
        raw = m.group()
        i = m.end()
        rel_tag = registry.canonical_relation(raw)
        if rel_tag is None:
            rel_tag = raw
            if diagnostics is not None:
                diagnostics.append(
                    warning(f"unknown relation tag '{raw}'", column=_col(column, i - len(raw)))
                )
        if i < n and token[i] == ":" and not token.startswith("::", i):
            i += 1
            m = _LABEL_RE.match(token, i)
            if m is None:
                raise AnnCorraParseError(
                    "empty or invalid index after ':'", column=_col(column, i)
                )
            self_index = m.group()
            i = m.end()
        if token.startswith("->", i):
            i += 2
            m = _LABEL_RE.match(token, i)
            if m is None:
                raise AnnCorraParseError(
                    "empty or invalid index after '->'", column=_col(column, i)
                )
            parent_ref = m.group()
            i = m.end()
    elif token.startswith("->", i):
        raise AnnCorraParseError(
            "'->' without a preceding relation tag", column=_col(column, i)
        )

    if token.startswith("::", i):
        i += 2
        m = _TAG_RE.match(token, i)
        if m is None:
            raise AnnCorraParseError("missing node tag after '::'", column=_col(column, i))
        raw = m.group()
        i = m.end()
        node_tag = registry.canonical_node(raw)
        if node_tag is None:
            node_tag = raw
            if diagnostics is not None:
                diagnostics.append(
                    warning(f"unknown node tag '{raw}'", column=_col(column, i - len(raw)))
                )
        if i < n and token[i] == ":" and not token.startswith("::", i):
            if self_index is not None:
                raise AnnCorraParseError(
                    "duplicate self index on token", column=_col(column, i)
                )
            i += 1
            m = _LABEL_RE.match(token, i)
            if m is None:
                raise AnnCorraParseError(
                    "empty or invalid index after ':'", column=_col(column, i)
                )
            self_index = m.group()
            i = m.end()

    if i != n:
        raise AnnCorraParseError(
            f"unexpected text {token[i:]!r} in token {token!r}", column=_col(column, i)
        )
    return AnnToken(surface, rel_tag, self_index, parent_ref, node_tag)


def _nearest_verbal(verbal: list[bool], position: int) -> int | None:
    candidates = [q for q, is_verbal in enumerate(verbal) if is_verbal and q != position]
    if not candidates:
        return None
    return min(candidates, key=lambda q: (abs(q - position), 0 if q > position else 1))


def _is_bare(node: DepNode) -> bool:
    return node.rel_tag is None and node.node_tag is None and node.index is None


def _group_head(nodes: list[DepNode], group: Group) -> int | None:
    candidates = [
        node.position
        for node in nodes[group.start : group.stop]
        if not _is_bare(node)
        and (node.parent is None or not (group.start <= node.parent < group.stop))
    ]
    return candidates[0] if len(candidates) == 1 else None


def resolve(
    tokens: list[AnnToken], registry: TagRegistry
) -> tuple[DepTree | None, list[Diagnostic]]:
    """Build a dependency tree from tokens in surface order.

    Explicit ``->`` references resolve through index labels; tokens with a
    relation but no reference attach to the nearest verbal token. Exactly
    one token must remain unattached; it becomes the root.
    """
    return _resolve(tokens, registry, ())


def _resolve(
    tokens: list[AnnToken], registry: TagRegistry, groups: tuple[Group, ...]
) -> tuple[DepTree | None, list[Diagnostic]]:
    diagnostics: list[Diagnostic] = []
    if not tokens:
        return None, [error("no tokens to resolve")]
    nodes = [
        DepNode(
            position=p,
            surface=t.surface,
            rel_tag=t.rel_tag,
            node_tag=t.node_tag,
            index=t.self_index,
        )
        for p, t in enumerate(tokens)
    ]

    labels: dict[str, int] = {}
    failed = False
    for node in nodes:
        if node.index is not None:
            if node.index in labels:
                diagnostics.append(error(f"duplicate index label '{node.index}'"))
                failed = True
            labels[node.index] = node.position

    verbal = [registry.is_verbal(n.rel_tag, n.node_tag) for n in nodes]
    for p, token in enumerate(tokens):
        if token.parent_ref is not None:
            target = labels.get(token.parent_ref)
            if target is None:
                diagnostics.append(error(f"undefined index label '{token.parent_ref}'"))
                failed = True
            elif target == p:
                diagnostics.append(error(f"token '{token.surface}' refers to itself"))
                failed = True
            else:
                nodes[p].parent = target
        elif token.rel_tag is not None:
            target = _nearest_verbal(verbal, p)
            if target is None:
                diagnostics.append(
                    error(f"no verbal token available to attach '{token.surface}'")
                )
                failed = True
            else:
                nodes[p].parent = target
    if failed:
        return None, diagnostics

    # Bare tokens attach to the head of their innermost group.
    for group in sorted(groups, key=lambda g: g.stop - g.start):
        head = None
        head_known = False
        for node in nodes[group.start : group.stop]:
            if not _is_bare(node) or node.parent is not None:
                continue
            if not head_known:
                head = _group_head(nodes, group)
                head_known = True
            if head is None or not verbal[head]:
                diagnostics.append(
                    error(
                        f"group '<{group.tag}>' has no verbal head for bare token "
                        f"'{node.surface}'"
                    )
                )
                failed = True
                continue
            node.parent = head
            diagnostics.append(
                warning(
                    f"bare token '{node.surface}' attached to group head "
                    f"'{nodes[head].surface}'"
                )
            )
    if failed:
        return None, diagnostics

    for start in range(len(nodes)):
        seen: set[int] = set()
        p: int | None = start
        while p is not None:
            if p in seen:
                diagnostics.append(error("cycle in parent references"))
                return None, diagnostics
            seen.add(p)
            p = nodes[p].parent

    roots = [node.position for node in nodes if node.parent is None]
    if not roots:
        diagnostics.append(error("no root: every token has a parent"))
        return None, diagnostics
    if len(roots) > 1:
        surfaces = ", ".join(f"'{nodes[r].surface}'" for r in roots)
        diagnostics.append(error(f"multiple roots: {surfaces}"))
        return None, diagnostics

    for node in nodes:
        if node.parent is not None:
            nodes[node.parent].children.append(node.position)
    return DepTree(nodes, roots[0], list(groups)), diagnostics


_CLOSER_RE = re.compile(r"\]<([^<>\[\]]*)>$")


def parse_sentence(
    line: str, registry: TagRegistry
) -> tuple[DepTree | None, list[Diagnostic]]:
    """Parse one sentence line, including bracket groups, and resolve it."""
    diagnostics: list[Diagnostic] = []
    tokens: list[AnnToken] = []
    groups: list[Group] = []
    stack: list[int] = []
    failed = False

    for m in re.finditer(r"\S+", line):
        chunk = m.group()
        column = m.start() + 1

        opens = 0
        while chunk.startswith("["):
            opens += 1
            chunk = chunk[1:]
        closers: list[str] = []
        while True:
            cm = _CLOSER_RE.search(chunk)
            if cm is None:
                break
            closers.append(cm.group(1))
            chunk = chunk[: cm.start()]
        if chunk.endswith("]"):
            diagnostics.append(
                error("group close without a '<tag>'", column=column)
            )
            failed = True
            continue

        for _ in range(opens):
            if len(stack) >= 2:
                diagnostics.append(
                    warning("group nesting deeper than one level", column=column)
                )
            stack.append(len(tokens))

        if chunk:
            try:
                token = parse_token(
                    chunk, registry, diagnostics=diagnostics, column=column + opens
                )
            except AnnCorraParseError as exc:
                diagnostics.append(error(str(exc), column=exc.column))
                failed = True
            else:
                tokens.append(token)

        for tag in reversed(closers):
            if not stack:
                diagnostics.append(error("unbalanced ']'", column=column))
                failed = True
                continue
            start = stack.pop()
            if start == len(tokens):
                diagnostics.append(error("empty group", column=column))
                failed = True
                continue
            if not tag:
                diagnostics.append(error("empty group tag", column=column))
                failed = True
                continue
            if (
                registry.canonical_relation(tag) is None
                and registry.canonical_node(tag) is None
            ):
                diagnostics.append(warning(f"unknown group tag '{tag}'", column=column))
            groups.append(Group(start, len(tokens), tag))

    if stack:
        diagnostics.append(error("unbalanced '['"))
        failed = True
    if failed:
        return None, diagnostics
    if not tokens:
        return None, diagnostics + [error("empty sentence")]

    tree, resolve_diags = _resolve(tokens, registry, tuple(groups))
    return tree, diagnostics + resolve_diags


def validate_tree(tree: DepTree) -> list[Diagnostic]:
    """Structural re-validation of a (possibly hand-built) tree."""
    diagnostics: list[Diagnostic] = []
    nodes = tree.nodes
    for pos, node in enumerate(nodes):
        if node.position != pos:
            diagnostics.append(
                error(f"node at list position {pos} carries position {node.position}")
            )
    roots = [n.position for n in nodes if n.parent is None]
    if len(roots) > 1:
        diagnostics.append(error(f"multiple roots: {len(roots)} parentless nodes"))
    elif not roots:
        diagnostics.append(error("no root: every node has a parent"))
    elif roots[0] != tree.root:
        diagnostics.append(error("root field does not name the parentless node"))

    for node in nodes:
        for child in node.children:
            if not (0 <= child < len(nodes)) or nodes[child].parent != node.position:
                diagnostics.append(
                    error(f"child link {node.position}->{child} is not mirrored by a parent link")
                )
        if node.parent is not None:
            if not (0 <= node.parent < len(nodes)):
                diagnostics.append(error(f"node {node.position} has an out-of-range parent"))
            elif node.position not in nodes[node.parent].children:
                diagnostics.append(
                    error(
                        f"parent link {node.position}->{node.parent} is not mirrored "
                        "by a child link"
                    )
                )

    for start in range(len(nodes)):
        seen: set[int] = set()
        p: int | None = start
        while p is not None:
            if p in seen:
                diagnostics.append(error("cycle in parent references"))
                return diagnostics
            seen.add(p)
            parent = nodes[p].parent
            p = parent if parent is not None and 0 <= parent < len(nodes) else None

    labels: dict[str, int] = {}
    for node in nodes:
        if node.index is not None:
            if node.index in labels:
                diagnostics.append(error(f"duplicate index label '{node.index}'"))
            labels[node.index] = node.position
    return diagnostics


_LABEL_LETTERS = "ijklmnopqrstuvwxyzabcdefgh"


def _index_label(k: int) -> str:
    if k < len(_LABEL_LETTERS):
        return _LABEL_LETTERS[k]
    return f"i{k - len(_LABEL_LETTERS) + 1}"


def emit_explicit(tree: DepTree) -> str:
    """Linear form with every recoverable ``->parent`` written out.

    Index labels are assigned deterministically: labeled nodes get i, j,
    k, ... in surface order. The root keeps a label whenever it has a tag
    to carry it, mirroring the published examples.
    """
    return _emit(tree, minimal=False, registry=None)


def emit_minimal(tree: DepTree, registry: TagRegistry) -> str:
    """Linear form that drops every ``->parent`` the defaults recover.

    A reference is dropped exactly when nearest-verbal attachment would
    pick the true parent; index labels no kept reference needs are dropped
    too (except on the root, see emit_explicit).
    """
    return _emit(tree, minimal=True, registry=registry)


def _emit(tree: DepTree, minimal: bool, registry: TagRegistry | None) -> str:
    nodes = tree.nodes
    verbal = (
        [registry.is_verbal(n.rel_tag, n.node_tag) for n in nodes] if minimal else None
    )

    keep: dict[int, int] = {}
    for node in nodes:
        if node.parent is None:
            continue
        if node.rel_tag is None:
            head = _emit_group_head(tree, node.position)
            if head != node.parent:
                raise EmitError(
                    f"cannot serialize node '{node.surface}': no relation tag and no "
                    "covering group headed by its parent"
                )
            continue
        if minimal and _nearest_verbal(verbal, node.position) == node.parent:
            continue
        keep[node.position] = node.parent

    labeled = set(keep.values())
    root_node = nodes[tree.root]
    if root_node.rel_tag is not None or root_node.node_tag is not None:
        labeled.add(tree.root)
    label = {pos: _index_label(k) for k, pos in enumerate(sorted(labeled))}

    opens: dict[int, list[Group]] = defaultdict(list)
    closes: dict[int, list[Group]] = defaultdict(list)
    for group in tree.groups:
        opens[group.start].append(group)
        closes[group.stop - 1].append(group)
    for entries in opens.values():
        entries.sort(key=lambda g: -g.stop)  # outer groups open first
    for entries in closes.values():
        entries.sort(key=lambda g: -g.start)  # inner groups close first

    chunks = []
    for node in nodes:
        bits = [node.surface]
        lbl = label.get(node.position)
        placed = False
        if node.rel_tag is not None:
            part = f"/{node.rel_tag}"
            if lbl is not None:
                part += f":{lbl}"
                placed = True
            if node.position in keep:
                part += f"->{label[keep[node.position]]}"
            bits.append(part)
        if node.node_tag is not None:
            part = f"::{node.node_tag}"
            if lbl is not None and not placed:
                part += f":{lbl}"
                placed = True
            bits.append(part)
        if lbl is not None and not placed:
            raise EmitError(
                f"node '{node.surface}' needs an index label but has no tag to carry it"
            )
        text = "".join(bits)
        prefix = "[" * len(opens.get(node.position, ()))
        suffix = "".join(f"]<{g.tag}>" for g in closes.get(node.position, ()))
        chunks.append(prefix + text + suffix)
    return " ".join(chunks)


def _emit_group_head(tree: DepTree, position: int) -> int | None:
    covering = [g for g in tree.groups if g.start <= position < g.stop]
    if not covering:
        return None
    innermost = min(covering, key=lambda g: g.stop - g.start)
    return _group_head(tree.nodes, innermost)


def to_interchange(tree: DepTree) -> dict:
    """JSON-shaped export of one tree."""
    return {
        "nodes": [
            {
                "position": n.position,
                "surface": n.surface,
                "rel": n.rel_tag,
                "node": n.node_tag,
                "parent": n.parent,
            }
            for n in tree.nodes
        ],
        "root": tree.root,
        "groups": [{"start": g.start, "stop": g.stop, "tag": g.tag} for g in tree.groups],
    }


def iter_sentences(text: str) -> Iterator[tuple[str | None, int, str]]:
    """Yield (id, line number, sentence line) from corpus-style text.

    ``#`` lines are comments; the first word of a comment names the next
    sentence. Blank lines are skipped.
    """
    pending: str | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            pending = body.split()[0] if body else None
            continue
        yield pending, lineno, line
        pending = None
