"""Logic trees for conditionals and conjunctions, plus decomposition variants.

A sentence is parsed on cue words alone (no syntax): conditional cues scope
widest, then disjunction, then conjunction. The tree keeps every matched cue
token, so the original token sequence can be reassembled from leaves plus
cues, and the two decomposition strategies can phrase their output with the
sentence's own connectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Union

from .textnorm import tokenize

REPLICATE = "replicate_condition"
OMIT = "omit_condition"

CUE_WORDS: dict[str, dict[str, frozenset[str]]] = {
    "en": {
        "cond": frozenset({"if", "when", "unless"}),
        "or": frozenset({"or"}),
        "and": frozenset({"and"}),
    },
    "de": {
        "cond": frozenset({"wenn", "falls", "sofern"}),
        "or": frozenset({"oder"}),
        "and": frozenset({"und"}),
    },
}


@dataclass(frozen=True)
class Leaf:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("leaf text must be non-empty")


@dataclass(frozen=True)
class And:
    children: tuple["LogicTree", ...]
    cues: tuple[str, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("conjunction needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple["LogicTree", ...]
    cues: tuple[str, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("disjunction needs at least two children")


@dataclass(frozen=True)
class Cond:
    antecedent: "LogicTree"
    consequent: "LogicTree"
    cue: str


LogicTree = Union[Leaf, And, Or, Cond]


@dataclass(frozen=True)
class Decomposition:
    facts: tuple[str, ...]
    strategy: str


def _cues_for(language: str) -> dict[str, frozenset[str]]:
    base = language.split("-")[0].casefold()
    try:
        return CUE_WORDS[base]
    except KeyError:
        raise ValueError(f"no cue lexicon for language {language!r}") from None


def _clean(segment: str) -> str:
    return segment.strip().strip(",;").rstrip(".!?").strip()


def _parse(text: str, cues: dict[str, frozenset[str]]) -> LogicTree:
    tokens = tokenize(text)
    if not tokens:
        return Leaf(_clean(text) or text.strip() or text)

    # conditional scopes widest
    first_token, _, first_end = tokens[0]
    if first_token.casefold() in cues["cond"]:
        comma = text.find(",", first_end)
        if comma != -1:
            antecedent = _clean(text[first_end:comma])
            consequent = text[comma + 1 :]
            if antecedent and _clean(consequent):
                return Cond(
                    antecedent=_parse(antecedent, cues),
                    consequent=_parse(consequent, cues),
                    cue=first_token,
                )
    for token, start, end in tokens[1:]:
        if token.casefold() in cues["cond"]:
            consequent = _clean(text[:start])
            antecedent = _clean(text[end:])
            if consequent and antecedent:
                return Cond(
                    antecedent=_parse(antecedent, cues),
                    consequent=_parse(consequent, cues),
                    cue=token,
                )
            break

    # then disjunction, then conjunction, so "and" binds tighter
    for kind in ("or", "and"):
        segments = _split_on(text, tokens, cues[kind])
        if segments is not None:
            parts, matched = segments
            children = tuple(_parse(part, cues) for part in parts)
            node = Or if kind == "or" else And
            return node(children=children, cues=tuple(matched))

    cleaned = _clean(text)
    return Leaf(cleaned if cleaned else text.strip())


def _split_on(text: str, tokens, cue_words: frozenset[str]):
    """Split at every cue token with non-empty text on both sides.

    Returns (segments, matched cues) or None when no usable cue exists.
    """
    positions = []
    for token, start, end in tokens:
        if token.casefold() in cue_words:
            positions.append((token, start, end))
    if not positions:
        return None
    segments = []
    matched = []
    cursor = 0
    for token, start, end in positions:
        left = text[cursor:start]
        if not _clean(left):
            continue
        rest = text[end:]
        if not _clean(rest):
            continue
        segments.append(left)
        matched.append(token)
        cursor = end
    if not matched:
        return None
    segments.append(text[cursor:])
    return segments, matched


def parse_logic(sentence: str, language: str = "en") -> LogicTree:
    """Cue-driven parse; total, every input yields some tree.

    A sentence in which no split applies comes back as one verbatim Leaf,
    punctuation included. Leaves produced by actual splits are trimmed of
    outer punctuation (the tokens are what the round-trip invariant
    preserves, not the commas).
    """
    if not sentence.strip():
        raise ValueError("sentence must be non-empty")
    tree = _parse(sentence, _cues_for(language))
    if isinstance(tree, Leaf):
        return Leaf(sentence.strip())
    return tree


def render(tree: LogicTree) -> str:
    """Surface text of a subtree with its own connectives restored."""
    if isinstance(tree, Leaf):
        return tree.text
    if isinstance(tree, (And, Or)):
        out = [render(tree.children[0])]
        for cue, child in zip(tree.cues, tree.children[1:]):
            out.append(cue)
            out.append(render(child))
        return " ".join(out)
    return f"{tree.cue} {render(tree.antecedent)}, {render(tree.consequent)}"


def has_condition(tree: LogicTree) -> bool:
    if isinstance(tree, Cond):
        return True
    if isinstance(tree, (And, Or)):
        return any(has_condition(child) for child in tree.children)
    return False


def _replicate(tree: LogicTree, prefixes: tuple[tuple[str, str], ...]) -> list[str]:
    def prefixed(text: str) -> str:
        parts = [f"{cue.casefold()} {condition}" for cue, condition in prefixes]
        parts.append(text)
        return ", ".join(parts)

    if isinstance(tree, Leaf):
        return [prefixed(tree.text)]
    if isinstance(tree, And):
        out = []
        for child in tree.children:
            out.extend(_replicate(child, prefixes))
        return out
    if isinstance(tree, Or):
        return [prefixed(render(tree))]
    return _replicate(
        tree.consequent, prefixes + ((tree.cue, render(tree.antecedent)),)
    )


def _omit(tree: LogicTree) -> list[str]:
    if isinstance(tree, Leaf):
        return [tree.text]
    if isinstance(tree, And):
        out = []
        for child in tree.children:
            out.extend(_omit(child))
        return out
    if isinstance(tree, Or):
        return [render(tree)]
    return [f"{render(tree.antecedent)} (condition)"] + _omit(tree.consequent)


def enumerate_decompositions(tree: LogicTree) -> list[Decomposition]:
    """Atomic-fact variants of a tree.

    Conjunctions split into one fact per conjunct; disjunctions never split.
    A conditional creates the one real choice: replicate the condition onto
    every conjunct, or emit it once as a standalone condition fact. Without
    any conditional both strategies coincide and one variant is returned.
    """
    replicated = tuple(_replicate(tree, ()))
    if not has_condition(tree):
        return [Decomposition(facts=replicated, strategy=REPLICATE)]
    return [
        Decomposition(facts=replicated, strategy=REPLICATE),
        Decomposition(facts=tuple(_omit(tree)), strategy=OMIT),
    ]


def fact_count_bounds(tree: LogicTree) -> tuple[int, int]:
    """(min, max) fact counts an annotator can legitimately produce.

    The minimum is the whole sentence as a single fact; the maximum is the
    largest decomposition variant.
    """
    variants = enumerate_decompositions(tree)
    return (1, max(len(v.facts) for v in variants))


def encode_logic_tree(tree: LogicTree) -> dict[str, Any]:
    if isinstance(tree, Leaf):
        return {"type": "leaf", "text": tree.text}
    if isinstance(tree, And):
        return {
            "type": "and",
            "children": [encode_logic_tree(c) for c in tree.children],
            "cues": list(tree.cues),
        }
    if isinstance(tree, Or):
        return {
            "type": "or",
            "children": [encode_logic_tree(c) for c in tree.children],
            "cues": list(tree.cues),
        }
    return {
        "type": "cond",
        "cue": tree.cue,
        "antecedent": encode_logic_tree(tree.antecedent),
        "consequent": encode_logic_tree(tree.consequent),
    }


def decode_logic_tree(payload: Mapping[str, Any]) -> LogicTree:
    kind = payload["type"]
    if kind == "leaf":
        return Leaf(text=payload["text"])
    if kind == "and":
        return And(
            children=tuple(decode_logic_tree(c) for c in payload["children"]),
            cues=tuple(payload["cues"]),
        )
    if kind == "or":
        return Or(
            children=tuple(decode_logic_tree(c) for c in payload["children"]),
            cues=tuple(payload["cues"]),
        )
    if kind == "cond":
        return Cond(
            antecedent=decode_logic_tree(payload["antecedent"]),
            consequent=decode_logic_tree(payload["consequent"]),
            cue=payload["cue"],
        )
    raise ValueError(f"unknown logic tree node type {kind!r}")


def encode_decomposition(decomposition: Decomposition) -> dict[str, Any]:
    return {
        "facts": list(decomposition.facts),
        "strategy": decomposition.strategy,
    }
