"""Tokenization, normalization, and stopword lists shared by the rule-based modules.

Everything here is deterministic and dependency-free: no linguistic models,
just character-level rules that behave identically on every platform.
"""

from __future__ import annotations

import re
import unicodedata

# Small function-word lists; enough to keep rule-based extraction from
# treating articles and pronouns as entities. Extend via config, not here.
STOPWORDS: dict[str, frozenset[str]] = {
    "en": frozenset(
        """a an the this that these those it its he she they them his her their
        i you we me us my your our of in on at to from by with for as is are was
        were be been being have has had do does did not no and or if when unless
        but so then than there here what which who whom whose how why all any
        each every some such only also very can could will would shall should
        may might must""".split()
    ),
    "de": frozenset(
        """der die das den dem des ein eine einen einem einer eines und oder
        wenn falls sofern aber denn doch dann als wie wer wen wem wessen ist
        sind war waren sein seine seiner seinem seinen gewesen werden wird
        wurde wurden hat haben hatte hatten nicht kein keine keinen keinem
        keiner zu zum zur von vom im in an am auf bei mit für aus nach über
        unter durch gegen ohne um sie er es ich wir ihr ihnen ihm ihn man
        sich auch nur noch schon sehr alle jede jeder jedes dies diese dieser
        dieses""".split()
    ),
}

_WORD_RE = re.compile(r"\w+([\-']\w+)*", re.UNICODE)
_SENTENCE_END_RE = re.compile(r"(?<=[.!?;])\s+")


def stopwords_for(language: str) -> frozenset[str]:
    """Stopwords for a BCP-47 tag; unknown languages get the empty set."""
    base = language.split("-")[0].lower()
    return STOPWORDS.get(base, frozenset())


def normalize_label(label: str) -> str:
    """Case-fold and collapse internal whitespace; the entity-identity key."""
    return " ".join(label.casefold().split())


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Split into (token, start, end) word tokens; punctuation is skipped.

    Offsets index unicode scalar values of ``text``.
    """
    return [(m.group(0), m.start(), m.end()) for m in _WORD_RE.finditer(text)]


def tokenize_with_punct(text: str) -> list[tuple[str, int, int, bool]]:
    """Like :func:`tokenize` but yields punctuation runs too.

    Returns (token, start, end, is_word) tuples covering every non-space
    character of ``text`` in order.
    """
    out: list[tuple[str, int, int, bool]] = []
    pos = 0
    for m in _WORD_RE.finditer(text):
        for pm in re.finditer(r"\S+", text[pos:m.start()]):
            out.append((pm.group(0), pos + pm.start(), pos + pm.end(), False))
        out.append((m.group(0), m.start(), m.end(), True))
        pos = m.end()
    for pm in re.finditer(r"\S+", text[pos:]):
        out.append((pm.group(0), pos + pm.start(), pos + pm.end(), False))
    return out


def split_sentences(text: str) -> list[tuple[str, int]]:
    """Naive sentence split on terminal punctuation; returns (sentence, offset)."""
    sentences: list[tuple[str, int]] = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(text):
        chunk = text[start:m.start()]
        if chunk.strip():
            sentences.append((chunk, start))
        start = m.end()
    tail = text[start:]
    if tail.strip():
        sentences.append((tail, start))
    return sentences


def content_tokens(text: str, language: str = "en") -> list[str]:
    """Case-folded word tokens that are not stopwords and have length >= 3."""
    stops = stopwords_for(language)
    out = []
    for token, _, _ in tokenize(text):
        folded = token.casefold()
        if len(folded) >= 3 and folded not in stops:
            out.append(folded)
    return out


def is_capitalized(token: str) -> bool:
    """True when the token starts with an uppercase letter."""
    return bool(token) and unicodedata.category(token[0]) == "Lu"


def is_number(token: str) -> bool:
    return bool(token) and all(ch.isdigit() for ch in token)
