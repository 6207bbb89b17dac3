"""Referring-expression extraction from tokenized, timestamped utterances.

A small cascade of noun-phrase patterns is tried left to right, most specific
first, over the token stream.  Matched spans become ReferringExpression
records carrying the six-way syntactic category plus semantic features
(head type, number, attribute constraints, identifier); unmatched spans are
skipped so recognition noise degrades output instead of rejecting it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .domain import Category, PLURAL_UNNUMBERED, SINGULAR, NumberConstraint, ReferringExpression

log = logging.getLogger(__name__)

PRONOUNS_SINGULAR = {"it"}
PRONOUNS_PLURAL = {"they", "them"}
LOCATIVES = {"here", "there"}
DEMONSTRATIVES_SINGULAR = {"this", "that"}
DEMONSTRATIVES_PLURAL = {"these", "those"}
DEFINITE_ARTICLE = "the"


@dataclass(frozen=True)
class Token:
    text: str
    begin_time: float
    end_time: float


@dataclass
class Lexicon:
    """Vocabulary boundary: words outside these maps carry no semantics."""

    head_nouns: dict[str, tuple[str, bool]]  # word -> (semantic type, plural?)
    adjective_values: dict[str, tuple[str, Any]]  # word -> (attribute, value)
    number_words: dict[str, int]
    identifier_markers: set[str] = field(default_factory=lambda: {"number"})

    def head(self, word: str) -> Optional[tuple[str, bool]]:
        return self.head_nouns.get(word.lower())

    def adjective(self, word: str) -> Optional[tuple[str, Any]]:
        return self.adjective_values.get(word.lower())

    def number(self, word: str) -> Optional[int]:
        w = word.lower()
        if w in self.number_words:
            return self.number_words[w]
        if w.isdigit():
            return int(w)
        return None

    def is_marker(self, word: str) -> bool:
        return word.lower() in self.identifier_markers


def lexicon_from_dict(doc: dict[str, Any]) -> Lexicon:
    heads = {}
    for word, rec in doc.get("head_nouns", {}).items():
        heads[word.lower()] = (str(rec["type"]), bool(rec.get("plural", False)))
    adjectives = {
        word.lower(): (str(pair[0]), pair[1])
        for word, pair in doc.get("adjectives", {}).items()
    }
    numbers = {w.lower(): int(n) for w, n in doc.get("numbers", {}).items()}
    markers = {w.lower() for w in doc.get("identifier_markers", ["number"])}
    return Lexicon(heads, adjectives, numbers, markers)


def load_lexicon(path: Union[str, Path]) -> Lexicon:
    with open(path, "r", encoding="utf-8") as fh:
        return lexicon_from_dict(json.load(fh))


def tokens_from_text(text: str, begin: float = 0.0, word_ms: float = 150.0,
                     gap_ms: float = 50.0) -> list[Token]:
    """Convenience tokenizer for typed input: even per-word timestamps."""
    tokens = []
    t = begin
    for word in text.lower().split():
        tokens.append(Token(word, t, t + word_ms))
        t += word_ms + gap_ms
    return tokens


@dataclass
class _Span:
    """One matched pattern instance over tokens[start:end]."""

    start: int
    end: int
    category: Category
    target_semantic_type: Optional[str] = None
    target_number: NumberConstraint = None
    attribute_constraints: dict[str, Any] = field(default_factory=dict)
    target_identifier: Optional[str] = None


def _scan_modifiers(tokens: list[Token], i: int, lexicon: Lexicon,
                    allow_numbers: bool) -> tuple[int, Optional[int], dict[str, Any]]:
    """Consume number words then adjectives (unknown words tolerated) up to a head.

    Returns (next index, numeral or None, attribute constraints).  Unknown
    words are absorbed without contributing a constraint, provided a head noun
    eventually terminates the phrase; the caller rejects the span otherwise.
    """
    number: Optional[int] = None
    constraints: dict[str, Any] = {}
    while i < len(tokens):
        word = tokens[i].text
        if lexicon.head(word) or word == "one" and not allow_numbers:
            break
        n = lexicon.number(word)
        if allow_numbers and n is not None and number is None:
            number = n
            i += 1
            continue
        adj = lexicon.adjective(word)
        if adj is not None:
            constraints[adj[0]] = adj[1]
            i += 1
            continue
        if lexicon.head(word) is None and word not in _STOP_WORDS and not lexicon.is_marker(word):
            # Out-of-vocabulary modifier: tolerated, constraint dropped.
            log.debug("dropping unknown modifier %r", word)
            i += 1
            continue
        break
    return i, number, constraints


_STOP_WORDS = (PRONOUNS_SINGULAR | PRONOUNS_PLURAL | LOCATIVES
               | DEMONSTRATIVES_SINGULAR | DEMONSTRATIVES_PLURAL
               | {DEFINITE_ARTICLE, "one", "ones", "a", "an", "and", "with"})


def _identifier_tail(tokens: list[Token], i: int, lexicon: Lexicon) -> tuple[int, Optional[str]]:
    """Absorb an identifier marker plus its tail word: 'number eight' -> 'eight'."""
    if i + 1 < len(tokens) and lexicon.is_marker(tokens[i].text):
        return i + 2, tokens[i + 1].text
    return i, None


def _match_noun_phrase(tokens: list[Token], i: int, lexicon: Lexicon,
                       determiner_len: int, category: Category,
                       want_plural: Optional[bool]) -> Optional[_Span]:
    """Shared tail for the determiner patterns: (num*) (adj*) head (marker tail)?"""
    j, number, constraints = _scan_modifiers(tokens, i + determiner_len, lexicon,
                                             allow_numbers=True)
    if j >= len(tokens):
        return None
    head = lexicon.head(tokens[j].text)
    if head is None:
        return None
    sem_type, plural = head
    if want_plural is not None and plural != want_plural:
        return None
    j += 1
    j, ident = _identifier_tail(tokens, j, lexicon)
    if number is not None:
        target_number: NumberConstraint = number
    elif plural:
        target_number = PLURAL_UNNUMBERED
    else:
        target_number = SINGULAR
    return _Span(i, j, category, sem_type, target_number, constraints, ident)


def _match_at(tokens: list[Token], i: int, lexicon: Lexicon) -> Optional[_Span]:
    word = tokens[i].text

    # (these|those) num* adj* plural-noun  -- most specific first
    if word in DEMONSTRATIVES_PLURAL:
        span = _match_noun_phrase(tokens, i, lexicon, 1, Category.DEMONSTRATIVE,
                                  want_plural=True)
        if span:
            return span
        # (these|those) num* adj* ones
        j, number, constraints = _scan_modifiers(tokens, i + 1, lexicon, True)
        if j < len(tokens) and tokens[j].text == "ones":
            return _Span(i, j + 1, Category.DEMONSTRATIVE, None,
                         number if number is not None else PLURAL_UNNUMBERED,
                         constraints)
        return _Span(i, i + 1, Category.DEMONSTRATIVE, None, PLURAL_UNNUMBERED)

    if word in PRONOUNS_PLURAL:
        return _Span(i, i + 1, Category.PRONOUN, None, PLURAL_UNNUMBERED)
    if word in PRONOUNS_SINGULAR:
        return _Span(i, i + 1, Category.PRONOUN, None, SINGULAR)

    # (this|that) adj* noun, or bare/one-headed demonstrative
    if word in DEMONSTRATIVES_SINGULAR:
        span = _match_noun_phrase(tokens, i, lexicon, 1, Category.DEMONSTRATIVE,
                                  want_plural=False)
        if span:
            return span
        j, _, constraints = _scan_modifiers(tokens, i + 1, lexicon, False)
        if j < len(tokens) and tokens[j].text == "one":
            return _Span(i, j + 1, Category.DEMONSTRATIVE, None, SINGULAR, constraints)
        return _Span(i, i + 1, Category.DEMONSTRATIVE, None, SINGULAR)

    # the adj* noun, or "the adj* one"
    if word == DEFINITE_ARTICLE:
        span = _match_noun_phrase(tokens, i, lexicon, 1, Category.DEFINITE,
                                  want_plural=None)
        if span:
            return span
        j, _, constraints = _scan_modifiers(tokens, i + 1, lexicon, False)
        if j < len(tokens) and tokens[j].text == "one":
            return _Span(i, j + 1, Category.DEFINITE, None, SINGULAR, constraints)
        return None

    if word in LOCATIVES:
        return _Span(i, i + 1, Category.LOCATIVE)

    # bare head noun with an identifier tail: "house number eight"
    head = lexicon.head(word)
    if head is not None:
        j, ident = _identifier_tail(tokens, i + 1, lexicon)
        if ident is not None:
            return _Span(i, j, Category.FULL, head[0], SINGULAR,
                         target_identifier=ident)
    return None


def _match_all(tokens: list[Token], lexicon: Lexicon) -> list[_Span]:
    spans: list[_Span] = []
    i = 0
    while i < len(tokens):
        span = _match_at(tokens, i, lexicon)
        if span is None:
            i += 1
            continue
        spans.append(span)
        i = span.end
    return spans


def expression_token_spans(tokens: list[Token],
                           lexicon: Lexicon) -> list[tuple[int, int]]:
    """Half-open token index ranges of the matched expressions, in order."""
    return [(s.start, s.end) for s in _match_all(tokens, lexicon)]


def extract_referring_expressions(tokens: list[Token],
                                  lexicon: Lexicon) -> list[ReferringExpression]:
    """Extract expressions in utterance order; unmatched spans are skipped."""
    spans = _match_all(tokens, lexicon)
    expressions = []
    for order, span in enumerate(spans, start=1):
        expressions.append(ReferringExpression(
            surface=" ".join(t.text for t in tokens[span.start:span.end]),
            category=span.category,
            order_index=order,
            begin_time=tokens[span.start].begin_time,
            target_identifier=span.target_identifier,
            target_semantic_type=span.target_semantic_type,
            target_number=span.target_number,
            attribute_constraints=dict(span.attribute_constraints),
        ))
    return expressions


def classify_syntactic_category(surface: str, lexicon: Lexicon) -> Optional[Category]:
    """Category of a single expression span, or None when no pattern matches."""
    tokens = tokens_from_text(surface)
    span = _match_at(tokens, 0, lexicon) if tokens else None
    if span is None or span.end != len(tokens):
        return None
    return span.category


def extract_semantic_features(surface: str, lexicon: Lexicon) -> Optional[ReferringExpression]:
    """Full feature record for a single expression span, at order index 1."""
    tokens = tokens_from_text(surface)
    found = extract_referring_expressions(tokens, lexicon)
    return found[0] if found else None


def make_empty_expression(begin_time: float) -> ReferringExpression:
    """Synthesized expression for a turn that carries input but no expression."""
    return ReferringExpression(surface="", category=Category.EMPTY,
                               order_index=1, begin_time=begin_time)
