"""Text normalization: tokenize, stopword removal, rule-based lemmatization.

The pipeline order is fixed: tokenize (ASCII alphanumeric runs, lowercased),
remove stopwords, lemmatize.  The lemmatizer is deterministic: an exception
table is consulted first, then ordered suffix rules where the first matching
rule wins.  Both the stoplist and the rule table ship as data files and can
be overridden.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Split on anything that is not ASCII alphanumeric; lowercase the rest."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def remove_stopwords(tokens: list[str], stoplist: set[str]) -> list[str]:
    return [t for t in tokens if t not in stoplist]


@dataclass(frozen=True)
class SuffixRule:
    pattern: str
    replacement: str  # "" means strip the suffix
    min_stem_len: int


@dataclass(frozen=True)
class Lemmatizer:
    exceptions: dict[str, str]
    rules: tuple[SuffixRule, ...]

    def lemma(self, token: str) -> str:
        mapped = self.exceptions.get(token)
        if mapped is not None:
            return mapped
        for rule in self.rules:
            if token.endswith(rule.pattern):
                stem = token[: len(token) - len(rule.pattern)]
                if len(stem) >= rule.min_stem_len:
                    return stem + rule.replacement
        return token

    def __call__(self, tokens: list[str]) -> list[str]:
        return [self.lemma(t) for t in tokens]


def parse_lemma_rules(text: str) -> Lemmatizer:
    """Parse a rules file: lines ``exception <from> <to>`` and
    ``suffix <pattern> <replacement> <min_stem_len>``; ``-`` denotes the
    empty replacement; ``#`` starts a comment."""
    exceptions: dict[str, str] = {}
    rules: list[SuffixRule] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "exception" and len(parts) == 3:
            exceptions[parts[1]] = parts[2]
        elif parts[0] == "suffix" and len(parts) == 4:
            repl = "" if parts[2] == "-" else parts[2]
            rules.append(SuffixRule(parts[1], repl, int(parts[3])))
        else:
            raise ValueError(f"bad lemma rule line: {raw!r}")
    return Lemmatizer(exceptions=exceptions, rules=tuple(rules))


def _read_data(name: str) -> str:
    return resources.files("genreclf.data").joinpath(name).read_text(encoding="utf-8")


def load_lemmatizer(path: str | Path | None = None) -> Lemmatizer:
    text = Path(path).read_text(encoding="utf-8") if path else _read_data("lemma_rules.txt")
    return parse_lemma_rules(text)


def load_stoplist(path: str | Path | None = None) -> set[str]:
    """One word per line, ``#`` comments allowed."""
    text = Path(path).read_text(encoding="utf-8") if path else _read_data("stoplist.txt")
    words = set()
    for raw in text.splitlines():
        word = raw.split("#", 1)[0].strip()
        if word:
            words.add(word.lower())
    return words


_DEFAULT_LEMMATIZER: Lemmatizer | None = None


def lemmatize(tokens: list[str], lemmatizer: Lemmatizer | None = None) -> list[str]:
    global _DEFAULT_LEMMATIZER
    if lemmatizer is None:
        if _DEFAULT_LEMMATIZER is None:
            _DEFAULT_LEMMATIZER = load_lemmatizer()
        lemmatizer = _DEFAULT_LEMMATIZER
    return lemmatizer(tokens)


def preprocess(
    text: str,
    stoplist: set[str] | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> list[str]:
    """tokenize -> remove stopwords -> lemmatize, in that order."""
    if stoplist is None:
        stoplist = load_stoplist()
    return lemmatize(remove_stopwords(tokenize(text), stoplist), lemmatizer)
