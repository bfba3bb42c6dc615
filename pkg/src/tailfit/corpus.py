"""Wordlist and frequency-table TSV ingestion.

Wordlist TSV: columns ``language`` and ``word``; a word is a space-separated
sequence of segment tokens. Frequency TSV: ``language``, ``segment``,
``count``. Both formats are UTF-8, may start with a header row naming the
columns, skip blank lines and lines starting with ``#``.
"""
from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParseError

__all__ = [
    "Wordlist",
    "FrequencyTable",
    "parse_wordlist",
    "count_segments",
    "filter_min_words",
    "parse_frequency_table",
    "write_frequency_table",
    "MIN_WORDS",
]

MIN_WORDS = 250

WORDLIST_HEADER = ("language", "word")
FREQUENCY_HEADER = ("language", "segment", "count")


@dataclass
class Wordlist:
    language_id: str
    words: list = field(default_factory=list)

    def __len__(self):
        return len(self.words)


@dataclass
class FrequencyTable:
    language_id: str
    counts: dict

    def __post_init__(self):
        for label, count in self.counts.items():
            if not isinstance(label, str) or not label:
                raise DomainError(f"segment labels must be nonempty strings, got {label!r}")
            if int(count) != count or count < 1:
                raise DomainError(f"count for {label!r} must be a positive integer, got {count!r}")
        self.counts = {label: int(count) for label, count in self.counts.items()}

    @property
    def n_types(self):
        return len(self.counts)

    @property
    def n_tokens(self):
        return sum(self.counts.values())

    def values(self):
        """Counts as an int64 array, in table order."""
        return np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))


def _rows(stream, header):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    first = True
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if first:
            first = False
            if tuple(c.strip().lower() for c in cols) == header:
                continue
        if len(cols) != len(header):
            raise ParseError(f"expected {len(header)} tab-separated columns, got {len(cols)}", lineno)
        yield lineno, [c.strip() for c in cols]


def parse_wordlist(stream):
    """Group wordlist rows by language, keeping first-appearance order."""
    lists = {}
    for lineno, (language, word) in _rows(stream, WORDLIST_HEADER):
        if not language:
            raise ParseError("empty language identifier", lineno)
        tokens = word.split()
        if not tokens:
            raise ParseError("word has no segment tokens", lineno)
        lists.setdefault(language, Wordlist(language)).words.append(tokens)
    return list(lists.values())


def count_segments(wordlist):
    """Token counts of every segment; each listed word contributes once."""
    if not wordlist.words:
        raise DomainError(f"wordlist {wordlist.language_id!r} is empty")
    counts = Counter()
    for word in wordlist.words:
        counts.update(word)
    return FrequencyTable(wordlist.language_id, dict(counts))


def filter_min_words(lists, threshold=MIN_WORDS):
    if int(threshold) != threshold or threshold < 1:
        raise DomainError(f"threshold must be a positive integer, got {threshold!r}")
    return [wl for wl in lists if len(wl.words) >= threshold]


def parse_frequency_table(stream):
    tables = {}
    for lineno, (language, segment, count) in _rows(stream, FREQUENCY_HEADER):
        if not language or not segment:
            raise ParseError("empty language or segment", lineno)
        try:
            value = int(count)
        except ValueError:
            raise ParseError(f"count {count!r} is not an integer", lineno) from None
        if value < 1:
            raise ParseError(f"count must be positive, got {value}", lineno)
        counts = tables.setdefault(language, {})
        if segment in counts:
            raise ParseError(f"duplicate segment {segment!r} for language {language!r}", lineno)
        counts[segment] = value
    return [FrequencyTable(language, counts) for language, counts in tables.items()]


def write_frequency_table(tables, stream=None):
    """Serialise tables to the frequency TSV format; returns the text if no stream."""
    out = stream if stream is not None else io.StringIO()
    out.write("\t".join(FREQUENCY_HEADER) + "\n")
    for table in tables:
        for segment, count in table.counts.items():
            out.write(f"{table.language_id}\t{segment}\t{count}\n")
    if stream is None:
        return out.getvalue()
