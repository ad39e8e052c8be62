"""Publication records, JSON Lines ingestion and the author-year selection map."""
from __future__ import annotations

import json
import logging
import sys
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InputFormatError

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 2
MALFORMED_LIMIT = 0.5


@dataclass(frozen=True)
class PublicationRecord:
    paper_id: str
    title: str
    abstract: str | None
    authors: tuple[str, ...]
    year: int
    fields_of_study: tuple[str, ...] = ()

    @property
    def text(self) -> str:
        if self.abstract:
            return f"{self.title} {self.abstract}"
        return self.title


def normalize_author(name: str) -> str:
    """Collapse internal whitespace; case is preserved."""
    return " ".join(name.split())


def record_from_dict(obj: Mapping) -> PublicationRecord:
    """Validate one decoded JSON object. Raises ``ValueError`` when malformed."""
    if not isinstance(obj, Mapping):
        raise ValueError("record is not an object")
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise ValueError("missing id")
    title = obj.get("title")
    if not isinstance(title, str):
        raise ValueError("missing title")
    abstract = obj.get("abstract")
    if abstract is not None and not isinstance(abstract, str):
        raise ValueError("abstract must be a string or null")
    if isinstance(abstract, str) and not abstract.strip():
        abstract = None
    year = obj.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise ValueError("year must be an integer")
    raw_authors = obj.get("authors")
    if not isinstance(raw_authors, list) or not all(isinstance(a, str) for a in raw_authors):
        raise ValueError("authors must be a list of strings")
    authors: list[str] = []
    for a in raw_authors:
        a = normalize_author(a)
        if a and a not in authors:
            authors.append(a)
    if not authors:
        raise ValueError("empty author list")
    fields = obj.get("fields", [])
    if fields is None:
        fields = []
    if not isinstance(fields, list) or not all(isinstance(f, str) for f in fields):
        raise ValueError("fields must be a list of strings")
    return PublicationRecord(pid, title, abstract, tuple(authors), year, tuple(fields))


@dataclass(frozen=True)
class LoadReport:
    total: int
    malformed: int
    filtered: int

    @property
    def skipped(self) -> int:
        return self.malformed + self.filtered

    def __str__(self) -> str:
        return f"skipped={self.skipped} total={self.total}"


@dataclass(frozen=True)
class Corpus:
    """Immutable, paper-id ordered collection of records with an author index."""

    records: tuple[PublicationRecord, ...]
    year_range: tuple[int, int]
    author_index: Mapping[str, tuple[tuple[str, int], ...]] = field(repr=False)
    report: LoadReport | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_records(
        cls,
        records: Iterable[PublicationRecord],
        year_range: tuple[int, int] | None = None,
        report: LoadReport | None = None,
    ) -> "Corpus":
        recs = sorted(records, key=lambda r: r.paper_id)
        seen = set()
        for r in recs:
            if r.paper_id in seen:
                raise ValueError(f"duplicate paper id {r.paper_id!r}")
            seen.add(r.paper_id)
        index: dict[str, list[tuple[str, int]]] = {}
        for r in recs:
            for a in r.authors:
                index.setdefault(a, []).append((r.paper_id, r.year))
        frozen = {a: tuple(sorted(v, key=lambda e: (e[1], e[0]))) for a, v in index.items()}
        if year_range is None:
            years = [r.year for r in recs]
            year_range = (min(years), max(years)) if years else (0, -1)
        return cls(tuple(recs), tuple(year_range), frozen, report)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def authors(self) -> list[str]:
        return sorted(self.author_index)

    @property
    def years(self) -> list[int]:
        return sorted({r.year for r in self.records})

    def get(self, paper_id: str) -> PublicationRecord:
        return self._by_id[paper_id]

    @property
    def _by_id(self) -> dict[str, PublicationRecord]:
        cache = self.__dict__.get("_by_id_cache")
        if cache is None:
            cache = {r.paper_id: r for r in self.records}
            object.__setattr__(self, "_by_id_cache", cache)
        return cache

    def select(self, author: str, year: int, window: int = DEFAULT_WINDOW) -> frozenset[str]:
        """Papers of ``author`` published in ``[year - window, year]``."""
        return select(self, author, year, window)


def select(corpus: Corpus, author: str, year: int, window: int = DEFAULT_WINDOW) -> frozenset[str]:
    if window < 0:
        raise ValueError("window must be non-negative")
    entries = corpus.author_index.get(author)
    if not entries:
        return frozenset()
    years = [y for _, y in entries]
    lo = bisect_left(years, year - window)
    hi = bisect_right(years, year)
    return frozenset(pid for pid, _ in entries[lo:hi])


def load_corpus(
    path: str | Path,
    min_year: int = 1960,
    max_year: int = 2021,
    include_fields: Iterable[str] = (),
    exclude_fields: Iterable[str] = (),
    report_stream=None,
) -> Corpus:
    """Read a JSON Lines corpus.

    Lines that fail validation are skipped, as are records outside the year
    range or the field filters. A ``skipped=<n> total=<m>`` line goes to
    ``report_stream`` (stderr by default).

    Raises
    ------
    OSError
        The file cannot be read.
    InputFormatError
        More than half of the non-blank lines are malformed.
    """
    include = set(include_fields)
    exclude = set(exclude_fields)
    records: list[PublicationRecord] = []
    seen: set[str] = set()
    total = malformed = filtered = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            total += 1
            try:
                rec = record_from_dict(json.loads(line))
                if rec.paper_id in seen:
                    raise ValueError(f"duplicate id {rec.paper_id!r}")
            except (ValueError, TypeError) as exc:
                malformed += 1
                log.warning("line %d skipped: %s", lineno, exc)
                continue
            seen.add(rec.paper_id)
            fos = set(rec.fields_of_study)
            if not (min_year <= rec.year <= max_year):
                filtered += 1
            elif include and not (fos & include):
                filtered += 1
            elif fos & exclude:
                filtered += 1
            else:
                records.append(rec)
    if total and malformed / total > MALFORMED_LIMIT:
        raise InputFormatError(
            f"{malformed} of {total} lines malformed; is {path} a JSON Lines corpus?"
        )
    report = LoadReport(total, malformed, filtered)
    print(str(report), file=report_stream or sys.stderr)
    return Corpus.from_records(records, (min_year, max_year), report)
