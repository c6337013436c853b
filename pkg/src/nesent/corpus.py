"""Labeled sentence-level corpora with train/test splits."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .errors import BadLabel, BadSplit, CorpusError, DuplicateId, MissingField

REQUIRED_FIELDS = ("id", "text", "label", "split")


class Polarity(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"

    @classmethod
    def parse(cls, value: str) -> "Polarity":
        try:
            return cls(value)
        except ValueError:
            raise BadLabel(value) from None

    def __str__(self) -> str:
        return self.value


BINARY = (Polarity.POSITIVE, Polarity.NEGATIVE)


class Split(str, enum.Enum):
    TRAIN = "train"
    TEST = "test"

    @classmethod
    def parse(cls, value: str) -> "Split":
        try:
            return cls(value)
        except ValueError:
            raise BadSplit(value) from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Document:
    id: str
    raw_text: str
    gold: Polarity
    split: Split
    tokens: tuple[str, ...] = ()

    def __post_init__(self):
        for tok in self.tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise CorpusError(f"document {self.id!r}: invalid token {tok!r}")

    def with_tokens(self, tokens: Iterable[str]) -> "Document":
        return replace(self, tokens=tuple(tokens))


@dataclass(frozen=True)
class Corpus:
    docs: tuple[Document, ...]
    provenance: str = field(default="", compare=False)
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for pos, doc in enumerate(self.docs):
            if doc.id in index:
                raise DuplicateId(doc.id)
            index[doc.id] = pos
        object.__setattr__(self, "docs", tuple(self.docs))
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._index

    def get(self, doc_id: str) -> Document:
        return self.docs[self._index[doc_id]]

    def split(self, which: Split) -> list[Document]:
        return [d for d in self.docs if d.split is which]

    @property
    def train(self) -> list[Document]:
        return self.split(Split.TRAIN)

    @property
    def test(self) -> list[Document]:
        return self.split(Split.TEST)

    def map_docs(self, fn) -> "Corpus":
        return Corpus(tuple(fn(d) for d in self.docs), self.provenance)


def _record_to_doc(rec: dict, record_no: int) -> Document:
    for name in REQUIRED_FIELDS:
        if name not in rec:
            raise MissingField(record_no, name)
    tokens = rec.get("tokens") or ()
    return Document(
        id=str(rec["id"]),
        raw_text=rec["text"],
        gold=Polarity.parse(rec["label"]),
        split=Split.parse(rec["split"]),
        tokens=tuple(tokens),
    )


def _iter_jsonl(fh) -> Iterator[tuple[int, dict]]:
    for record_no, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"record #{record_no}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict):
            raise CorpusError(f"record #{record_no}: expected a JSON object")
        yield record_no, rec


def _iter_tsv(fh) -> Iterator[tuple[int, dict]]:
    reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
    for record_no, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) < 4:
            raise MissingField(record_no, REQUIRED_FIELDS[len(row)])
        yield record_no, dict(zip(REQUIRED_FIELDS, row[:4]))


def load_corpus(path, format: str = "jsonl") -> Corpus:
    """Read a corpus file, preserving record order.

    ``format`` is ``"jsonl"`` (records ``{"id", "text", "label", "split"}``,
    optionally ``"tokens"``) or ``"tsv"`` (four tab-separated columns, no
    header).
    """
    path = Path(path)
    if format not in ("jsonl", "tsv"):
        raise CorpusError(f"unsupported corpus format {format!r}")
    rows = _iter_jsonl if format == "jsonl" else _iter_tsv
    with path.open(encoding="utf-8", newline="") as fh:
        docs = [_record_to_doc(rec, no) for no, rec in rows(fh)]
    return Corpus(tuple(docs), provenance=str(path))


def dumps_corpus(corpus: Corpus, with_tokens: bool = False) -> str:
    out = io.StringIO()
    for doc in corpus:
        rec = {"id": doc.id, "text": doc.raw_text, "label": doc.gold.value, "split": doc.split.value}
        if with_tokens:
            rec["tokens"] = list(doc.tokens)
        out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return out.getvalue()


def save_corpus(corpus: Corpus, path, with_tokens: bool = False) -> None:
    Path(path).write_text(dumps_corpus(corpus, with_tokens), encoding="utf-8", newline="\n")


def split_summary(corpus: Corpus) -> dict[tuple[Split, Polarity], int]:
    """Count documents per (split, polarity); every cell is present."""
    table = {(s, p): 0 for s in Split for p in Polarity}
    for doc in corpus:
        table[doc.split, doc.gold] += 1
    return table


def summary_to_json(table: dict) -> dict:
    out = {s.value: {p.value: table[s, p] for p in Polarity} for s in Split}
    out["total"] = sum(table.values())
    return out
