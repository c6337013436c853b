"""Named-entity mentions per document.

Entities come either from an external NER system's JSONL output or from a
plain gazetteer matched against document tokens.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EmptyGazetteer, MalformedRecord, UnknownDocId
from .preprocess import DEFAULT_CONFIG, NormalizationConfig, preprocess

POS_TAG = "PosNE"
NEG_TAG = "NegNE"
RESERVED_TOKENS = frozenset({POS_TAG, NEG_TAG})
ENTITY_TYPES = frozenset({"PER", "LOC", "ORG", "MISC"})


@dataclass(frozen=True)
class NamedEntity:
    surface: tuple[str, ...]
    etype: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "surface", tuple(self.surface))
        if not self.surface or not all(self.surface):
            raise MalformedRecord(f"entity surface must be non-empty: {self.surface!r}")
        reserved = RESERVED_TOKENS.intersection(self.surface)
        if reserved:
            raise MalformedRecord(f"entity surface uses reserved token(s) {sorted(reserved)}")
        if self.etype is not None and self.etype not in ENTITY_TYPES:
            raise MalformedRecord(f"unknown entity type {self.etype!r}")

    @property
    def text(self) -> str:
        return " ".join(self.surface)


class NeAnnotations(Mapping):
    """Read-only mapping ``doc_id -> tuple[NamedEntity, ...]``.

    Entities are deduplicated by surface within each document (first wins).
    """

    def __init__(self, data: Mapping[str, Iterable[NamedEntity]] = ()):
        self._data = {}
        for doc_id, ents in dict(data).items():
            seen = {}
            for ent in ents:
                seen.setdefault(ent.surface, ent)
            self._data[doc_id] = tuple(seen.values())

    def __getitem__(self, doc_id):
        return self._data[doc_id]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __repr__(self):
        return f"NeAnnotations({self._data!r})"

    def entities_for(self, doc_id) -> tuple[NamedEntity, ...]:
        return self._data.get(doc_id, ())

    def resolve(self, corpus) -> "NeAnnotations":
        for doc_id in self._data:
            if doc_id not in corpus:
                raise UnknownDocId(doc_id)
        return self

    def surfaces(self) -> set[tuple[str, ...]]:
        return {e.surface for ents in self._data.values() for e in ents}

    def to_jsonl(self) -> str:
        lines = []
        for doc_id, ents in self._data.items():
            rec = {
                "doc_id": doc_id,
                "entities": [
                    {"surface": e.text, **({"type": e.etype} if e.etype else {})} for e in ents
                ],
            }
            lines.append(json.dumps(rec, ensure_ascii=False))
        return "".join(line + "\n" for line in lines)


def _entity_from_text(text: str, etype, config: NormalizationConfig, where: str) -> NamedEntity:
    if not isinstance(text, str):
        raise MalformedRecord(f"{where}: surface must be a string")
    tokens = preprocess(text, config)
    if not tokens:
        raise MalformedRecord(f"{where}: surface {text!r} is empty after normalization")
    return NamedEntity(tuple(tokens), etype or None)


def load_annotations(path, config: NormalizationConfig = DEFAULT_CONFIG) -> NeAnnotations:
    """Load NER output: one ``{"doc_id", "entities": [{"surface", "type"?}]}`` per line.

    Surfaces go through the same normalization as documents so they can be
    matched token-for-token. Unknown doc ids surface later, in ``resolve``.
    """
    data: dict[str, list[NamedEntity]] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"line {line_no}"
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"{where}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict) or "doc_id" not in rec or "entities" not in rec:
                raise MalformedRecord(f"{where}: expected keys 'doc_id' and 'entities'")
            if not isinstance(rec["entities"], list):
                raise MalformedRecord(f"{where}: 'entities' must be a list")
            ents = data.setdefault(str(rec["doc_id"]), [])
            for ent in rec["entities"]:
                if not isinstance(ent, dict) or "surface" not in ent:
                    raise MalformedRecord(f"{where}: entity without 'surface'")
                ents.append(_entity_from_text(ent["surface"], ent.get("type"), config, where))
    return NeAnnotations(data)


def load_gazetteer(path, config: NormalizationConfig = DEFAULT_CONFIG) -> list[NamedEntity]:
    """One surface per line, optionally followed by a tab and an entity type."""
    entities = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            surface, _, etype = line.partition("\t")
            entities.append(_entity_from_text(surface, etype.strip(), config, f"line {line_no}"))
    return entities


def find_spans(tokens: Sequence[str], surfaces, lengths=None) -> list[tuple[int, int]]:
    """Non-overlapping occurrences of ``surfaces`` in ``tokens``.

    Candidates are accepted longest first, then leftmost, skipping any that
    overlap an accepted span. Returns ``(start, length)`` pairs sorted by
    start. ``surfaces`` must support ``in`` on token tuples.
    """
    if lengths is None:
        lengths = {len(s) for s in surfaces}
    n = len(tokens)
    cands = []
    for length in sorted(lengths, reverse=True):
        for start in range(n - length + 1):
            if tuple(tokens[start:start + length]) in surfaces:
                cands.append((start, length))
    taken = [False] * n
    accepted = []
    for start, length in cands:
        if any(taken[start:start + length]):
            continue
        for i in range(start, start + length):
            taken[i] = True
        accepted.append((start, length))
    accepted.sort()
    return accepted


def gazetteer_match(corpus, gazetteer: Iterable[NamedEntity]) -> NeAnnotations:
    gazetteer = list(gazetteer)
    if not gazetteer:
        raise EmptyGazetteer()
    by_surface = {}
    for ent in gazetteer:
        by_surface.setdefault(ent.surface, ent)
    lengths = {len(s) for s in by_surface}
    found = {}
    for doc in corpus:
        spans = find_spans(doc.tokens, by_surface, lengths)
        found[doc.id] = [by_surface[tuple(doc.tokens[s:s + n])] for s, n in spans]
    return NeAnnotations(found)
