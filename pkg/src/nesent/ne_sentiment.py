"""Named-entity polarity by majority of attitudes, and PosNE/NegNE tagging.

An entity's score is the number of in-scope positive documents containing
it minus the number of negative ones; neutral documents count zero. A
document "contains" an entity when the surface occurs as a contiguous token
run, counted once per document however often it repeats.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .corpus import Corpus, Polarity, Split
from .errors import EmptyScope
from .ne_provider import NEG_TAG, POS_TAG, NamedEntity, NeAnnotations, find_spans


class Scope(str, enum.Enum):
    TRAIN_ONLY = "train_only"
    ALL_LABELED = "all_labeled"

    def includes(self, doc) -> bool:
        return self is Scope.ALL_LABELED or doc.split is Split.TRAIN


@dataclass(frozen=True)
class NeScore:
    entity: NamedEntity
    pos_mentions: int = 0
    neg_mentions: int = 0
    neu_mentions: int = 0

    @property
    def score(self) -> int:
        return self.pos_mentions - self.neg_mentions

    @property
    def polarity(self):
        if self.score > 0:
            return Polarity.POSITIVE
        if self.score < 0:
            return Polarity.NEGATIVE
        return None


@dataclass
class NePolarityMap:
    assigned: dict = field(default_factory=dict)  # surface -> Polarity
    unassigned: list = field(default_factory=list)

    def get(self, surface):
        return self.assigned.get(tuple(surface))

    def __len__(self):
        return len(self.assigned)


@dataclass(frozen=True)
class NeStats:
    extracted: int
    positive: int
    negative: int

    @property
    def annotated(self) -> int:
        return self.positive + self.negative

    def to_json(self) -> dict:
        return {
            "E-NEs": self.extracted,
            "Pos-NEs": self.positive,
            "Neg-NEs": self.negative,
            "A-NEs": self.annotated,
        }


def _contained(tokens, surfaces, lengths) -> set:
    found = set()
    n = len(tokens)
    for length in lengths:
        for start in range(n - length + 1):
            gram = tuple(tokens[start:start + length])
            if gram in surfaces:
                found.add(gram)
    return found


def detect_ne_polarity(corpus: Corpus, annotations: NeAnnotations, scope: Scope = Scope.TRAIN_ONLY):
    """Score every entity extracted from in-scope documents.

    Returns ``(polarity_map, scores, stats)``; ``scores`` is sorted by surface
    so the result does not depend on document order.
    """
    scope = Scope(scope)
    annotations.resolve(corpus)
    in_scope = [d for d in corpus if scope.includes(d)]
    if not in_scope:
        raise EmptyScope(scope.value)

    entities: dict = {}
    for doc in in_scope:
        for ent in annotations.entities_for(doc.id):
            entities.setdefault(ent.surface, ent)
    lengths = sorted({len(s) for s in entities})
    counts = {s: [0, 0, 0] for s in entities}
    slot = {Polarity.POSITIVE: 0, Polarity.NEGATIVE: 1, Polarity.NEUTRAL: 2}
    for doc in in_scope:
        for surface in _contained(doc.tokens, entities, lengths):
            counts[surface][slot[doc.gold]] += 1

    scores = [NeScore(entities[s], *counts[s]) for s in sorted(entities)]
    pmap = NePolarityMap()
    for sc in scores:
        if sc.polarity is None:
            pmap.unassigned.append(sc.entity.surface)
        else:
            pmap.assigned[sc.entity.surface] = sc.polarity
    stats = NeStats(
        extracted=len(entities),
        positive=sum(p is Polarity.POSITIVE for p in pmap.assigned.values()),
        negative=sum(p is Polarity.NEGATIVE for p in pmap.assigned.values()),
    )
    return pmap, scores, stats


def tag_tokens(tokens, pmap: NePolarityMap) -> tuple[str, ...]:
    if not pmap.assigned:
        return tuple(tokens)
    spans = find_spans(tokens, pmap.assigned)
    if not spans:
        return tuple(tokens)
    out = []
    pos = 0
    for start, length in spans:
        out.extend(tokens[pos:start])
        pol = pmap.assigned[tuple(tokens[start:start + length])]
        out.append(POS_TAG if pol is Polarity.POSITIVE else NEG_TAG)
        pos = start + length
    out.extend(tokens[pos:])
    return tuple(out)


def tag_entities(corpus: Corpus, annotations: NeAnnotations, pmap: NePolarityMap) -> Corpus:
    """Replace assigned entity mentions with PosNE/NegNE in every split.

    Matching is driven by the polarity map, so an assigned entity is tagged
    wherever it occurs, including test documents the NER never annotated.
    """
    annotations.resolve(corpus)
    return corpus.map_docs(lambda d: d.with_tokens(tag_tokens(d.tokens, pmap)))


def scores_to_jsonl(scores, pmap: NePolarityMap) -> str:
    lines = []
    for sc in scores:
        pol = pmap.get(sc.entity.surface)
        rec = {
            "surface": sc.entity.text,
            "polarity": pol.value if pol else None,
            "score": sc.score,
            "pos_mentions": sc.pos_mentions,
            "neg_mentions": sc.neg_mentions,
            "neu_mentions": sc.neu_mentions,
        }
        lines.append(json.dumps(rec, ensure_ascii=False) + "\n")
    return "".join(lines)


def load_polarity_map(path) -> NePolarityMap:
    pmap = NePolarityMap()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            surface = tuple(rec["surface"].split())
            if rec.get("polarity"):
                pmap.assigned[surface] = Polarity(rec["polarity"])
            else:
                pmap.unassigned.append(surface)
    return pmap
