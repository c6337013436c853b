"""Generated corpora whose sentiment signal is known by construction.

Used by the acceptance suite and the benchmark. Everything is Latin script,
so pair it with ``preprocess.LATIN_CONFIG``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Document, Polarity, Split, dumps_corpus
from .lexicon import Lexicon, LexiconEntry
from .ne_provider import NamedEntity, NeAnnotations
from .preprocess import LATIN_CONFIG, preprocess

FILLER = (
    "the today we saw news about again people said this week city report morning "
    "after before some many team match road house market station talk group local "
    "evening story update photo video meeting plan crowd street weather"
).split()
SENTIMENT_WORDS = {
    Polarity.POSITIVE: ("good", "great", "love", "excellent", "happy"),
    Polarity.NEGATIVE: ("bad", "awful", "hate", "terrible", "sad"),
}
ENTITY_NAMES = (
    "acme corp", "zorbia", "blue harbor", "kelvara", "north star club",
    "globex", "tarvin hills", "drexo", "marlow union", "quenta",
)


@dataclass
class SyntheticSet:
    corpus: Corpus  # already tokenized
    annotations: NeAnnotations
    lexicon: Lexicon
    entity_polarity: dict  # surface tuple -> Polarity

    def write(self, directory) -> dict:
        """Write corpus/annotations/lexicon files; returns their paths."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        paths = {
            "corpus": d / "corpus.jsonl",
            "annotations": d / "annotations.jsonl",
            "lexicon": d / "lexicon.tsv",
        }
        paths["corpus"].write_text(dumps_corpus(self.corpus), encoding="utf-8")
        paths["annotations"].write_text(self.annotations.to_jsonl(), encoding="utf-8")
        lex_lines = [f"{' '.join(e.term)}\t{e.polarity.value}\n" for e in self.lexicon.entries.values()]
        paths["lexicon"].write_text("".join(lex_lines), encoding="utf-8")
        return paths


def ne_signal_corpus(n_docs=400, n_entities=10, entity_rate=0.4, agreement=0.9,
                     test_fraction=0.2, doc_len=(6, 12), seed=0) -> SyntheticSet:
    """Corpus where entity mentions are the only thing the lexicon could use.

    A fraction ``entity_rate`` of documents mention one entity; each entity
    has a fixed polarity (first half positive) and exactly ``agreement`` of
    the entity-bearing documents carry their entity's label. The remaining
    words come from a filler vocabulary absent from the lexicon. Labels are
    balanced.
    """
    rng = random.Random(seed)
    names = [tuple(n.split()) for n in ENTITY_NAMES[:n_entities]]
    polarity = {
        s: Polarity.POSITIVE if i < n_entities // 2 else Polarity.NEGATIVE for i, s in enumerate(names)
    }
    n_entity_docs = round(n_docs * entity_rate)
    flipped = set(rng.sample(range(n_entity_docs), round(n_entity_docs * (1 - agreement))))

    specs = []  # (entity or None, label)
    for k in range(n_entity_docs):
        ent = names[k % n_entities]
        label = polarity[ent]
        if k in flipped:
            label = Polarity.NEGATIVE if label is Polarity.POSITIVE else Polarity.POSITIVE
        specs.append((ent, label))
    for k in range(n_docs - n_entity_docs):
        specs.append((None, Polarity.POSITIVE if k % 2 == 0 else Polarity.NEGATIVE))
    rng.shuffle(specs)

    n_test = round(n_docs * test_fraction)
    docs, ann = [], {}
    for i, (ent, label) in enumerate(specs):
        words = [rng.choice(FILLER) for _ in range(rng.randint(*doc_len))]
        if ent is not None:
            pos = rng.randint(0, len(words))
            words[pos:pos] = list(ent)
        text = " ".join(words)
        doc_id = f"s{i:04d}"
        split = Split.TEST if i < n_test else Split.TRAIN
        docs.append(Document(doc_id, text, label, split, tuple(preprocess(text, LATIN_CONFIG))))
        if ent is not None:
            ann[doc_id] = [NamedEntity(ent)]
    entries = [LexiconEntry.uniform((w,), pol) for pol, ws in SENTIMENT_WORDS.items() for w in ws]
    return SyntheticSet(
        Corpus(tuple(docs), provenance=f"synthetic:ne_signal:{seed}"),
        NeAnnotations(ann),
        Lexicon.from_entries("synthetic", entries),
        polarity,
    )


def random_corpus(rng: random.Random, n_docs=50, vocab=8, max_len=8, with_neutral=True,
                  test_fraction=0.3) -> Corpus:
    """Small random tokenized corpus over a tiny vocabulary (for property tests)."""
    labels = list(Polarity) if with_neutral else [Polarity.POSITIVE, Polarity.NEGATIVE]
    words = [f"t{i}" for i in range(vocab)]
    docs = []
    for i in range(n_docs):
        tokens = tuple(rng.choice(words) for _ in range(rng.randint(0, max_len)))
        split = Split.TEST if rng.random() < test_fraction else Split.TRAIN
        docs.append(Document(f"d{i}", " ".join(tokens), rng.choice(labels), split, tokens))
    return Corpus(tuple(docs), provenance="synthetic:random")

