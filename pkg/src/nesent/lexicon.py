"""Sentiment lexicons and the lexicon-based sentence scorers.

Weights are :class:`fractions.Fraction` so scores are exact and identical on
every platform. Two scorers are provided:

* straight sum: add the weights of all matched entries, the sign decides;
* double polarity: each entry with weight magnitude ``m`` in (0, 1)
  contributes ``m`` to its own side and ``-(1 - m)`` / ``1 - m`` to the other;
  the side with the larger absolute total wins.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .corpus import Polarity
from .errors import (AlreadyTagged, BadPolarity, EmptyList, LexiconError, NoDpWeights,
                     TermTooLong, ZeroWeight)
from .ne_provider import NEG_TAG, POS_TAG
from .preprocess import DEFAULT_CONFIG, NormalizationConfig, preprocess

log = logging.getLogger(__name__)

ONE = Fraction(1)


class Scheme(str, enum.Enum):
    UNI = "uni"
    UNI_BI = "uni_bi"

    @property
    def label(self) -> str:
        return "uni" if self is Scheme.UNI else "uni+bi"


class TiePolicy(str, enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ABSTAIN = "abstain"

    def resolve(self) -> Optional[Polarity]:
        if self is TiePolicy.ABSTAIN:
            return None
        return Polarity(self.value)


@dataclass(frozen=True)
class LexiconEntry:
    term: tuple[str, ...]
    polarity: Polarity
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "term", tuple(self.term))
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.polarity not in (Polarity.POSITIVE, Polarity.NEGATIVE):
            raise BadPolarity(f"lexicon entries must be positive or negative, got {self.polarity}")
        if self.weight == 0:
            raise ZeroWeight(f"term {' '.join(self.term)!r} has zero weight")
        if (self.weight > 0) != (self.polarity is Polarity.POSITIVE):
            raise BadPolarity(f"term {' '.join(self.term)!r}: weight sign disagrees with polarity")
        if not 1 <= len(self.term) <= 2:
            raise TermTooLong(f"term {' '.join(self.term)!r} has {len(self.term)} tokens (max 2)")

    @classmethod
    def uniform(cls, term, polarity: Polarity) -> "LexiconEntry":
        return cls(term, polarity, ONE if polarity is Polarity.POSITIVE else -ONE)

    def dp_weights(self) -> tuple[Fraction, Fraction]:
        """``(positive, negative)`` weights; their difference is always 1."""
        mag = abs(self.weight)
        if self.term in _TAG_TERMS and mag == 1:
            # tag entries are pure: all mass on their own side
            return (ONE, Fraction(0)) if self.weight > 0 else (Fraction(0), -ONE)
        if not 0 < mag < 1:
            raise NoDpWeights(
                f"term {' '.join(self.term)!r}: weight {self.weight} has no double-polarity split"
            )
        if self.weight > 0:
            return mag, -(1 - mag)
        return 1 - mag, -mag


_TAG_TERMS = frozenset({(POS_TAG,), (NEG_TAG,)})


@dataclass(frozen=True)
class Lexicon:
    name: str
    entries: dict = field(default_factory=dict)  # term tuple -> LexiconEntry
    conflicts: int = 0

    def __len__(self):
        return len(self.entries)

    def __contains__(self, term):
        return tuple(term) in self.entries

    def get(self, term) -> Optional[LexiconEntry]:
        return self.entries.get(tuple(term))

    def count(self, polarity: Polarity) -> int:
        return sum(e.polarity is polarity for e in self.entries.values())

    def report(self) -> dict:
        return {
            "name": self.name,
            "size": len(self),
            "positive": self.count(Polarity.POSITIVE),
            "negative": self.count(Polarity.NEGATIVE),
            "conflicts": self.conflicts,
        }

    @classmethod
    def from_entries(cls, name: str, entries: Iterable[LexiconEntry]) -> "Lexicon":
        table, conflicts = {}, 0
        for e in entries:
            if e.term in table:
                conflicts += 1
                log.warning("lexicon %s: duplicate term %r, later entry wins", name, " ".join(e.term))
            table[e.term] = e
        return cls(name, table, conflicts)


def _parse_polarity(text: str, where: str) -> Polarity:
    try:
        pol = Polarity(text.strip().lower())
    except ValueError:
        raise BadPolarity(f"{where}: unknown polarity {text!r}") from None
    if pol is Polarity.NEUTRAL:
        raise BadPolarity(f"{where}: lexicon entries cannot be neutral")
    return pol


def _parse_weight(text: str, pol: Polarity, where: str) -> Fraction:
    text = text.strip()
    try:
        w = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise LexiconError(f"{where}: bad weight {text!r}") from None
    if w == 0:
        raise ZeroWeight(f"{where}: zero weight")
    # an unsigned weight is a magnitude; the polarity column gives the sign
    if not text.startswith(("-", "+")) and pol is Polarity.NEGATIVE:
        w = -w
    return w


def load_lexicon(path, config: NormalizationConfig = DEFAULT_CONFIG, name: Optional[str] = None) -> Lexicon:
    """Read ``term<TAB>polarity[<TAB>weight]`` lines; ``#`` lines are comments.

    Missing weights default to +1/-1. A repeated term replaces the earlier
    one and is counted in ``Lexicon.conflicts``.
    """
    path = Path(path)
    entries = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            where = f"{path.name}:{line_no}"
            cols = line.split("\t")
            if len(cols) not in (2, 3):
                raise LexiconError(f"{where}: expected 2 or 3 tab-separated columns")
            term = tuple(preprocess(cols[0], config))
            if not term:
                raise LexiconError(f"{where}: term {cols[0]!r} is empty after normalization")
            if len(term) > 2:
                raise TermTooLong(f"{where}: term {cols[0]!r} has {len(term)} tokens (max 2)")
            pol = _parse_polarity(cols[1], where)
            if len(cols) == 3 and cols[2].strip():
                entry = LexiconEntry(term, pol, _parse_weight(cols[2], pol, where))
            else:
                entry = LexiconEntry.uniform(term, pol)
            entries.append(entry)
    return Lexicon.from_entries(name or path.stem, entries)


def merge_lexicons(lexicons: Sequence[Lexicon], name: str = "merged") -> Lexicon:
    """Union of entries; on a term clash the later lexicon wins."""
    if not lexicons:
        raise EmptyList()
    table = {}
    conflicts = 0
    for lex in lexicons:
        for term, entry in lex.entries.items():
            if term in table:
                conflicts += 1
            table[term] = entry
    return Lexicon(name, table, conflicts)


def add_ne_tags(lexicon: Lexicon) -> Lexicon:
    # NegNE is given -1 (not 0) so that it can move a straight-sum score
    if (POS_TAG,) in lexicon or (NEG_TAG,) in lexicon:
        raise AlreadyTagged()
    table = dict(lexicon.entries)
    table[(POS_TAG,)] = LexiconEntry.uniform((POS_TAG,), Polarity.POSITIVE)
    table[(NEG_TAG,)] = LexiconEntry.uniform((NEG_TAG,), Polarity.NEGATIVE)
    return Lexicon(lexicon.name, table, lexicon.conflicts)


def segment_and_match(tokens: Sequence[str], lexicon: Lexicon, scheme=Scheme.UNI_BI) -> list[LexiconEntry]:
    scheme = Scheme(scheme)
    entries = lexicon.entries
    if scheme is Scheme.UNI:
        return [entries[(t,)] for t in tokens if (t,) in entries]
    matched = []
    i, n = 0, len(tokens)
    while i < n:
        if i + 1 < n and (tokens[i], tokens[i + 1]) in entries:
            matched.append(entries[tokens[i], tokens[i + 1]])
            i += 2
            continue
        if (tokens[i],) in entries:
            matched.append(entries[(tokens[i],)])
        i += 1
    return matched


def sfs_score(tokens, lexicon: Lexicon, scheme=Scheme.UNI_BI, tie_policy=TiePolicy.NEGATIVE):
    """Straight sum of matched weights -> ``(score, polarity)``.

    ``polarity`` is ``None`` when the score is zero and the policy abstains.
    """
    score = sum((e.weight for e in segment_and_match(tokens, lexicon, scheme)), Fraction(0))
    if score > 0:
        return score, Polarity.POSITIVE
    if score < 0:
        return score, Polarity.NEGATIVE
    return score, TiePolicy(tie_policy).resolve()


def dp_totals(tokens, lexicon: Lexicon, scheme=Scheme.UNI_BI) -> tuple[Fraction, Fraction]:
    pos = neg = Fraction(0)
    for entry in segment_and_match(tokens, lexicon, scheme):
        p, n = entry.dp_weights()
        pos += p
        neg += n
    return pos, neg


def check_dp_lexicon(lexicon: Lexicon) -> None:
    for entry in lexicon.entries.values():
        entry.dp_weights()


def dp_score(tokens, lexicon: Lexicon, scheme=Scheme.UNI_BI, validate: bool = True):
    """Double-polarity decision -> ``(positive_total, negative_total, polarity)``.

    Equal magnitudes resolve to negative. With ``validate`` the whole lexicon
    is checked first, so a lexicon of plain +-1 weights fails even when the
    sentence has no matches.
    """
    if validate:
        check_dp_lexicon(lexicon)
    pos, neg = dp_totals(tokens, lexicon, scheme)
    pol = Polarity.POSITIVE if abs(pos) > abs(neg) else Polarity.NEGATIVE
    return pos, neg, pol
