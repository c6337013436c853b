"""Tweet normalization and whitespace tokenization.

Stopwords and negation words are kept on purpose, and nothing is stemmed.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import asdict, dataclass
from typing import Optional

# keep-sets are regex character-class bodies
SCRIPT_PRESETS = {
    "arabic": "\u0621-\u064a\u0671-\u06d3\u0660-\u06690-9",
    "latin": "A-Za-z0-9",
}

URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
MENTION_RE = re.compile(r"@\w+")
HASHTAG_RE = re.compile(r"#(\w+)")
RETWEET_TOKENS = frozenset({"RT", "rt"})


_script_cache: dict = {}


def _script_re(spec):
    if spec is None:
        return None
    if spec not in _script_cache:
        body = SCRIPT_PRESETS.get(spec, spec)
        _script_cache[spec] = re.compile(f"[^{body}\\s]")
    return _script_cache[spec]


@dataclass(frozen=True)
class NormalizationConfig:
    remove_urls: bool = True
    remove_tweet_symbols: bool = True
    remove_punctuation: bool = True
    script_filter: Optional[str] = "arabic"
    hashtag_underscore_to_space: bool = True
    collapse_whitespace: bool = True

    def __post_init__(self):
        if not self.collapse_whitespace:
            raise ValueError("collapse_whitespace cannot be disabled")
        # fail early on a bad character class
        _script_re(self.script_filter)

    @classmethod
    def from_dict(cls, data: dict) -> "NormalizationConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown normalization options: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = NormalizationConfig()
LATIN_CONFIG = NormalizationConfig(script_filter="latin")

def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def _hashtag(match: re.Match, underscores: bool) -> str:
    body = match.group(1)
    return body.replace("_", " ") if underscores else body


def normalize(text: str, config: NormalizationConfig = DEFAULT_CONFIG) -> str:
    """Strip URLs, tweet markup, punctuation and out-of-script characters.

    Removed characters become spaces (combining marks are dropped outright
    so diacritics do not split words); whitespace is collapsed at the end.
    """
    if config.remove_urls:
        text = URL_RE.sub(" ", text)
    if config.remove_tweet_symbols:
        text = MENTION_RE.sub(" ", text)
        text = HASHTAG_RE.sub(lambda m: _hashtag(m, config.hashtag_underscore_to_space), text)
        text = text.replace("#", " ")
    elif config.hashtag_underscore_to_space:
        text = HASHTAG_RE.sub(lambda m: "#" + m.group(1).replace("_", " "), text)
    if config.remove_punctuation:
        text = "".join(" " if _is_punct(ch) else ch for ch in text)
    script = _script_re(config.script_filter)
    if script is not None:
        text = "".join(ch for ch in text if unicodedata.category(ch)[0] != "M")
        text = script.sub(" ", text)
    tokens = text.split()
    if config.remove_tweet_symbols:
        tokens = [t for t in tokens if t not in RETWEET_TOKENS]
    return " ".join(tokens)


def tokenize(text: str) -> list[str]:
    return text.split()


def preprocess(text: str, config: NormalizationConfig = DEFAULT_CONFIG) -> list[str]:
    return tokenize(normalize(text, config))


def preprocess_corpus(corpus, config: NormalizationConfig = DEFAULT_CONFIG):
    """Return a copy of ``corpus`` whose documents carry normalized tokens."""
    return corpus.map_docs(lambda d: d.with_tokens(preprocess(d.raw_text, config)))
