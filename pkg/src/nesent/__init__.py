"""Named-entity polarity mining and sentence-level sentiment classification.

Pipeline order: normalize -> tokenize -> mine entity polarity on the training
split -> tag PosNE/NegNE in both splits -> lexicon scoring or n-gram
classifiers -> macro-averaged evaluation.
"""

__version__ = "0.1.0"

from .corpus import Corpus, Document, Polarity, Split, load_corpus, split_summary
from .errors import NesentError
from .evaluation import AblationConfig, evaluate, run_ablation
from .lexicon import (Lexicon, LexiconEntry, Scheme, TiePolicy, add_ne_tags, dp_score, load_lexicon,
                      merge_lexicons, segment_and_match, sfs_score)
from .ne_provider import NamedEntity, NeAnnotations, gazetteer_match, load_annotations
from .ne_sentiment import Scope, detect_ne_polarity, tag_entities
from .preprocess import NormalizationConfig, normalize, tokenize
from .supervised import (NGramConfig, build_feature_space, predict_nb, predict_svm, train_nb, train_svm,
                         vectorize)
