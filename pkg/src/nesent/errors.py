"""Exception hierarchy shared by every pipeline stage."""


class NesentError(Exception):
    """Base class for all domain errors raised by the toolkit."""


# corpus
class CorpusError(NesentError):
    pass


class MissingField(CorpusError):
    def __init__(self, record_no, field):
        super().__init__(f"record #{record_no}: missing field {field!r}")
        self.record_no = record_no
        self.field = field


class DuplicateId(CorpusError):
    def __init__(self, doc_id):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class BadLabel(CorpusError):
    def __init__(self, label):
        super().__init__(f"unknown polarity label {label!r}")
        self.label = label


class BadSplit(CorpusError):
    def __init__(self, split):
        super().__init__(f"unknown split {split!r}")
        self.split = split


# named entities
class AnnotationError(NesentError):
    pass


class MalformedRecord(AnnotationError):
    pass


class UnknownDocId(AnnotationError):
    def __init__(self, doc_id):
        super().__init__(f"annotation refers to unknown document id {doc_id!r}")
        self.doc_id = doc_id


class EmptyGazetteer(AnnotationError):
    def __init__(self):
        super().__init__("gazetteer contains no entities")


class EmptyScope(NesentError):
    def __init__(self, scope):
        super().__init__(f"no documents in scope {scope}")
        self.scope = scope


# lexicon
class LexiconError(NesentError):
    pass


class BadPolarity(LexiconError):
    pass


class ZeroWeight(LexiconError):
    pass


class TermTooLong(LexiconError):
    pass


class EmptyList(LexiconError):
    def __init__(self):
        super().__init__("cannot merge an empty list of lexicons")


class AlreadyTagged(LexiconError):
    def __init__(self):
        super().__init__("lexicon already contains PosNE/NegNE entries")


class NoDpWeights(LexiconError):
    pass


# supervised
class SupervisedError(NesentError):
    pass


class EmptyTrainingSet(SupervisedError):
    def __init__(self):
        super().__init__("training set is empty")


class MissingClass(SupervisedError):
    def __init__(self, missing):
        super().__init__(f"training data has no examples of class {missing}")
        self.missing = missing


class DimensionMismatch(SupervisedError):
    pass


class NonPositiveReg(SupervisedError):
    def __init__(self, reg):
        super().__init__(f"regularization strength must be > 0, got {reg}")


class ModelFormatError(SupervisedError):
    pass


# evaluation
class EvaluationError(NesentError):
    pass


class LengthMismatch(EvaluationError):
    pass


class NonBinaryLabel(EvaluationError):
    pass


class ConfigError(NesentError):
    pass
