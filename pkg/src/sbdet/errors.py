"""Exception hierarchy shared by all sbdet modules."""


class SBError(Exception):
    """Base class for every error raised by sbdet."""


# fields
class ZeroRadicand(SBError):
    pass


class DuplicateGeneratorName(SBError):
    pass


class TooManyLayers(SBError):
    pass


class TowerMismatch(SBError):
    pass


class NotInBaseField(SBError):
    pass


class NormNotOne(SBError):
    pass


class ExhaustedCandidates(SBError):
    def __init__(self, seed, attempts):
        super().__init__(f"no nonzero Hilbert-90 candidate after {attempts} tries (seed={seed})")
        self.seed = seed
        self.attempts = attempts


class ZeroInput(SBError):
    pass


# matrices
class Singular(SBError):
    def __init__(self, message, adjugate=None):
        super().__init__(message)
        self.adjugate = adjugate


class DegenerateColumn(SBError):
    def __init__(self, message, column=None, stage=None):
        super().__init__(message)
        self.column = column
        self.stage = stage


# severi
class XiZero(SBError):
    pass


class XiIsCube(SBError):
    pass


class NotRepresentant(SBError):
    pass


class ZeroVector(SBError):
    pass


class SingularResult(SBError):
    pass


class ScalarInput(SBError):
    pass


class NotMonomialForm(SBError):
    pass


# birmaps
class DegenerateComposition(SBError):
    pass


class ParityViolation(SBError):
    pass


class DegreeParityMismatch(SBError):
    pass


class BasePoint(SBError):
    pass


# relations
class FormulaMismatch(SBError):
    def __init__(self, identity, detail=""):
        super().__init__(f"{identity} failed" + (f": {detail}" if detail else ""))
        self.identity = identity


class NormMismatch(SBError):
    pass


class LedgerFailure(SBError):
    def __init__(self, identity, detail=""):
        super().__init__(f"ledger identity {identity} failed" + (f": {detail}" if detail else ""))
        self.identity = identity


# abelianization
class WordError(SBError):
    pass


class MissingContext(SBError):
    pass


class NotAnEndomorphismWord(SBError):
    pass


class MissingPrime(SBError):
    pass


class DistinguishedClass(SBError):
    pass


# cli / session
class SessionSyntaxError(SBError):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownName(SBError):
    pass


class RadicandIsCube(SBError):
    pass
