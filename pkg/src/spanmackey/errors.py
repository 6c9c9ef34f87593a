"""Exception hierarchy shared by every module of the package."""


class SpanMackeyError(Exception):
    """Base class for all errors raised by spanmackey."""


class NotAGroup(SpanMackeyError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedParameter(SpanMackeyError, ValueError):
    pass


class OversizeInput(SpanMackeyError, ValueError):
    pass


class NotASubgroupChain(SpanMackeyError, ValueError):
    pass


class NotEquivariant(SpanMackeyError, ValueError):
    pass


class ClassMismatch(SpanMackeyError, ValueError):
    pass


class DimensionMismatch(SpanMackeyError, ValueError):
    pass


class OversizeCategory(SpanMackeyError, ValueError):
    pass


class IncoherentPseudoData(SpanMackeyError, ValueError):
    pass


class MissingCoproducts(SpanMackeyError, TypeError):
    pass


class NotCommuting(SpanMackeyError, ValueError):
    pass


class LegMismatch(SpanMackeyError, ValueError):
    pass


class SchemaError(SpanMackeyError, ValueError):
    pass
