"""Exception hierarchy shared by every stage of the pipeline."""


class MetaprioError(Exception):
    """Base class for all errors raised by metaprio."""


# front-end


class MiniSyntaxError(MetaprioError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DuplicateFunction(MetaprioError):
    pass


class MiniTypeError(MetaprioError):
    def __init__(self, message, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.col = col


class UnknownStatement(MetaprioError, KeyError):
    def __str__(self):
        return f"unknown statement id {self.args[0]!r}"


class UnknownFunction(MetaprioError, KeyError):
    def __str__(self):
        return f"unknown function {self.args[0]!r}"


# execution


class MiniRuntimeError(MetaprioError):
    """Raised inside the evaluator; surfaced to callers as a profile marker."""


class StepLimitExceeded(MetaprioError):
    pass


class MixedProgramDigest(MetaprioError):
    pass


# metamorphic relations


class ShapeMismatch(MetaprioError):
    pass


class TypeMismatch(MetaprioError):
    pass


# prioritization / evaluation


class DuplicateMr(MetaprioError, ValueError):
    pass


class EmptyMatrix(MetaprioError, ValueError):
    pass


class EmptyCoverage(MetaprioError, ValueError):
    pass


class NoKillableMutants(MetaprioError, ValueError):
    pass


class MixedMrSets(MetaprioError, ValueError):
    pass


# configuration


class ConfigError(MetaprioError):
    pass


class SchemaError(ConfigError):
    pass


class DisjointnessError(ConfigError):
    pass
