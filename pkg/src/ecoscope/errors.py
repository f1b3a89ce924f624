"""Exception hierarchy shared by all ecoscope modules."""


class EcoscopeError(Exception):
    """Base class for every error raised by this package."""


# snapshot ingestion

class SnapshotFormatError(EcoscopeError, ValueError):
    pass


class MissingHeaderError(SnapshotFormatError):
    def __init__(self):
        super().__init__("snapshot header line (ecosystem, captured_at) is missing")


class MalformedLineError(SnapshotFormatError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateNameError(SnapshotFormatError):
    def __init__(self, name, line):
        self.name = name
        self.line = line
        super().__init__(f"line {line}: duplicate package name {name!r}")


# registry clients

class RegistryError(EcoscopeError):
    pass


class NotFoundError(RegistryError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"package {name!r} not found in registry")


class RateLimitedError(RegistryError):
    pass


class TransportError(RegistryError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"transport failure: {reason}")


# analytics

class EmptyInputError(EcoscopeError, ValueError):
    pass


class EmptyGraphError(EmptyInputError):
    pass


class EmptySnapshotError(EmptyInputError):
    pass


class EmptySampleError(EmptyInputError):
    pass


class EmptyArchiveError(EmptyInputError):
    pass


class NoNamesOfLengthError(EmptyInputError):
    pass


class ZeroTotalError(EcoscopeError, ValueError):
    pass


class UnknownPackageError(EcoscopeError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown package {self.name!r}"


class InvalidXminError(EcoscopeError, ValueError):
    pass


class InsufficientTailError(EcoscopeError, ValueError):
    pass


class FutureReleaseError(EcoscopeError, ValueError):
    pass


class WrongEcosystemError(EcoscopeError, ValueError):
    pass
