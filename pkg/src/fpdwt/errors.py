"""Exception types raised across the toolkit."""


class FingerprintError(Exception):
    """Base class for every error raised by fpdwt."""


# ingest
class UnsupportedFormat(FingerprintError, ValueError):
    pass


class CorruptHeader(FingerprintError, ValueError):
    pass


class EmptyDataset(FingerprintError, ValueError):
    pass


class MalformedFilename(FingerprintError, ValueError):
    def __init__(self, paths):
        self.paths = [str(p) for p in paths]
        super().__init__("malformed filename(s): " + ", ".join(self.paths))


# dwt
class EmptyInput(FingerprintError, ValueError):
    pass


class DimensionMismatch(FingerprintError, ValueError):
    pass


class ImageTooSmall(FingerprintError, ValueError):
    pass


# texture
class BadRange(FingerprintError, ValueError):
    pass


class NoPairs(FingerprintError, ValueError):
    pass


# orientation / edges
class BandTooSmall(FingerprintError, ValueError):
    pass


class PlaneTooSmall(FingerprintError, ValueError):
    pass


# templates
class IoFailure(FingerprintError, OSError):
    pass


class SchemaMismatch(FingerprintError, ValueError):
    pass


class ConfigHashMissing(FingerprintError, ValueError):
    pass


# matching / evaluation
class LengthMismatch(FingerprintError, ValueError):
    pass


class UnknownFinger(FingerprintError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ConfigMismatch(FingerprintError, ValueError):
    pass


class OverlapError(FingerprintError, ValueError):
    pass
