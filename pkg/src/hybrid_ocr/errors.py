"""Exception hierarchy shared by every stage of the recognizer."""


class OCRError(Exception):
    """Base class for all recognizer errors."""


class ImageFormatError(OCRError):
    """Unsupported magic number, bit depth or compression."""


class CorruptFileError(OCRError):
    """Header fields out of range or pixel payload truncated."""


class NoContentError(OCRError):
    """No ink where ink was required (blank page, empty region, noise only)."""


class ConfigurationError(OCRError, ValueError):
    """Invalid configuration or an empty prototype store."""


class DimensionError(OCRError, ValueError):
    """Vectors of mismatched length."""


class DegenerateInputError(OCRError, ValueError):
    pass


class ConvergenceError(OCRError):
    """Maxnet did not isolate a single winner."""


class IncompleteTrainingSetError(OCRError):
    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(self.missing[:10])
        more = f" (+{len(self.missing) - 10} more)" if len(self.missing) > 10 else ""
        super().__init__(f"training set incomplete, missing: {shown}{more}")


class StoreLoadError(OCRError):
    """Base class for prototype store parse failures."""


class StoreVersionError(StoreLoadError):
    pass


class CorruptStoreError(StoreLoadError):
    pass


class StoreRangeError(StoreLoadError):
    """A stored value is non-finite or outside its feature's range."""


class UnresolvedCodeError(OCRError, ValueError):
    """A code string still carries '?' placeholders."""
