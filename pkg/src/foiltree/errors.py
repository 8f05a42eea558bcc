"""Exception types shared across the package."""


class FoilTreeError(Exception):
    """Base class for all errors raised by this package."""


class MalformedCsv(FoilTreeError):
    """A CSV cell or row does not conform to the declared schema."""


class UnknownSchema(FoilTreeError):
    """The requested dataset schema id is not registered."""


class EmptyDataset(FoilTreeError):
    """No usable rows remain after loading/filtering."""


class DegenerateSplit(FoilTreeError):
    """A class with fewer than two instances cannot be stratified."""


class LengthMismatch(FoilTreeError):
    """Prediction and truth vectors have different lengths."""


class InsufficientData(FoilTreeError):
    """The sampling source contains no rows to draw from."""


class FoilEqualsFact(FoilTreeError):
    """The requested contrast class equals the model's own output."""


class LeafNotInTree(FoilTreeError):
    """A leaf id does not belong to the tree being queried."""


class InconsistentConditions(FoilTreeError):
    """Merged path conditions are mutually unsatisfiable (corrupted tree)."""
