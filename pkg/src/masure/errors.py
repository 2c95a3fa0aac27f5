"""Exception types raised by the library."""


class MasureError(Exception):
    """Base class for every library error."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ViolatesGcmAxioms(MasureError):
    code = "ViolatesGcmAxioms"


class RootOutsideTable(MasureError):
    code = "RootOutsideTable"


class NotComparable(MasureError):
    code = "NotComparable"


class HeightBoundExhausted(MasureError):
    code = "HeightBoundExhausted"


class UnregisteredApartment(MasureError):
    code = "UnregisteredApartment"


class DepthExceeded(MasureError):
    code = "DepthExceeded"


class NotTrueWall(MasureError):
    code = "NotTrueWall"


class SheetOutOfRange(MasureError):
    code = "SheetOutOfRange"


class CrossingWall(MasureError):
    """A letter whose root differs from the root already used by its chain."""

    code = "CrossingWall"


class RegistryFrozen(MasureError):
    code = "RegistryFrozen"


class GermContained(MasureError):
    code = "GermContained"


class MixedSigns(MasureError):
    code = "MixedSigns"


class WallImageOutsideTable(MasureError):
    code = "WallImageOutsideTable"


class NotAnAutomorphism(MasureError):
    code = "NotAnAutomorphism"


class ChartExit(MasureError):
    code = "ChartExit"


class DegenerateWitness(MasureError):
    code = "DegenerateWitness"


class ConfigInvalid(MasureError):
    code = "ConfigInvalid"


class InternalInconsistency(MasureError):
    code = "InternalInconsistency"
