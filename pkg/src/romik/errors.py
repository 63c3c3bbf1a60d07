class RomikError(ValueError):
    """Base class for domain errors raised by this package."""


class IncompatibleFieldsError(RomikError):
    pass


class NotOnCircleError(RomikError):
    pass


class OutsideQuarterCircleError(RomikError):
    pass


class SearchLimitError(RomikError):
    """A bounded search or iteration ran past its configured cap."""


class DegenerateWordError(RomikError):
    pass


class InvariantError(RomikError):
    """An exact identity that must hold by construction failed."""
