"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised for invalid field, convention or kernel configuration."""


class FiducialError(ValueError):
    """Raised when a fiducial state has vanishing displacement overlaps."""
