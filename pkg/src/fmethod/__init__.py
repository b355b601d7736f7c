"""F-method engine: equivariant differential operators from singular vectors."""

__version__ = "0.1.0"
