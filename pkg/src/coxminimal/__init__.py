"""Cox rings of minimal models of quotient singularities."""

__version__ = "0.1.0"
