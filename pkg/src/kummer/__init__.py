"""Exact relative class numbers of prime cyclotomic fields, certified
Dirichlet L-values near s = 1, and numerical verification of the explicit
bounds tying the two together."""

__version__ = "0.1.0"

from .balls import (  # noqa: F401
    BallComplex,
    BallReal,
    DomainError,
    EnclosureError,
    PrecisionExhausted,
)
