"""Logarithm base handling for divergence values.

All internal computation happens in natural logarithms.  Purely logarithmic
quantities convert between bases by a constant factor; mixed expressions
(extended divergences with linear mass terms) rescale only their log parts,
which the computing functions handle themselves via :meth:`LogBase.ln`.
"""

from __future__ import annotations

import math
from enum import Enum


class LogBase(Enum):
    """Base of the logarithm in which a divergence value is reported."""

    NATS = "nats"
    BITS = "bits"

    @property
    def ln(self) -> float:
        """Natural log of the base: divide a nats value by this to convert."""
        return 1.0 if self is LogBase.NATS else math.log(2.0)

    def from_nats(self, value: float) -> float:
        """Convert a purely logarithmic quantity from nats to this base."""
        return value / self.ln


NATS = LogBase.NATS
BITS = LogBase.BITS
