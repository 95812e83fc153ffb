"""
Two-sided norm estimates.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

# Upper-bound method tags
LINF_EXACT = "linf-exact"
STECHKIN = "stechkin"
GEOMETRIC_MEAN = "geometric-mean"
HOLDER_DUAL = "holder-dual"
FACTORIZATION = "factorization"
EXACT = "exact"

LOWER_SLACK = 1e-9


@dataclass
class BoundEstimate:
    """Certified lower bound and optional upper bound for a norm.

    ``lower`` is attained by ``witness`` whenever a witness is given;
    ``upper`` is tagged with the route that produced it.
    """

    lower: float
    upper: Optional[float] = None
    upper_method: Optional[str] = None
    witness: Optional[Any] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def is_consistent(self, slack: float = LOWER_SLACK) -> bool:
        """Check lower <= upper (when an upper bound is present)."""
        if self.upper is None:
            return True
        return self.lower <= self.upper + slack * max(1.0, abs(self.upper))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "upper_method": self.upper_method,
            "params": dict(self.params),
        }
