"""localg: exact computer algebra for partial-independence structures."""

from .fields import QQ, Field
from .linalg import LinMap, Subspace, kernel_sum_identity_check, rref, tensor_embed
from .core import (
    BlocksRelation,
    LocalitySpace,
    LocMap,
    NotLocalityError,
    OrthoRelation,
    PairsRelation,
    Verdict,
    closure,
    freespan_quotient_iso_check,
    independent_maps,
    is_locality_space,
    loc_cartesian,
    polar,
)

__version__ = "0.1.0"
