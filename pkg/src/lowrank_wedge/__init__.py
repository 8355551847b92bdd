"""Exact evaluation of exterior products of low-rank forms.

Covers the permanent-to-D22 reduction, the mixed-discriminant identity and
amplitudes of fermions prepared in pairwise-entangled quadruplets.
"""

from .exterior import (
    KFormFamily,
    TwoFormFamily,
    d22_float_fast,
    d22_subset_sum,
    d22_wedge,
    dkr_eval,
    dkr_wedge,
)
from .fermion import (
    ScatteringProblem,
    amplitude_d22,
    amplitude_fock,
    haar_unitary,
    output_distribution,
)
from .mixed_disc import Rank2Factors, embed_rank2, mixed_discriminant, verify_md_identity
from .reduction import (
    ReductionLayout,
    TwoColorGraph,
    cycle_cover_sum,
    reduce_permanent,
    verify_reduction,
)
from .ring import (
    DEFAULT_PRIME,
    DimensionError,
    ModP,
    SizeGuardError,
    UnsupportedScalarError,
    det,
    permanent_naive,
    permanent_ryser,
)

__version__ = "0.1.0"
