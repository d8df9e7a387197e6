"""Exact stationary states of the multispecies ASEP on a ring.

Three independent constructions of the stationary vector of each basic
sector (Markov-kernel null space, multiline-queue sums, matrix-product
traces of oscillator-valued layer operators), plus exact verification
of the algebraic identities that tie them together.
"""

from .asep_core import (
    Multiplicity,
    SectorBasis,
    SparseMatrixRF,
    basic_multiplicities,
    cyclic_shift,
    gillespie,
    local_markov,
    markov_sector,
    multiplicity,
    stationary_kernel,
)
from .ctm import build_T, build_X, mp_stationary, mp_trace, x_matrix
from .mlq import (
    BallSystem,
    PairingOutcome,
    SectorVector,
    bigM_apply,
    enumerate_pairings,
    m_element,
    mcheck_apply,
    mlq_enumerate_direct,
    mlq_state,
    pairing_weight,
    project_pi,
)
from .oscillator import (
    FockTruncation,
    NormalForm,
    normal_order,
    s_element,
    s_weight,
    trace_qh,
    trace_truncated,
)
from .scalar import (
    Poly,
    RatFunc,
    Rational,
    random_point,
    ratfunc_eval,
    ratfunc_normalize,
)

__version__ = "0.1.0"
