"""p-adic multiframelets on finite-dimensional test spaces."""

from .errors import (
    ConvergenceFailure,
    DepthTooCoarse,
    FamilyNotInSpace,
    IndexMismatch,
    NotAFrame,
    NotHermitian,
    PAdicError,
    PAdicFrameError,
    RefinementBudgetExceeded,
)
from .frames import (
    FrameBounds,
    TestSpace,
    canonical_dual,
    coefficients,
    frame_bounds,
    frame_operator,
    gram_matrix,
    is_frame_via_injectivity,
    reconstruct,
    restrict_to_span,
)
from .functions import (
    CharAtom,
    LCFunction,
    canonicalize,
    dilate_translate,
    indicator,
    inner_product,
    quadrature_inner_product,
)
from .linalg import hermitian_eigensystem
from .padic import Ball, PAdic, character, fractional_part, norm, valuation
from .wavelets import (
    IndexSet,
    build_family,
    fractions_with_exact_depth,
    khrennikov_shelkovich_generators,
    kozyrev_generators,
)

__version__ = "0.1.0"
