"""Tail-probability bounds from cumulant transforms.

Given a distribution presented through K(xi) = log E[exp(xi*X)], the
package computes the Chernoff upper bound exp(-I(y)) and a
complementary two-parameter tilted lower bound on P(X >= y), alongside
three comparison estimates (a Chebyshev-interval bound, a
pinned-second-parameter bound, and the saddlepoint integral), all
validated against exact tails and Monte Carlo.

Hot kernels run on a compiled extension when built; a pure-Python
fallback is selected automatically at import (see
``tailbounds.backend_name``).
"""

from ._backend import backend_name, has_compiled, set_backend
from .bounds import (
    BoundResult,
    ObjectiveState,
    bo_delta,
    bo_lower,
    chernoff_upper,
    delta_hat,
    delta_star,
    lower_bound_new,
    objective_L,
    objective_grid,
    saddlepoint_tail,
    stroock_lower,
)
from .legendre import (
    DualPoint,
    TiltedRates,
    dual_point,
    rate,
    tilted_pair,
    tilted_rate,
    xi,
    xi_inverse,
    xi_prime,
)
from .models import (
    CumulantModel,
    DistributionSpec,
    cumulant_eval,
    custom_model,
    exact_tail,
    make_model,
    parse_spec,
    regularized_upper_gamma,
)
from .montecarlo import McEstimate, empirical_tail, sample, wilson_interval
from .numerics import (
    AccuracyWarning,
    OptimBracket,
    RootBracket,
    find_root,
    integrate_adaptive,
    maximize_unimodal,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "BoundResult",
    "CumulantModel",
    "DistributionSpec",
    "DualPoint",
    "McEstimate",
    "ObjectiveState",
    "OptimBracket",
    "RootBracket",
    "TiltedRates",
    "backend_name",
    "bo_delta",
    "bo_lower",
    "chernoff_upper",
    "cumulant_eval",
    "custom_model",
    "delta_hat",
    "delta_star",
    "dual_point",
    "empirical_tail",
    "exact_tail",
    "find_root",
    "has_compiled",
    "integrate_adaptive",
    "lower_bound_new",
    "make_model",
    "maximize_unimodal",
    "objective_L",
    "objective_grid",
    "parse_spec",
    "rate",
    "regularized_upper_gamma",
    "sample",
    "saddlepoint_tail",
    "set_backend",
    "stroock_lower",
    "tilted_pair",
    "tilted_rate",
    "wilson_interval",
    "xi",
    "xi_inverse",
    "xi_prime",
]
