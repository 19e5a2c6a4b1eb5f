"""Spiral minimal products of C-totally real submanifolds of odd spheres.

The generating curve is solved in closed form on its admissible interval,
closure of the complete curve is decided from the closing integrals, and
every constructed immersion can be certified by finite differences.
"""

__version__ = "0.1.0"

from .catalog import (  # noqa: E402
    ImmersionChart,
    ProjectivePoint,
    clifford_join,
    fs_distance,
    hopf_project,
    leaf_legendrian_torus,
    leaf_point,
    leaf_real_sphere,
    rotate_fiber,
    spiral_product,
)
from .closing import ClosingHit, J1Profile, density_examples, find_closing, j1_profile  # noqa: E402
from .closure import ClosureCertificate, classify_closure  # noqa: E402
from .curve import (  # noqa: E402
    AdmissibleDomain,
    ArcSolution,
    CompleteCurve,
    CurveParams,
    QuadOptions,
    admissible_domain,
    angular_speed,
    assemble_complete,
    barrier,
    c2_min,
    eval_curve,
    ode1_residual,
    solve_arc,
)
from .verify import (  # noqa: E402
    VerificationReport,
    ctr_defect,
    jacobian,
    legendrian_angle,
    mean_curvature,
    planarity_rank,
    verify_chart,
)
