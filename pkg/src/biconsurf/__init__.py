"""biconsurf: biconservative surfaces in the three 3-dimensional space forms.

The library constructs the classified families of non-CMC biconservative
surfaces (a surface of revolution in flat space, circle- and orbit-swept
surfaces over profile curves in the sphere and the hyperboloid model) and
numerically verifies every curvature identity they must satisfy, emitting
meshes, plot CSVs and machine-readable verification reports.
"""

from .ambient import (
    EUCLIDEAN3,
    EUCLIDEAN4,
    H3,
    LORENTZ4,
    R3,
    S3,
    Signature,
    SpaceForm,
    orthonormal_complement,
    space_form,
)
from .curvature import (
    CurvatureSolution,
    admissible_interval,
    kappa2,
    ode_rhs,
    prime_constant,
    prime_poly,
    solve_curvature,
    w_value,
)
from .errors import (
    ConditioningError,
    ConstructionError,
    DegenerateSpanError,
    DomainError,
    GeometryError,
    InfeasibleError,
    NoSolutionError,
    ProjectionError,
    SplitRangeError,
    UsageError,
)
from .mesh import Mesh, poincare_ball, sample_mesh, stereographic, write_obj, write_ply
from .pipeline import PipelineConfig, cmd_profile, cmd_solve, cmd_surface, cmd_sweep
from .profile import (
    Branch,
    ProfileCurve,
    RevolutionProfile,
    oracle_deviation,
    profile_oracle_dxdk,
    reconstruct_profile,
    revolution_profile,
)
from .surfaces import (
    SurfacePatch,
    build_h3,
    build_r3_revolution,
    build_s3,
    killing_tangency_check,
)
from .verify import (
    FDScheme,
    PointGeometry,
    VerificationReport,
    biconservative_residual,
    curvature_identity_residuals,
    fd_for_patch,
    fundamental_forms,
    normal_bitension_residual,
    pde_residual,
    point_geometry,
    verify_patch,
    x2f_residual,
)

__version__ = "0.1.0"
