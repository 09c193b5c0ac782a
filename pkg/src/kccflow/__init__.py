"""Geometric stability analysis of first-order dynamical systems.

Given a polynomial vector field X on R^n (the built-in case is the
Lotka-Volterra competition model), kccflow builds the geometric objects
attached to the least-squares action along flow curves: the semispray,
the nonlinear connections on the tangent and cotangent sides, their
d-torsions, the electromagnetic-like field energy, and the deviation
curvature whose spectrum decides Jacobi stability.
"""

__version__ = "0.1.0"

from .expressions import (  # noqa: F401
    EvaluationError,
    ExpressionError,
    ParseError,
    differentiate,
    evaluate,
    parse_expression,
    to_string,
)
from .vectorfield import (  # noqa: F401
    ModelError,
    VectorFieldModel,
    custom_field,
    field_value,
    hessian_component,
    jacobian,
    load_system,
    lotka_volterra,
)
from .linalg import (  # noqa: F401
    ConvergenceError,
    LinAlgError,
    SingularMatrixError,
    eigenvalues,
    routh_hurwitz_stable,
    solve_linear,
)
from .lagrange import (  # noqa: F401
    LagrangeGeometry,
    d_torsions,
    lagrange_geometry,
    lagrangian,
    nonlinear_connection,
    semispray,
    yang_mills_energy,
)
from .kcc import DeviationReport, deviation_matrix, e_matrix, first_invariant, jacobi_classify  # noqa: F401
from .hamilton import hamilton_connection, hamilton_torsions, hamiltonian, legendre_momenta  # noqa: F401
from .dynamics import (  # noqa: F401
    EquilibriaResult,
    Equilibrium,
    Trajectory,
    el_residual,
    equilibria,
    integrate_euler_lagrange,
    integrate_flow,
)
from .quadric import QuadricError, QuadricSurface, SurfaceMesh, energy_quadratic_form, sample_surface  # noqa: F401
