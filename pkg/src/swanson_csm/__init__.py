"""Complex scaling of the Swanson Hamiltonian in the inverted-oscillator region."""
from .errors import (DegenerateParameters, DegreeTooLarge, IoError, OutOfAccuracyEnvelope,
                     OverflowGuard, RegionError, SeriesNonConvergent, SwansonError,
                     TimeNonPositive, ToleranceNotReached, TruncationInsufficient)
from .model import (Branch, DerivedQuantities, ModelParams, Region, Side, classify_region,
                    derive_quantities, parse_theta, principal_axis_slope, stretch_slope)
from .special import (QuadraturePolicy, QuadratureRule, assoc_laguerre, erf_complex, hermite,
                      hermite_functions, integrate_line, parabolic_cylinder_D)
from .eigen import (EigenstateId, biorthogonality_matrix, continuum_eigenfunction,
                    eigenfunction, eigenfunction_stack, eigenvalue, upsilon)
from .propagator import (ComplexField, eigenstate_evolution_closed, evolve_quadrature,
                         expansion_coefficients, kernel_K, kernel_dressed,
                         split_retarded_advanced)
from .packets import (DensityRegime, PacketKind, current_closed, density_closed, density_x,
                      moments, packet_evolved_closed, packet_initial, persistence_Q,
                      persistence_scaled, survival_general, survival_probability)
from .wigner import (PhaseSpaceGrid, density_from_wigner, principal_axis, wigner_grid,
                     wigner_mn, wigner_numeric, wigner_packet_closed)
from .rhs import (csm_rhs_equivalence_report, g_n, rhs_biorthogonality, rhs_evolve_gaussian,
                  rhs_persistence, rhs_survival)

__version__ = "0.1.0"
