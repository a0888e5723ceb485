"""n-cubic pyramid algebras: quivers, relations, resolutions and the cone recursion."""
from .linalg import QQ, Field, field_from_name
from .quiver import (Cuboid, Skeleton, cell, cover_window, cuboid_of, generate_quiver, hammock, omega,
                     stable_quiver, vmap, vmap_bar)
from .algebra import (ANTICOMMUTATIVE, COMMUTATIVE, BoundAlgebra, CoefficientScheme, build_algebra,
                      cover_algebra, opposite, quadratic_dual, restrict, stable_extension)
from .resolution import (KoszulType, ResolutionReport, compare, koszul_classify, minimal_resolution, period,
                         predict_resolution, syzygy_orbit)
from .constructions import cone, cuboid_completion, projective_injective_report, tau_slice, truncate
from .verification import check_admissibility_i, check_translation_axioms, run_corpus

__version__ = "0.1.0"
