"""Maximum-lifetime routing for symmetric sensor networks."""
from .canonical import canonicalize, cancel_pairwise, check_invariance, remove_intra_orbit, symmetrize, weighted_average
from .errors import InfeasibleError, ReductionError, SolverError, SymlifeError, SymmetryError, ValidationError
from .geometry import Isometry, Point, wedge_classify
from .model import EnergyModel, NetworkInstance, build_energy_matrix, validate_instance
from .reduction import lift_solution, reduce_instance, solve_reduced, verify_reduction
from .solver import Solution, lifetime_cycles, solve_max_lifetime
from .symmetry import SymmetryGroup, detect_symmetry_group, fundamental_region, orbits, stabilizer

__version__ = "0.1.0"
