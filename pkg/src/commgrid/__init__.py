"""Persistence modules over commutative grids with exact arithmetic."""
from .errors import InternalInconsistency
from .linalg import FieldSpec, Matrix
from .quiver import Arrow, GridQuiver, equioriented, make_grid
from .rep import (
    Rep,
    base_change,
    dim_total,
    dim_vector,
    direct_sum,
    hom_dim,
    injective,
    projective,
    support,
    validate,
)
from .intervals import (
    ClassificationReport,
    InconsistentRebase,
    NotAnInterval,
    NotPreInterval,
    Staircase,
    classify,
    count_by_size,
    count_intervals,
    enumerate_intervals,
    find_separating_line,
    interval_rep,
    narayana,
    rebase,
    staircase_from_support,
    support_from_staircase,
    thin_decompose,
)
from .ar import SourceMapData, multiplicity, source_map_target, tau_inverse
from .oracle import OracleVerdict, interval_decomposable, s_decomposable
from .bruteforce import Decomposition, decompose, is_isomorphic, multiplicity_bruteforce
from .generators import random_cokernel, random_interval_sum, random_thin
from .io import parse_module, write_module

__version__ = "0.1.0"
