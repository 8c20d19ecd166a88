"""Exact subgroup-lattice and garland computations for tori of etale algebras."""

from .config import DEFAULT_CAPS, Caps
from .etale import (
    AlgebraElement,
    AlgebraSpec,
    RingAutomorphism,
    additive_span_check,
    algebra_norm,
    aut_group,
    aut_group_size,
    count_power_in_base,
    primitive_norm_one_search,
    regular_rep,
    select_all_units,
    select_norm_one,
    torus_units,
)
from .finite_field import (
    Extension,
    FieldElement,
    FieldMatrix,
    FieldTable,
    construct_extension,
    construct_field,
    extension_of,
    frobenius,
    is_primitive_element,
    norm_to_base,
)
from .lattice import (
    Garland,
    IntervalLattice,
    NormalityGraph,
    VerificationReport,
    enumerate_interval,
    garlands,
    interval_restriction_check,
    normality_graph,
    verify_lower_garland,
)
from .matrix_group import (
    GL,
    SL,
    AmbientGroup,
    Subgroup,
    ambient_group,
    centralizer_brute,
    generate,
    is_maximal_abelian,
    is_normal_in,
    normalizer_brute,
    normalizer_formula,
    torus_subgroup,
)
from .pell import (
    NormalizerShape,
    PellSolution,
    QuadraticCase,
    continued_fraction_sqrt,
    negative_pell,
    positive_pell,
    sl2q_normalizer_report,
)
from .runner import CaseSpec, run_case, run_sweep, sweep_cases

__version__ = "0.1.0"
