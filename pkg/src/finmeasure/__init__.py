"""Exact computations for set functions on finite algebras: variation,
atoms, Gould and Choquet integrals, sequence harnesses and Radon-Nikodym
derivatives over purely atomic monotone set functions."""

from .atoms import (
    AtomDecomposition,
    HypothesisError,
    StructureError,
    all_atoms,
    atom_partition_structure,
    core_atom,
    decompose,
    is_atom,
    locate_atom_point,
)
from .integrate import (
    NotIntegrableError,
    VecFunction,
    atom_integral_check,
    choquet_integral,
    gould_integral,
    integral,
    is_totally_measurable,
    osc,
    simulate_net,
    t_zero,
)
from .kernels import BACKEND
from .limits import (
    FnSequence,
    lebesgue_identity_check,
    uniform_bounded_atom,
    uniform_convergence_atom,
)
from .rn import VecMeasure, integral_measure, integral_measure_properties, prop_formula_check, rn_derivative
from .setfunc import (
    Property,
    SetFunction,
    check_property,
    implication_suite,
    m_star,
    m_tilde,
    variation,
    variation_propagation_check,
)
from .space import (
    MeasureError,
    MSet,
    NotMeasurableError,
    Partition,
    SizeLimitError,
    Universe,
    common_refinement,
    enumerate_partitions,
    finest_partition,
    is_finer,
)

__version__ = "0.1.0"
