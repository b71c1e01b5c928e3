"""Exact free-field vertex superalgebra computations on affine space.

Fock spaces of polyvector and form type, BRST charges twisted by a potential
or by Lie structure constants, weightwise cohomology dimensions, and the
refined vanishing-cycles character checked against a theta-quotient oracle.
All arithmetic is exact rational.
"""

from .fock import (
    BiGrade,
    Family,
    FockError,
    ModeKey,
    Monomial,
    Side,
    SpaceSpec,
    State,
    TorusWeights,
    UnboundedBasisError,
    VACUUM,
    enumerate_basis,
    make_space,
    normalize,
)
from .oper import (
    OperatorTerm,
    SymbolicCharge,
    apply_mode,
    apply_term,
    apply_terms,
    instantiate_charge,
    normal_order,
    translate,
)
from .field import ResidueCharge, field_mode, residue_charge
from .charges import (
    CheckReport,
    Potential,
    StructureConstants,
    check_anticommute,
    check_nilpotent,
    chiral_de_rham,
    combine,
    default_torus_weights,
    lie_charge,
    potential_charge,
    random_potential,
)
from .cohomology import (
    CohomologyError,
    CohomologyTable,
    MatrixBlock,
    boundary_matrix,
    chi_van,
    cohomology_dims,
    euler_series,
)
from .qseries import (
    CompareReport,
    SeriesError,
    TruncatedSeries,
    chi_closed_form,
    compare,
    theta,
)
from .modfun import (
    EpsilonReport,
    InducedTruncation,
    ModuleError,
    ZeroModeModule,
    check_epsilon,
    delta_zero_modes,
    induce,
    polynomial_zero_modes,
    singular_vectors,
    zero_modes_from_json,
)

__version__ = "0.1.0"
