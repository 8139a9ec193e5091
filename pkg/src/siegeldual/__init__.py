"""Exact computations with Siegel objects of lattices carrying a nilpotent operator.

The main entry points are re-exported here; see the submodules for details.
"""

from .errors import SiegelError
from .exact import (
    QQ,
    FiniteField,
    LaurentSeries,
    Poly,
    RationalFunctionField,
    parse_field,
    theta_shift,
)
from .lattice import (
    ArrangedBasis,
    LatticeInstance,
    QBasisElement,
    arrange_segments,
    check_condition_31,
    chi_basis,
    dual_lattice,
    extract_siegel,
    make_jordan_matrix,
    omega_basis,
    roundtrip_dual,
    verify_pairing,
)
from .linalg import BlockShape, Mat, NPolyMatrix
from .partitions import JordanData, PartitionWithZeroes, dual_jordan_data, dual_partition, jordan_data
from .siegel import (
    DualSiegelObject,
    PTable,
    SiegelObject,
    build_B,
    build_Bbar,
    build_C,
    build_Cbar,
    build_gothic_P,
    build_gothic_S,
    compute_P,
    dual_siegel,
    recover_Bbar,
    symmetry_s,
    tetra_indices,
    verify_BBbar,
    verify_recurrence,
)

__version__ = "0.1.0"
