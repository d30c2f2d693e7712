"""Exact computations with regular singular connections A dlog z for GL_n and SL_n."""
from .align import AlignedConnection, align
from .centralizer import (
    CentralizerData,
    TorsionClass,
    centralizer_data,
    semisimple_class_to_torus,
    torsion_elements,
    torus_matrix,
)
from .classify import (
    DModuleDecomposition,
    ShiftMatch,
    can_map,
    dmodule_decompose,
    gl_equivalent,
    related,
    shift_match,
    sl_classify_rel_to,
    sl_equivalent,
    sl_gauge_equivalent,
)
from .connection import (
    Connection,
    GaugeMap,
    classify_shape,
    descend,
    galois_act_conn,
    gauge_apply,
    gauge_relates,
    pullback,
)
from .errors import *  # noqa: F401,F403
from .linalg import (
    JordanDatum,
    Matrix,
    ad_eigenvalues,
    is_zero_class,
    jordan_block,
    jordan_decomposition,
    jordan_form,
)
from .reduce import CocharSolution, find_cocharacter, standardize, zero_standardize
from .relatives import CocycleRep, cocycle_of, push_cocycle, realize_relative, relatives_list
from .scalars import CycScalar, cyc_arith, embed, is_integer, rational_part, root_of_unity
from .series import LogForm, RamifiedSeries, galois_act, invert_to_precision, series_arith, substitute_power, z_ddz
from .textio import (
    format_connection,
    format_matrix,
    format_scalar,
    format_series,
    parse_connection,
    parse_matrix,
    parse_scalar,
    parse_series,
)

__version__ = "0.1.0"
