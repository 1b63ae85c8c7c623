"""Complete intersections on generic hypersurfaces.

Decides whether the generic degree-``d`` hypersurface of ``P^n`` contains a
complete intersection of type ``(a_1, ..., a_r)`` by computing Hilbert values
of ideals of random forms over a large prime field, and computes dimensions of
joins and secants of varieties of reducible forms.
"""

__version__ = "0.1.0"

from .algebra import (
    Form,
    enumerate_monomials,
    form_from_json,
    form_to_json,
    monomial_index,
    multiply,
    parse_form,
    random_form,
    serialize_form,
)
from .config import Config
from .decision import (
    CIProfile,
    DecisionReport,
    TheoremPrediction,
    Verdict,
    classify,
    decide,
    fano_ci_criterion,
    normalize,
    verify_theorem,
)
from .errors import CapacityError
from .joins import JoinSpec, Partition, defect, join_dim, reducible_dim, secant_dim, tangent_dim
from .series import (
    GorensteinProfile,
    ci_series,
    equigenerated_values,
    froberg_series,
    gorenstein_profile,
    star_lhs,
    symmetry_center,
)
from .slicerank import (
    HilbertVector,
    SliceMatrix,
    build_slice_matrix,
    generic_hilbert_function,
    generic_hilbert_value,
    hilbert_value,
    matrix_rank,
)
