"""Normal-form Kirby diagrams of thickenings, Tietze moves and stable diffeomorphism."""

from .algebra import (
    SmithForm,
    coboundary_matrix,
    coboundary_witness,
    h1_invariants,
    h2_f2_dimension,
    smith_normal_form,
    symmetric_signature,
)
from .classify import (
    DistinctInvariant,
    NotDetermined,
    StablyDiffeomorphic,
    stable_diffeo_decide,
    tietze_search,
    transport,
)
from .diagram import (
    NormalFormDiagram,
    NormalOneTypeData,
    canonicalize,
    euler_characteristic,
    from_presentation,
    linking_matrix,
    normal_one_type,
    signature,
    validate,
)
from .errors import (
    KirbyTietzeError,
    MalformedInputError,
    ParseError,
    PreconditionError,
    RejectedMoveError,
)
from .groups import FiniteGroup, hom_count
from .moves import MoveCertificate, apply_move, replay
from .presentation import (
    Presentation,
    Word,
    cyclic_reduce,
    free_reduce,
    tietze_S1,
    tietze_S2,
    tietze_T1,
    tietze_T1_inverse,
)
from .surgery import realize_presentation_by_surgery, surgery_on_loop

__all__ = [
    "SmithForm",
    "coboundary_matrix",
    "coboundary_witness",
    "h1_invariants",
    "h2_f2_dimension",
    "smith_normal_form",
    "symmetric_signature",
    "DistinctInvariant",
    "NotDetermined",
    "StablyDiffeomorphic",
    "stable_diffeo_decide",
    "tietze_search",
    "transport",
    "NormalFormDiagram",
    "NormalOneTypeData",
    "canonicalize",
    "euler_characteristic",
    "from_presentation",
    "linking_matrix",
    "normal_one_type",
    "signature",
    "validate",
    "KirbyTietzeError",
    "MalformedInputError",
    "ParseError",
    "PreconditionError",
    "RejectedMoveError",
    "Presentation",
    "Word",
    "cyclic_reduce",
    "free_reduce",
    "tietze_S1",
    "tietze_S2",
    "tietze_T1",
    "tietze_T1_inverse",
    "FiniteGroup",
    "hom_count",
    "MoveCertificate",
    "apply_move",
    "replay",
    "realize_presentation_by_surgery",
    "surgery_on_loop",
]

__version__ = "0.1.0"
