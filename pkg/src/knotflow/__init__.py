"""Templates for flows, the knots their orbits tie, and a gluing model."""

from .errors import (
    BudgetExceeded,
    CoveringFailed,
    DegenerateProjection,
    DisconnectedClosure,
    EmptyRestriction,
    InvalidPleating,
    KnotflowError,
    NoConvergence,
    NonIncrementalTwists,
    NotAKnot,
    SeedingFailure,
    StepBudgetExceeded,
    UnsupportedCarrier,
)
from .templates import (
    BranchLine,
    Crossing,
    PleatedTemplate,
    Strip,
    Template,
    Violation,
    horseshoe,
    lorenz,
    mirror,
    parse_template,
    restrict_to_strips,
    serialize_template,
    universal,
    validate,
)
from .symbolic import (
    Word,
    canonical,
    enumerate_orbits,
    format_word,
    is_admissible,
    is_primitive,
    parse_word,
    strand_order,
)
from .diagram import (
    Diagram,
    DiagramCrossing,
    braid_to_diagram,
    linking_number,
    orbits_to_diagram,
    render_svg,
    twist_of_orbit,
    writhe,
)
from .laurent import LaurentPoly
from .invariants import (
    Verdict,
    alexander,
    alexander_of_diagram,
    are_separable,
    canonical_genus_positive_braid,
    genus_bound_of_diagram,
    genus_lower_bound,
    is_unknot,
    seifert_circle_count,
    simplify_code,
    unknot_verdict,
    writhe_minus_circles_bound,
)
from .universality import (
    Certificate,
    certificate_failures,
    check_universal_sufficient,
    find_certificate_with_twist,
    parse_certificate,
    serialize_certificate,
    verify_certificate,
)
from .pleated import (
    BifurcationClass,
    PleatedSystem,
    PleatingSignature,
    build_pretemplate,
    canonical_sides,
    check_incremental,
    classify_bifurcation,
    double_horseshoe_system,
    mirror_system,
    sample_pleated_system,
    three_strip_catalogue,
    three_strip_mirror_pairs,
    validate_pleating,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
