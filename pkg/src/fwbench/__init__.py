"""fwbench: finger|Whitney systems and carving/surgery presentations.

The package splits into the F|W calculus (``twists``, ``systems``,
``triviality``), the presentation data model and its checkers
(``presentations``, ``fwcs_rules``), the guarded rewrite operations
(``rewrites``), the system-to-presentation compiler (``compiler``), and
the persistence/service plumbing (``serialization``, ``session``,
``service``, ``cli``).
"""

__version__ = "0.1.0"

from .twists import ParityError, Twist, plan_twist_path, twist_add, twist_negate, twist_parity_ok
from .systems import (
    DiscRecord,
    FWSystem,
    HandClass,
    IncidenceTables,
    compose_factorization,
    concatenate,
    is_boundary_germ_coinciding,
    lift_to_cover,
    lifted_crossings,
    reverse,
    upside_down,
    winding,
    winding_classes,
)
from .triviality import (
    FingerGraph,
    contract_inessential,
    delete_s_trivial,
    dual_sphere_reduce,
    finger_graph,
    graph_is_s_trivial,
    is_monotone,
    s_trivial_by_graph,
)
from .presentations import (
    ComponentRef,
    CurveForest,
    CurveNode,
    DiscForest,
    Family,
    Presentation,
    Report,
    build_b_pair,
    build_family,
    depth,
    level,
    lodges,
    max_depth,
    nests_in,
    validate,
)
from .fwcs_rules import (
    OptimizedCert,
    check_dependency_rules,
    check_fwcs,
    check_optimized,
    generate_fwcs_arrows,
)
from .rewrites import (
    ApplyResult,
    Diff,
    RewriteError,
    RewriteOp,
    SplitFlag,
    apply,
    cancel_hopf,
    cancel_knot_circle,
    enumerate_candidates,
    make_abstract,
    make_concrete,
    slide,
)
from .compiler import (
    CompilerInput,
    CompilerOutput,
    compile_system,
    default_geometry,
    min_cover_degree,
    plunged_pies,
    replay_trace,
)
from .serialization import Document, ParseError, parse, serialize
from .session import Session, SessionError
