"""Exact invariant laminations of the unit circle.

Chords of the circle R/Z with rational endpoints, studied under the
angle d-tupling map sigma_d.  Everything is computed in exact rational
arithmetic; floats appear only in the SVG renderer.

The pieces:

* :mod:`lamina.circle` -- angles, chords, polygons, linkage tests
* :mod:`lamina.orbits` -- forward orbits, periodic components, strips
* :mod:`lamina.lamination` -- laminations, invariance checks, pullback
  generation, gaps
* :mod:`lamina.accordion` -- accordions of linked chord pairs and their
  case analysis
* :mod:`lamina.portrait` -- critical portraits of quadratically
  collapsing data, linkage, smart selection of critical collections
* :mod:`lamina.cotags` -- cubic co-critical tags
* :mod:`lamina.fileio` / :mod:`lamina.render` / :mod:`lamina.cli` --
  text formats, SVG pictures, command line
"""

from .accordion import (
    Accordion,
    AccordionCase,
    JointOrbitStructure,
    MutualOrderReport,
    OrderViolation,
    accordion_vs_lamination,
    classify_accordion,
    joint_orbit_structure,
    mutually_order_preserving,
    orbit_accordion,
    order_preserving_on,
)
from .circle import (
    Angle,
    Arc,
    Chord,
    ConvexSet,
    PairClass,
    Polygon,
    chords_linked,
    circular_distance,
    classify_pair,
    convex_hull,
    holes,
    in_arc,
    is_critical,
    leaf_length,
    sigma,
    sigma_chord,
    sigma_hull,
    strongly_linked,
    vertices_of,
)
from .cli import CommandResult, cli_dispatch, main
from .cotags import (
    AdmissibleCriticalSet,
    CoTag,
    UscReport,
    cocritical_set,
    cotag,
    reconstruct_from_cocritical,
    rotate,
    tags_relation,
    usc_witness_check,
)
from .errors import LaminaError, ParseError, PreconditionError
from .fileio import (
    parse_angle,
    parse_chord,
    parse_convex,
    parse_critical_collection,
    parse_lamination,
    parse_portrait,
    parse_tag_input,
    serialize_convex,
    serialize_critical_collection,
    serialize_lamination,
    serialize_portrait,
    serialize_tag,
)
from .lamination import (
    EquivalencePartition,
    FullCriticalCollection,
    Gap,
    Lamination,
    PropernessReport,
    PullbackDiscard,
    SiblingReport,
    ValidationReport,
    branch_inverse,
    chord_hausdorff,
    check_sibling_invariance,
    disjoint_sibling_collections,
    endpoint_star,
    equiv_classes,
    gap_degree,
    gaps,
    is_proper,
    isolated_leaf_diagnostic,
    pullback_generate,
    sibling_candidates,
    validate,
)
from .orbits import (
    CentralStrip,
    ComponentStructure,
    LeafOrbitInfo,
    OrbitInfo,
    StripVerdict,
    TransitivityReport,
    WanderingReport,
    angle_orbit,
    central_strip,
    central_strip_analyze,
    check_gap_transitivity,
    hulls_interiors_intersect,
    hulls_touch_or_intersect,
    leaf_orbit,
    periodic_components,
    wandering_check,
)
from .portrait import (
    CollapsingQuad,
    LinkageVerdict,
    PortraitReport,
    QCPortrait,
    compatible,
    critical_chain,
    full_collections,
    is_collapsing_quad,
    linkage_verdict,
    smart_critical_collection,
    validate_portrait,
)
from .render import RenderStyle, render_svg
