"""Tumbug: a validated IR for pictorial knowledge diagrams.

Construct diagrams from ~30 Building Block kinds, validate them against the
combination grammar, round-trip them through a canonical text format,
render them to SVG, build the stock constructions (primitive acts, sentence
patterns, aspects, syllogisms, flowcharts), and run concept-vector matching
for modal verbs and translation lexicons.
"""

from .model import (
    AttributeBinding,
    CAPayload,
    CorrelationBoxPayload,
    Diagram,
    Edge,
    EdgeKind,
    Element,
    GenericPayload,
    GroupKind,
    Kind,
    MotivationTrianglePayload,
    Position,
    RobinsonIconPayload,
    SlotSpec,
    SplitTimeGroup,
    StateDiagramGroup,
    SwirlyArrayPayload,
    evaluate_correlation,
    new_diagram,
)
from .values import (
    BallInRange,
    ExistenceLevel,
    FuzzyBand,
    FuzzyLabel,
    Match,
    Range,
    Scalar,
    Text,
    Wildcard,
    classify_count,
    classify_ratio,
    wildcard_matches,
)
from .grammar import (
    BasicKind,
    LegalityTable,
    Violation,
    ViolationCode,
    generalize,
    resolve_query,
    scova_classify,
    validate,
)
from .dsl import ParseError, SourceSpan, parse, serialize
from .svg import InvalidDiagram, RenderOptions, render
from .templates import (
    AspectSpec,
    BasicPattern,
    PrimitiveAct,
    build_arithmetic,
    build_aspect,
    build_flowchart,
    build_passive,
    build_pattern,
    build_primitive,
    build_syllogism,
    build_water_pour,
)
from .lexicon import (
    Cell,
    ConceptVector,
    Lexicon,
    ModalTable,
    match_count,
    modal_concepts,
    modal_icon,
    select_word,
)
from .heuristics import Requirement, Trigger, TriggerTag, check, requirements_for

__version__ = "0.1.0"
