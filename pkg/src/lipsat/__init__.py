"""Exact membership tests for Lipschitz saturation, saturation and seminormalization."""

from .poly import GREVLEX, LEX, Polynomial, block, parse_poly, polys
from .ideal import (
    GroebnerBasis,
    Ideal,
    colon,
    eliminate,
    groebner,
    ideal_equal,
    ideal_member,
    ideal_member_trace,
    intersect,
    radical_member,
    saturate,
)
from .variety import PresentedRing, RingMorphism, TensorSquare, diff_element, make_morphism, tensor_square
from .arcs import Arc, Branch, Series, make_branch, pair_arc, standard_arc_family
from .closure import (
    IntegralCertificate,
    Proved,
    Refuted,
    SearchBounds,
    Unknown,
    arc_refute,
    certificate_search,
    element_integral,
    newton_member,
    verify_certificate,
)
from .saturation import (
    ChainReport,
    SaturationQuery,
    chain_report,
    constant_on_fibers,
    lipschitz_member,
    lipschitz_seminormalization_member,
    saturation_member,
    seminormalization_member,
)
from .sampler import EpsilonLadder, RatioReport, sample_ideal_ratio, sample_lipschitz_ratio

__version__ = "0.1.0"
