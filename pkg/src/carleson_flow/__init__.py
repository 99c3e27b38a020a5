"""Exact Carleson constants and optimal sparse witnesses for finite set collections."""

from .brute import brute_lambda, brute_min_f
from .constant import CarlesonResult, CarlesonViolation, Certificate, carleson_constant, check_carleson, ratio
from .flow import INF, Cut, Flow, FlowNetwork, build_network, max_flow, min_cut
from .generate import GeneratorSpec, generate, generate_instance
from .model import (
    Atom,
    Box,
    Collection,
    DyadicCube,
    InvalidCollection,
    SetOccurrence,
    atom_measures_from_oracle,
    build_from_atoms,
    build_from_boxes,
    build_from_dyadic,
    union_measure,
)
from .sfm import MinimizationResult, evaluate_f, minimize_f
from .sparse import (
    BoxRealization,
    PhiWitness,
    Selection,
    construct_phi,
    construct_selection,
    realize_boxes,
    render_svg,
    verify_witness,
)

__all__ = [
    "Atom", "Box", "BoxRealization", "CarlesonResult", "CarlesonViolation", "Certificate", "Collection",
    "Cut", "DyadicCube", "Flow", "FlowNetwork", "GeneratorSpec", "INF", "InvalidCollection",
    "MinimizationResult", "PhiWitness", "Selection", "SetOccurrence", "atom_measures_from_oracle",
    "brute_lambda", "brute_min_f", "build_from_atoms", "build_from_boxes", "build_from_dyadic",
    "build_network", "carleson_constant", "check_carleson", "construct_phi", "construct_selection",
    "evaluate_f", "generate", "generate_instance", "max_flow", "min_cut", "minimize_f", "ratio",
    "realize_boxes", "render_svg", "union_measure", "verify_witness",
]
