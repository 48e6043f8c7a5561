"""Unique sink orientations of the hypercube and their phases."""

from .constructions import (
    enumerate_usos,
    markov_step,
    partial_swap,
    replace_hypervertex,
    sample_uniform,
    schurr,
    uniform,
)
from .cube import Edge, Face, faces
from .errors import (
    ArgumentError,
    DimensionError,
    FaceError,
    GadgetError,
    InvalidOrientation,
    NotAMatching,
    NotHypervertex,
    NotUnionOfPhases,
    NotUsoError,
    ParseError,
    ResourceError,
    UsoError,
)
from .orientation import DenseOrientation, OracleOrientation, Orientation, flip, load, restrict, store
from .phases import PhasePartition, compute_phases_fast, compute_phases_naive, in_phase, is_flippable
from .recognition import is_uso, is_uso_fast, is_uso_naive
from .reduction import QbfInstance, eval_qbf, parse_qbf, reduce_to_2ip

__version__ = "0.1.0"
