"""Deletion-detecting marker codes and coded trace reconstruction.

The building blocks are a marker code whose block-by-block decoder recovers
how many bits every block lost, an exhaustive verifier for small codes, an
i.i.d. deletion channel, Bitwise Majority Alignment, and a code for trace
reconstruction that combines markers with a run-length limit.
"""
from .analysis import (
    chernoff_block_tail,
    claim1_bounds,
    delta_star,
    delta_tail_root,
    lambert_w,
    levenshtein,
    pe_bound_boundary,
    redundancy_bounds,
)
from .bma import PAD, TraceMatrix, bma, bma_traces
from .channel import ChannelParams, TraceSet, gen_traces, substream, transmit
from .core import (
    CodeParams,
    CountVector,
    DeletionPattern,
    apply_deletions,
    as_bits,
    count_per_block,
    max_run_length,
    split_blocks,
    to_str,
)
from .errors import (
    CapacityError,
    DelcodeError,
    DesyncError,
    DomainError,
    MalformedInputError,
    ParameterError,
    SamplingError,
)
from .marker_code import BoundaryResult, decode_boundaries, encode, extract, is_codeword
from .trace_recon import TraceCodeParams, reconstruct, sample_codeword
from .verifier import check_boundary_conditions, detects_exhaustive, epsilon

__version__ = "0.1.0"

__all__ = [
    "PAD", "BoundaryResult", "CapacityError", "ChannelParams", "CodeParams",
    "CountVector", "DelcodeError", "DeletionPattern", "DesyncError", "DomainError",
    "MalformedInputError", "ParameterError", "SamplingError", "TraceCodeParams",
    "TraceMatrix", "TraceSet", "apply_deletions", "as_bits", "bma", "bma_traces",
    "check_boundary_conditions", "chernoff_block_tail", "claim1_bounds",
    "count_per_block", "decode_boundaries", "delta_star", "delta_tail_root",
    "detects_exhaustive", "encode", "epsilon", "extract", "gen_traces",
    "is_codeword", "lambert_w", "levenshtein", "max_run_length",
    "pe_bound_boundary", "reconstruct", "redundancy_bounds", "sample_codeword",
    "split_blocks", "substream", "to_str", "transmit",
]
