"""Simulator and decoder suite for the [[23,1,7]] quantum Golay code.

Builds the three published Golay parity-check variants and the distance-d
toric code as CSS codes, samples correlated Pauli noise, decodes with exact
reference decoders (syndrome table, toroidal matching, brute-force maximum
likelihood), runs reproducible Monte Carlo sweeps, and exchanges syndromes
with external learned decoders over a line protocol.
"""

from .css import (
    CodeConstructionError,
    CssCode,
    PauliError,
    ResidualClass,
    Syndrome,
    apply_correction,
    classify_residual,
    extract_syndrome,
    symplectic_product,
)
from .decoders import (
    Decoder,
    DecoderOutcome,
    MatchingDecoder,
    SyndromeTable,
    TableDecoder,
    build_syndrome_table,
    ml_decode_oracle,
)
from .gf2 import (
    BitMat,
    BitVec,
    RowSpace,
    combine_rows,
    enumerate_span,
    kernel_basis,
    mat_vec_mul,
    rank,
    solve_in_rowspace,
    solve_mat_vec,
    transpose,
)
from .golay import (
    GOLAY_LABELS,
    GeneratorPolynomial,
    ParityCheckMatrix,
    build_golay_css,
    build_parity_matrix,
    circular_shifts,
    dual_spaces_equal,
    generator_polynomial,
)
from .harness import (
    CodeBundle,
    EvalReport,
    PointResult,
    SweepConfig,
    SweepResult,
    code_info,
    evaluate_predictions,
    generate_dataset,
    get_code,
    make_decoder,
    mann_kendall_z,
    run_point,
    run_sweep,
    wilson_interval,
)
from .noise import NoiseModel, derive_rng, error_probability, sample_error
from .protocol import (
    ExternalDecoder,
    ProtocolError,
    SocketChannel,
    SubprocessChannel,
    open_channel,
    serve_stdio,
    serve_tcp,
)
from .toric import ToricLattice, build_toric, defect_positions

__version__ = "0.1.0"

__all__ = [
    "BitMat",
    "BitVec",
    "CodeBundle",
    "CodeConstructionError",
    "CssCode",
    "Decoder",
    "DecoderOutcome",
    "EvalReport",
    "ExternalDecoder",
    "GOLAY_LABELS",
    "GeneratorPolynomial",
    "MatchingDecoder",
    "NoiseModel",
    "ParityCheckMatrix",
    "PauliError",
    "PointResult",
    "ProtocolError",
    "ResidualClass",
    "RowSpace",
    "SocketChannel",
    "SubprocessChannel",
    "SweepConfig",
    "SweepResult",
    "Syndrome",
    "SyndromeTable",
    "TableDecoder",
    "ToricLattice",
    "apply_correction",
    "build_golay_css",
    "build_parity_matrix",
    "build_syndrome_table",
    "build_toric",
    "circular_shifts",
    "classify_residual",
    "code_info",
    "combine_rows",
    "defect_positions",
    "derive_rng",
    "dual_spaces_equal",
    "enumerate_span",
    "error_probability",
    "evaluate_predictions",
    "extract_syndrome",
    "generate_dataset",
    "generator_polynomial",
    "get_code",
    "kernel_basis",
    "make_decoder",
    "mann_kendall_z",
    "mat_vec_mul",
    "ml_decode_oracle",
    "open_channel",
    "rank",
    "run_point",
    "run_sweep",
    "sample_error",
    "serve_stdio",
    "serve_tcp",
    "solve_in_rowspace",
    "solve_mat_vec",
    "symplectic_product",
    "transpose",
    "wilson_interval",
]
