"""Monte Carlo harness: code registry, sweeps, dataset files, offline evaluation.

A sweep walks an inclusive p-grid; each (point, trial) draws its error from
a private RNG stream keyed by (seed, point index, trial index), so results
are identical whatever the process count or scheduling.  Output is one CSV
row per point plus a JSON sidecar carrying the full configuration.

Dataset files are line-oriented: a JSON header line, then one
``<syndrome> <label>`` record per line, using the bit-string conventions
from `css`.  `evaluate_predictions` scores a plain file of predicted labels
against such a dataset, which is the offline alternative to the wire
protocol.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .css import (
    CssCode,
    PauliError,
    ResidualClass,
    apply_correction,
    classify_residual,
    extract_syndrome,
)
from .decoders import Decoder, MatchingDecoder, TableDecoder
from .gf2 import BitVec
from .golay import GOLAY_LABELS, build_golay_css, dual_spaces_equal
from .noise import NoiseModel, derive_rng, sample_error
from .toric import ToricLattice, build_toric

DATASET_FORMAT = "qgolay-dataset"
BIT_ORDER_NOTE = (
    "syndrome: Hz-check outcomes then Hx-check outcomes, index 0 first; "
    "label: x-part bits 0..n-1 then z-part bits n..2n-1"
)
THREADS_ENV = "QGEC_THREADS"

CSV_HEADER = "p,trials,failures,rate,ci_low,ci_high,fail_x,fail_z,fail_y,inconsistent"

# 95% two-sided normal quantile, used for Wilson intervals.
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class CodeBundle:
    code: CssCode
    lattice: ToricLattice | None = None


def known_code_ids() -> list[str]:
    return [f"golay:{label}" for label in GOLAY_LABELS] + ["toric:<d>"]


def get_code(code_id: str) -> CodeBundle:
    kind, _, arg = code_id.partition(":")
    if kind == "golay" and arg in GOLAY_LABELS:
        return CodeBundle(code=build_golay_css(arg))
    if kind == "toric":
        try:
            d = int(arg)
        except ValueError:
            d = -1
        if d >= 2:
            lattice = build_toric(d)
            return CodeBundle(code=lattice.code, lattice=lattice)
    raise ValueError(
        f"unknown code id {code_id!r}; valid ids: {', '.join(known_code_ids())}"
    )


def make_decoder(decoder_id: str, bundle: CodeBundle) -> Decoder:
    """Build an in-process decoder; `external:<target>` is handled by the caller."""
    if decoder_id == "table":
        return TableDecoder(bundle.code)
    if decoder_id == "match":
        if bundle.lattice is None:
            raise ValueError("the matching decoder requires a toric code")
        return MatchingDecoder(bundle.lattice)
    raise ValueError(
        f"unknown decoder {decoder_id!r}; expected table, match or external:<target>"
    )


def max_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is not None:
        value = int(raw)
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1, got {raw}")
        return value
    return os.cpu_count() or 1


def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial rate."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == trials else min(1.0, center + half)
    return lo, hi


def mann_kendall_z(values: Iterable[float]) -> float:
    """Normalized Mann-Kendall statistic; large positive = increasing trend."""
    xs = list(values)
    n = len(xs)
    s = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            diff = xs[j] - xs[i]
            s += (diff > 0) - (diff < 0)
    ties: dict[float, int] = {}
    for v in xs:
        ties[v] = ties.get(v, 0) + 1
    var = n * (n - 1) * (2 * n + 5)
    for t in ties.values():
        var -= t * (t - 1) * (2 * t + 5)
    var /= 18.0
    if var == 0:
        return 0.0
    if s > 0:
        return (s - 1) / math.sqrt(var)
    if s < 0:
        return (s + 1) / math.sqrt(var)
    return 0.0


@dataclass(frozen=True)
class SweepConfig:
    code_id: str
    decoder_id: str
    p_min: float
    p_max: float
    p_step: float
    trials: int
    eta: float
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 < self.p_min <= self.p_max <= 0.5:
            raise ValueError(
                f"need 0 < p_min <= p_max <= 0.5, got [{self.p_min}, {self.p_max}]"
            )
        if self.p_step <= 0.0:
            raise ValueError(f"p_step must be positive, got {self.p_step}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")

    def p_grid(self) -> list[float]:
        """Inclusive grid p_min, p_min + step, ... (float-noise tolerant)."""
        count = int(math.floor((self.p_max - self.p_min) / self.p_step + 1e-9)) + 1
        return [round(self.p_min + k * self.p_step, 12) for k in range(count)]


@dataclass(frozen=True)
class PointResult:
    p: float
    trials: int
    failures: int
    fail_x: int
    fail_z: int
    fail_y: int
    inconsistent: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)

    def csv_row(self) -> str:
        lo, hi = self.ci
        return (
            f"{self.p:.6g},{self.trials},{self.failures},{self.rate:.8g},"
            f"{lo:.8g},{hi:.8g},{self.fail_x},{self.fail_z},{self.fail_y},"
            f"{self.inconsistent}"
        )


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple[PointResult, ...]

    def rates(self) -> list[float]:
        return [pt.rate for pt in self.points]


_BREAKDOWN = {
    ResidualClass.LOGICAL_X: "fail_x",
    ResidualClass.LOGICAL_Z: "fail_z",
    ResidualClass.LOGICAL_Y: "fail_y",
    ResidualClass.SYNDROME_NONZERO: "inconsistent",
}


def run_point(
    code: CssCode,
    decoder: Decoder,
    p: float,
    eta: float,
    p_index: int,
    trials: int,
    seed: int,
) -> PointResult:
    """One grid point: `trials` sampled shots, each on its own RNG stream."""
    model = NoiseModel(p, eta)
    n = code.n
    failures = 0
    counts = {"fail_x": 0, "fail_z": 0, "fail_y": 0, "inconsistent": 0}
    for t in range(trials):
        rng = derive_rng(seed, p_index, t)
        e = sample_error(model, n, rng)
        s = extract_syndrome(code, e)
        outcome = decoder.decode(s)
        residual = apply_correction(e, outcome.correction)
        cls = classify_residual(code, residual)
        if cls is not ResidualClass.TRIVIAL:
            failures += 1
            counts[_BREAKDOWN[cls]] += 1
    return PointResult(p=p, trials=trials, failures=failures, **counts)


def _point_task(args: tuple[str, str, float, float, int, int, int]) -> PointResult:
    code_id, decoder_id, p, eta, p_index, trials, seed = args
    bundle = get_code(code_id)
    decoder = _decoder_cache(code_id, decoder_id)
    return run_point(bundle.code, decoder, p, eta, p_index, trials, seed)


_DECODERS: dict[tuple[str, str], Decoder] = {}


def _decoder_cache(code_id: str, decoder_id: str) -> Decoder:
    key = (code_id, decoder_id)
    if key not in _DECODERS:
        _DECODERS[key] = make_decoder(decoder_id, get_code(code_id))
    return _DECODERS[key]


def iter_sweep(config: SweepConfig, decoder: Decoder | None = None) -> Iterator[PointResult]:
    """Yield per-point results in grid order.

    In-process decoders fan out over a process pool (capped by QGEC_THREADS);
    an explicitly supplied decoder (e.g. an external client, which owns a
    serial connection) runs points sequentially in this process.
    """
    grid = config.p_grid()
    if decoder is not None:
        code = get_code(config.code_id).code
        for i, p in enumerate(grid):
            yield run_point(code, decoder, p, config.eta, i, config.trials, config.seed)
        return
    if config.decoder_id.startswith("external:"):
        raise ValueError(
            "external sweeps need a connected decoder: open the channel and "
            "pass the ExternalDecoder via the `decoder` argument"
        )
    tasks = [
        (config.code_id, config.decoder_id, p, config.eta, i, config.trials, config.seed)
        for i, p in enumerate(grid)
    ]
    workers = min(max_workers(), len(tasks))
    if workers <= 1:
        for task in tasks:
            yield _point_task(task)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_point_task, tasks)


def run_sweep(config: SweepConfig, decoder: Decoder | None = None) -> SweepResult:
    return SweepResult(config=config, points=tuple(iter_sweep(config, decoder)))


def write_sweep_csv(path: str | Path, points: Iterable[PointResult]) -> None:
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for pt in points:
            f.write(pt.csv_row() + "\n")


def write_sweep_sidecar(path: str | Path, config: SweepConfig) -> Path:
    sidecar = Path(str(path) + ".json")
    payload = {"tool": "qgolay sweep", "config": asdict(config)}
    sidecar.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return sidecar


@dataclass(frozen=True)
class DatasetHeader:
    code: str
    n: int
    n_syndrome: int
    n_label: int
    eta: float
    seed: int
    count: int
    p: float | None = None
    p_grid: tuple[float, float, float] | None = None
    fields: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "format": DATASET_FORMAT,
            "version": 1,
            "code": self.code,
            "n": self.n,
            "n_syndrome": self.n_syndrome,
            "n_label": self.n_label,
            "p": self.p,
            "p_grid": list(self.p_grid) if self.p_grid else None,
            "eta": self.eta,
            "seed": self.seed,
            "count": self.count,
            "bit_order": BIT_ORDER_NOTE,
        }
        return json.dumps(payload, sort_keys=True)


class DatasetFormatError(ValueError):
    pass


def _grid_values(p: float, p_max: float | None, p_step: float | None) -> list[float]:
    if p_max is None:
        return [p]
    if p_step is None or p_step <= 0:
        raise ValueError("p_step must be positive when p_max is given")
    if p_max < p:
        raise ValueError("p_max must be >= p")
    count = int(math.floor((p_max - p) / p_step + 1e-9)) + 1
    return [round(p + k * p_step, 12) for k in range(count)]


def generate_dataset(
    code_id: str,
    p: float,
    eta: float,
    count: int,
    seed: int,
    out_path: str | Path,
    p_max: float | None = None,
    p_step: float | None = None,
) -> DatasetHeader:
    """Write `count` (syndrome, exact-error-label) records.

    With `p_max`/`p_step`, each record draws its own p uniformly from the
    inclusive grid (recorded in the header); otherwise p is fixed.  Record i
    uses the stream (seed, i), so identical arguments give identical bytes.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    bundle = get_code(code_id)
    code = bundle.code
    grid = _grid_values(p, p_max, p_step)
    models = [NoiseModel(value, eta) for value in grid]
    header = DatasetHeader(
        code=code.name,
        n=code.n,
        n_syndrome=code.n_syndrome,
        n_label=code.n_label,
        eta=eta,
        seed=seed,
        count=count,
        p=p if len(grid) == 1 else None,
        p_grid=(p, p_max, p_step) if len(grid) > 1 else None,
    )
    with open(out_path, "w") as f:
        f.write(header.to_json() + "\n")
        for i in range(count):
            rng = derive_rng(seed, i)
            model = models[int(rng.integers(len(models)))] if len(models) > 1 else models[0]
            e = sample_error(model, code.n, rng)
            s = extract_syndrome(code, e)
            f.write(f"{s.to01()} {e.to_label01()}\n")
    return header


def read_dataset_header(path: str | Path) -> dict:
    with open(path) as f:
        first = f.readline()
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"{path}: line 1 is not a JSON header") from exc
    if header.get("format") != DATASET_FORMAT:
        raise DatasetFormatError(f"{path}: not a {DATASET_FORMAT} file")
    return header


def iter_dataset(
    path: str | Path, validate: bool = True
) -> Iterator[tuple[str, str]]:
    """Yield (syndrome, label) strings, checking widths and label consistency."""
    header = read_dataset_header(path)
    code = get_code(header["code"]).code
    n_syndrome, n_label = header["n_syndrome"], header["n_label"]
    with open(path) as f:
        f.readline()
        lineno = 1
        for line in f:
            lineno += 1
            parts = line.split()
            if len(parts) != 2:
                raise DatasetFormatError(f"{path}: line {lineno}: expected 2 fields")
            syn, label = parts
            if len(syn) != n_syndrome or syn.strip("01"):
                raise DatasetFormatError(
                    f"{path}: line {lineno}: bad syndrome field ({len(syn)} chars)"
                )
            if len(label) != n_label or label.strip("01"):
                raise DatasetFormatError(
                    f"{path}: line {lineno}: bad label field ({len(label)} chars)"
                )
            if validate:
                e = PauliError.from_label01(label)
                if extract_syndrome(code, e).to01() != syn:
                    raise DatasetFormatError(
                        f"{path}: line {lineno}: label inconsistent with syndrome"
                    )
            yield syn, label


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    predictions: str
    code: str
    trials: int
    failures: int
    fail_x: int
    fail_z: int
    fail_y: int
    inconsistent: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials) if self.trials else (0.0, 0.0)


def evaluate_predictions(dataset_path: str | Path, predictions_path: str | Path) -> EvalReport:
    """Score a predictions file (one label line per dataset record) offline."""
    header = read_dataset_header(dataset_path)
    code = get_code(header["code"]).code
    n_label = header["n_label"]
    failures = 0
    counts = {"fail_x": 0, "fail_z": 0, "fail_y": 0, "inconsistent": 0}
    trials = 0
    with open(predictions_path) as pf:
        records = iter_dataset(dataset_path, validate=True)
        lineno = 0
        for syn, label in records:
            line = pf.readline()
            lineno += 1
            if line == "":
                raise DatasetFormatError(
                    f"{predictions_path}: line {lineno}: predictions ended early "
                    f"(dataset has {header['count']} records)"
                )
            pred = line.strip()
            if len(pred) != n_label or pred.strip("01"):
                raise DatasetFormatError(
                    f"{predictions_path}: line {lineno}: expected {n_label} bits, "
                    f"got {pred!r}"
                )
            residual = PauliError.from_label01(label) ^ PauliError.from_label01(pred)
            cls = classify_residual(code, residual)
            if cls is not ResidualClass.TRIVIAL:
                failures += 1
                counts[_BREAKDOWN[cls]] += 1
            trials += 1
        extra = pf.readline()
        if extra != "":
            raise DatasetFormatError(
                f"{predictions_path}: line {lineno + 1}: more predictions than records"
            )
    return EvalReport(
        dataset=str(dataset_path),
        predictions=str(predictions_path),
        code=code.name,
        trials=trials,
        failures=failures,
        **counts,
    )


def _weight_summary(rows: tuple[int, ...]) -> str:
    weights: dict[int, int] = {}
    for r in rows:
        w = r.bit_count()
        weights[w] = weights.get(w, 0) + 1
    return ", ".join(f"{w} (x{c})" for w, c in sorted(weights.items()))


def code_info(code_id: str) -> str:
    """Human-readable report: n, k, d, generator counts, row and logical weights."""
    bundle = get_code(code_id)
    code = bundle.code
    if bundle.lattice is not None:
        dist = f"{code.distance} (weight of the minimal logical loop)"
    else:
        dist = f"{code.distance} (verified by exhaustive codeword scan)"
    lines = [
        f"code: {code.name}",
        f"physical qubits (n): {code.n}",
        f"logical qubits (k): {code.k}",
        f"distance (d): {dist}",
        f"stabilizer generators: {code.n_syndrome}",
        f"syndrome bits: {code.n_syndrome}",
        f"Hx row weights: {_weight_summary(code.hx.rows)}",
        f"Hz row weights: {_weight_summary(code.hz.rows)}",
        f"logical X weights: {', '.join(str(l.weight()) for l in code.logical_x)}",
        f"logical Z weights: {', '.join(str(l.weight()) for l in code.logical_z)}",
    ]
    kind, _, label = code_id.partition(":")
    if kind == "golay":
        others = [o for o in GOLAY_LABELS if o != label]
        shared = ", ".join(
            f"{o}={'yes' if dual_spaces_equal(label, o) else 'no'}" for o in others
        )
        lines.append(f"check row space shared with: {shared} (informational)")
    return "\n".join(lines)
