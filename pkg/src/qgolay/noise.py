"""Correlated i.i.d. single-qubit Pauli noise.

Per qubit: no error with probability 1-p, otherwise X, Y or Z with
probabilities px = pz = p/(eta+2) and py = eta*p/(eta+2).  eta tunes the
correlation between bit-flips and phase-flips: eta=1 is the uniform
distribution over {X, Y, Z}, eta=0 never produces Y.

Sampling uses numpy's PCG64 streams.  Reproducibility contract: every
consumer derives one private stream per unit of work via
`derive_rng(seed, *path)`, where `path` is the integer coordinates of that
unit (e.g. (p_index, trial_index) in a sweep, (record_index,) in a dataset),
so results are independent of scheduling and platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .css import PauliError
from .gf2 import BitVec


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent, platform-stable stream for one unit of work."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=path))
    )


@dataclass(frozen=True)
class NoiseModel:
    """Total per-qubit error probability p and X/Z correlation eta."""

    p: float
    eta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")

    @property
    def px(self) -> float:
        return self.p / (self.eta + 2.0)

    @property
    def py(self) -> float:
        return self.eta * self.p / (self.eta + 2.0)

    @property
    def pz(self) -> float:
        return self.p / (self.eta + 2.0)


def _pack(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def sample_error(model: NoiseModel, n: int, rng: np.random.Generator) -> PauliError:
    """Draw an n-qubit Pauli error, one uniform variate per qubit.

    The unit interval is split as [0,px) -> X, [px,px+py) -> Y,
    [px+py,p) -> Z, [p,1) -> identity, so a single draw decides each qubit.
    """
    if n < 0:
        raise ValueError(f"negative qubit count {n}")
    u = rng.random(n)
    x_mask = u < (model.px + model.py)
    z_mask = (u >= model.px) & (u < model.p)
    return PauliError(BitVec(n, _pack(x_mask)), BitVec(n, _pack(z_mask)))


def error_probability(model: NoiseModel, e: PauliError) -> float:
    """Probability of drawing exactly this Pauli from the model."""
    ny = (e.x.bits & e.z.bits).bit_count()
    nx = e.x.weight() - ny
    nz = e.z.weight() - ny
    ni = e.n - nx - ny - nz
    return (model.px**nx) * (model.py**ny) * (model.pz**nz) * ((1.0 - model.p) ** ni)
