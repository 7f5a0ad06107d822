import itertools
import math

import numpy as np
import pytest

from qgolay.css import PauliError
from qgolay.gf2 import BitVec
from qgolay.noise import NoiseModel, derive_rng, error_probability, sample_error


class TestNoiseModel:
    def test_uniform_at_eta_one(self):
        m = NoiseModel(0.03, 1.0)
        assert m.px == pytest.approx(0.01)
        assert m.py == pytest.approx(0.01)
        assert m.pz == pytest.approx(0.01)

    def test_eta_three(self):
        m = NoiseModel(0.05, 3.0)
        assert m.px == pytest.approx(0.01)
        assert m.py == pytest.approx(0.03)
        assert m.pz == pytest.approx(0.01)

    def test_probabilities_sum_to_p(self):
        for p, eta in itertools.product((0.0, 0.01, 0.3, 1.0), (0.0, 0.25, 0.5, 1.0, 3.0)):
            m = NoiseModel(p, eta)
            assert m.px + m.py + m.pz == pytest.approx(p)

    @pytest.mark.parametrize("p,eta", [(-0.1, 1.0), (1.1, 1.0), (0.1, -0.5)])
    def test_invalid_parameters(self, p, eta):
        with pytest.raises(ValueError):
            NoiseModel(p, eta)


class TestSampleError:
    def test_p_zero_is_identity(self):
        m = NoiseModel(0.0, 1.0)
        rng = derive_rng(0)
        for _ in range(100):
            assert sample_error(m, 23, rng).is_identity()

    def test_eta_zero_never_yields_y(self):
        m = NoiseModel(0.5, 0.0)
        rng = derive_rng(1)
        e = sample_error(m, 100_000, rng)
        assert (e.x.bits & e.z.bits) == 0

    def test_same_seed_same_stream(self):
        m = NoiseModel(0.07, 0.5)
        a = [sample_error(m, 23, derive_rng(9, i)) for i in range(50)]
        b = [sample_error(m, 23, derive_rng(9, i)) for i in range(50)]
        assert a == b

    def test_distinct_streams_differ(self):
        m = NoiseModel(0.5, 1.0)
        a = sample_error(m, 1000, derive_rng(9, 0))
        b = sample_error(m, 1000, derive_rng(9, 1))
        assert a != b

    @pytest.mark.parametrize("p", [0.01, 0.05])
    @pytest.mark.parametrize("eta", [0.25, 0.5, 1.0, 3.0])
    def test_empirical_frequencies_within_4_sigma(self, p, eta):
        m = NoiseModel(p, eta)
        n = 1_000_000
        e = sample_error(m, n, derive_rng(1234, int(p * 1000), int(eta * 100)))
        ny = (e.x.bits & e.z.bits).bit_count()
        nx = e.x.weight() - ny
        nz = e.z.weight() - ny
        ni = n - nx - ny - nz
        for count, q in ((nx, m.px), (ny, m.py), (nz, m.pz), (ni, 1 - p)):
            sigma = math.sqrt(n * q * (1 - q))
            assert abs(count - n * q) <= 4 * sigma


class TestErrorProbability:
    def test_identity_error(self):
        m = NoiseModel(0.03, 1.0)
        e = PauliError.identity(23)
        assert error_probability(m, e) == pytest.approx(0.97**23)

    def test_single_x(self):
        m = NoiseModel(0.03, 1.0)
        e = PauliError.single(23, 4, "X")
        assert error_probability(m, e) == pytest.approx(0.01 * 0.97**22)

    def test_normalization_n2(self):
        # exhaustive over all 16 two-qubit Paulis
        m = NoiseModel(0.2, 0.5)
        total = 0.0
        for xb in range(4):
            for zb in range(4):
                e = PauliError(BitVec(2, xb), BitVec(2, zb))
                total += error_probability(m, e)
        assert total == pytest.approx(1.0)

    def test_zero_probability_kinds(self):
        m = NoiseModel(0.3, 0.0)  # py = 0
        assert error_probability(m, PauliError.single(5, 2, "Y")) == 0.0
