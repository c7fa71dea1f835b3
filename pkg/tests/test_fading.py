import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fadingdirt.errors import (
    DiscreteUnsupported,
    InvalidC,
    InvalidM,
    InvalidN,
    InvalidP,
    NonFinite,
    ZeroVariance,
)
from fadingdirt.fading import (
    TWO_PI_E,
    Discrete,
    Gaussian,
    LogNormal,
    Rayleigh,
    TabulatedDensity,
    Uniform,
    binomial_fading,
    entropy_bits,
    entropy_bits_quadrature,
    entropy_power_alpha,
    geometric_fading,
    normalize_unit_variance,
    parse_distribution,
    sample,
    strong_support,
    unit_rayleigh,
)

TWO_POINT = Discrete(((-1.0, 0.5), (1.0, 0.5)))


class TestEntropy:
    def test_gaussian_closed_form(self):
        assert entropy_bits(Gaussian(0.0, 1.0)) == pytest.approx(
            0.5 * math.log2(TWO_PI_E), abs=1e-12)

    def test_fair_coin(self):
        assert entropy_bits(TWO_POINT) == 1.0

    def test_uniform_closed_form(self):
        u = Uniform(-math.sqrt(3), math.sqrt(3))
        assert entropy_bits(u) == pytest.approx(0.5 * math.log2(12.0), abs=1e-12)

    @pytest.mark.parametrize("dist", [
        Gaussian(0.3, 2.0),
        Uniform(-1.0, 3.0),
        unit_rayleigh(),
        LogNormal(0.1, 0.5),
    ])
    def test_quadrature_matches_closed_forms(self, dist):
        assert entropy_bits_quadrature(dist) == pytest.approx(
            dist.entropy_bits(), abs=1e-6)

    def test_rayleigh_closed_form_expression(self):
        r = unit_rayleigh()
        h_nats = 1 + math.log(r.sigma / math.sqrt(2)) + np.euler_gamma / 2
        assert entropy_bits(r) == pytest.approx(h_nats / math.log(2), abs=1e-12)

    def test_quadrature_rejects_discrete(self):
        with pytest.raises(DiscreteUnsupported):
            entropy_bits_quadrature(TWO_POINT)


class TestEntropyPower:
    def test_gaussian_alpha_one(self):
        assert entropy_power_alpha(Gaussian(0.7, 1.0)).alpha == pytest.approx(
            1.0, abs=1e-12)

    def test_uniform_alpha(self):
        u = Uniform(-math.sqrt(3), math.sqrt(3))
        assert entropy_power_alpha(u).alpha == pytest.approx(
            12.0 / TWO_PI_E, abs=1e-9)

    def test_rayleigh_alpha_in_range(self):
        a = entropy_power_alpha(normalize_unit_variance(unit_rayleigh())).alpha
        assert 0.85 < a < 1.0 - 1e-9

    def test_only_gaussian_attains_one(self):
        for d in (Uniform(-math.sqrt(3), math.sqrt(3)),
                  normalize_unit_variance(unit_rayleigh()),
                  normalize_unit_variance(LogNormal(0.0, 0.5))):
            assert entropy_power_alpha(d).alpha < 1.0 - 1e-9

    def test_rejects_discrete(self):
        with pytest.raises(DiscreteUnsupported):
            entropy_power_alpha(TWO_POINT)

    def test_rejects_non_unit_variance(self):
        with pytest.raises(ZeroVariance):
            entropy_power_alpha(Gaussian(0.0, 2.0))


class TestNormalize:
    def test_two_point_identity(self):
        d = normalize_unit_variance(TWO_POINT, 0.0)
        assert np.allclose(d.values, [-1.0, 1.0])
        assert np.allclose(d.probs, [0.5, 0.5])

    def test_uniform_example(self):
        u = normalize_unit_variance(Uniform(0.0, 1.0), 0.0)
        assert u.lo == pytest.approx(-math.sqrt(3), abs=1e-12)
        assert u.hi == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_gaussian_standardization(self):
        g = normalize_unit_variance(Gaussian(5.0, 4.0), 0.0)
        assert g.mu == pytest.approx(0.0, abs=1e-12)
        assert g.variance == pytest.approx(1.0, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ZeroVariance):
            normalize_unit_variance(Discrete(((2.0, 1.0),)))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(-500, 500), min_size=2, max_size=6, unique=True),
           st.integers(1, 10 ** 6))
    def test_idempotent_on_discrete(self, ivals, pseed):
        vals = [v / 10.0 for v in ivals]
        rng = np.random.default_rng(pseed)
        probs = rng.dirichlet(np.ones(len(vals)))
        pairs = sorted(zip(vals, probs.tolist()))
        d = Discrete(tuple(pairs))
        if d.var <= 1e-6:
            return
        once = normalize_unit_variance(d)
        twice = normalize_unit_variance(once)
        assert once.var == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(once.values - twice.values)) < 1e-9


class TestConstructions:
    def test_geometric_half_dominant_atom(self):
        d = geometric_fading(0.5)
        i = int(np.argmax(d.probs))
        assert d.probs[i] == pytest.approx(0.5, abs=1e-9)
        delta = 0.5 / math.sqrt(0.5)
        assert d.values[i] == pytest.approx(-delta * 0.5 / 0.5, abs=1e-9)

    def test_geometric_max_mass(self):
        assert geometric_fading(0.9).probs.max() == pytest.approx(0.9, abs=1e-9)

    @pytest.mark.parametrize("p", [0.3, 0.5, 0.9])
    def test_geometric_moments(self, p):
        d = geometric_fading(p)
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert d.mean == pytest.approx(0.0, abs=1e-9)
        assert d.var == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.4])
    def test_geometric_rejects_bad_p(self, p):
        with pytest.raises(InvalidP):
            geometric_fading(p)

    def test_binomial_probability_vector(self):
        d = binomial_fading(1, 0.5)
        assert np.allclose(d.probs, [0.25, 0.5, 0.25], atol=1e-12)

    def test_binomial_n2_never_dominant(self):
        # for extreme p the edge lattice atom (1-p)^{2N} itself exceeds 1/2,
        # so the no-dominant-mass property only holds on the central range
        for p in np.linspace(0.2, 0.8, 13):
            assert binomial_fading(2, float(p)).probs.max() < 0.5

    def test_binomial_moments(self):
        d = binomial_fading(1, 0.5)
        assert d.mean == pytest.approx(0.0, abs=1e-9)
        assert d.var == pytest.approx(1.0, abs=1e-9)

    def test_binomial_rejects_bad_args(self):
        with pytest.raises(InvalidN):
            binomial_fading(0, 0.5)
        with pytest.raises(InvalidP):
            binomial_fading(1, 1.0)

    def test_strong_support_m2(self):
        d = strong_support(2, 3.0)
        assert np.allclose(d.values, [-1.0, 1.0], atol=1e-12)
        assert np.allclose(d.probs, [0.5, 0.5])

    def test_strong_support_geometric_offsets(self):
        # offsets from the smallest point are {0, d1, c*d1, ...}
        d = strong_support(3, 2.0)
        off = d.values - d.values[0]
        assert off[2] / off[1] == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("M,c", [(3, 2.0), (4, 3.0), (5, 8.0)])
    def test_strong_support_moments(self, M, c):
        d = strong_support(M, c)
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert d.mean == pytest.approx(0.0, abs=1e-9)
        assert d.var == pytest.approx(1.0, abs=1e-9)

    def test_strong_support_rejects_bad_args(self):
        with pytest.raises(InvalidM):
            strong_support(1, 2.0)
        with pytest.raises(InvalidC):
            strong_support(3, 1.0)


class TestSampler:
    def test_deterministic(self):
        a = sample(Gaussian(0.0, 1.0), 42, 1000)
        b = sample(Gaussian(0.0, 1.0), 42, 1000)
        assert np.array_equal(a, b)

    def test_discrete_clt(self):
        xs = sample(TWO_POINT, 7, 10 ** 6)
        assert abs(xs.mean()) < 5e-3

    @pytest.mark.parametrize("dist", [
        Gaussian(0.5, 2.0), Uniform(-1, 2), unit_rayleigh(),
        LogNormal(0.0, 0.25), geometric_fading(0.5),
    ])
    def test_moments_within_five_stderr(self, dist):
        n = 10 ** 6
        xs = sample(dist, 11, n)
        se_mean = math.sqrt(dist.var / n)
        assert abs(xs.mean() - dist.mean) < 5 * se_mean

    def test_rejects_nonpositive_n(self):
        with pytest.raises(InvalidN):
            sample(TWO_POINT, 0, 0)


class TestParsing:
    def test_shorthands(self):
        assert isinstance(parse_distribution("gaussian"), Gaussian)
        assert parse_distribution("two-point") == TWO_POINT
        assert parse_distribution("uniform").var == pytest.approx(1.0, abs=1e-12)
        assert parse_distribution("rayleigh").var == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("dist", [
        TWO_POINT, Gaussian(1.0, 2.0), Uniform(-1, 2), Rayleigh(1.5, 0.1, 2.0),
        LogNormal(0.2, 0.5, 0.0, 1.0),
    ])
    def test_json_round_trip(self, dist):
        assert parse_distribution(dist.to_json()) == dist

    def test_json_text(self):
        d = parse_distribution('{"kind":"gaussian","mean":2,"var":3}')
        assert d == Gaussian(2.0, 3.0)

    def test_bad_literals(self):
        with pytest.raises(NonFinite):
            parse_distribution({"kind": "nope"})
        with pytest.raises(NonFinite):
            parse_distribution({"no_kind": 1})


class TestValidation:
    def test_discrete_prob_sum(self):
        with pytest.raises(InvalidP):
            Discrete(((-1.0, 0.6), (1.0, 0.5)))

    def test_discrete_ordering(self):
        with pytest.raises(NonFinite):
            Discrete(((1.0, 0.5), (-1.0, 0.5)))

    def test_tabulated_normalization(self):
        xs = np.linspace(-1, 1, 101)
        with pytest.raises(InvalidP):
            TabulatedDensity(tuple(zip(xs.tolist(), np.full(101, 2.0).tolist())))

    def test_tabulated_valid(self):
        xs = np.linspace(-1, 1, 401)
        d = 0.5 * np.ones_like(xs)
        t = TabulatedDensity(tuple(zip(xs.tolist(), d.tolist())))
        assert t.mean == pytest.approx(0.0, abs=1e-9)
        assert entropy_bits(t) == pytest.approx(1.0, abs=1e-6)
