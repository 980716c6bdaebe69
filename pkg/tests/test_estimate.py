import math

import numpy as np
import pytest

from geojsd import (
    DiscreteDensity,
    DivergentIntegral,
    EstimatorConfig,
    ExpFamilyDensity,
    GaussianParams,
    MeanSpec,
    Proposal,
    ProposalSupportViolation,
    SampledDensity,
    arithmetic_mixture_proposal,
    bhattacharyya_gaussian,
    categorical_sampled,
    estimate_js_m_extended,
    estimate_kl_extended,
    estimate_z,
    gamma_divergence,
    gaussian_family,
    gaussian_sampled,
    geometric_mixture_params,
    gjsd_extended_gaussian,
    gjsd_gaussian,
    js_m,
    js_m_extended,
    js_m_gamma,
    kl,
    kl_gaussian,
    natural_flat,
)

GEO = MeanSpec.geometric()
ARITH = MeanSpec.arithmetic()

N01 = GaussianParams.univariate(0.0, 1.0)
N11 = GaussianParams.univariate(1.0, 1.0)
N12 = GaussianParams.univariate(1.0, 2.0)


def expfam_density(g: GaussianParams, log_scale: float = 0.0) -> ExpFamilyDensity:
    return ExpFamilyDensity(gaussian_family(g.dim), natural_flat(g), log_scale)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            EstimatorConfig(samples=0)
        with pytest.raises(ValueError):
            EstimatorConfig(samples=10, chunk_size=0)
        with pytest.raises(ValueError):
            EstimatorConfig(samples=10, seed=-1)


class TestEstimateZ:
    def test_identical_densities_exact_one(self):
        d = gaussian_sampled(N01)
        cfg = EstimatorConfig(samples=5_000, seed=3)
        assert estimate_z(d, d, GEO, cfg) == (1.0, 0.0)

    def test_matched_arithmetic_proposal_zero_variance(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=20_000, seed=9, proposal=Proposal.CUSTOM)
        proposal = arithmetic_mixture_proposal(d1, d2)
        assert estimate_z(d1, d2, ARITH, cfg, proposal=proposal) == (1.0, 0.0)

    def test_geometric_z_within_band(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=1_000_000, seed=20240501)
        estimate, stderr = estimate_z(d1, d2, GEO, cfg)
        exact = math.exp(-bhattacharyya_gaussian(N01, N11))
        assert stderr > 0.0
        assert abs(estimate - exact) <= 4.0 * stderr

    def test_second_argument_proposal(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=200_000, seed=4,
                              proposal=Proposal.SECOND_ARGUMENT)
        estimate, stderr = estimate_z(d1, d2, GEO, cfg)
        exact = math.exp(-0.125)
        assert abs(estimate - exact) <= 4.0 * stderr

    def test_proposal_support_violation(self):
        # proposal claims zero density on half its own sample range
        rng_density = gaussian_sampled(N01)

        def broken_log_density(x):
            return np.where(np.asarray(x) < 0.0, -np.inf,
                            rng_density.log_density(x))

        broken = SampledDensity(broken_log_density, rng_density.sampler)
        d2 = gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=1_000, seed=0, proposal=Proposal.CUSTOM)
        with pytest.raises(ProposalSupportViolation):
            estimate_z(rng_density, d2, GEO, cfg, proposal=broken)

    def test_missing_sampler_rejected(self):
        no_sampler = SampledDensity(gaussian_sampled(N01).log_density)
        d2 = gaussian_sampled(N11)
        with pytest.raises(ValueError):
            estimate_z(no_sampler, d2, GEO, EstimatorConfig(samples=10))


class TestEstimateKLExtended:
    def test_identical_densities_exact_zero(self):
        d = gaussian_sampled(N01)
        cfg = EstimatorConfig(samples=5_000, seed=11)
        assert estimate_kl_extended(d, d, GEO, cfg) == (0.0, 0.0)

    def test_matches_closed_form(self):
        # KL+(p1, Z*mix) = KL(p1, mix) - log Z + Z - 1 for the geometric mean
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N12)
        cfg = EstimatorConfig(samples=1_000_000, seed=77)
        estimate, stderr = estimate_kl_extended(d1, d2, GEO, cfg)
        z = math.exp(-bhattacharyya_gaussian(N01, N12))
        mix = geometric_mixture_params(N01, N12)
        closed = kl_gaussian(N01, mix) - math.log(z) + z - 1.0
        assert abs(estimate - closed) <= 4.0 * stderr

    def test_error_shrinks_with_sample_size(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N12)
        small = estimate_kl_extended(d1, d2, GEO,
                                     EstimatorConfig(samples=50_000, seed=5))
        large = estimate_kl_extended(d1, d2, GEO,
                                     EstimatorConfig(samples=200_000, seed=5))
        ratio = large[1] / small[1]
        assert ratio == pytest.approx(0.5, rel=0.2)


class TestEstimateJSMExtended:
    def test_identical_densities_exact_zero(self):
        d = gaussian_sampled(N01)
        cfg = EstimatorConfig(samples=2_000, seed=13)
        assert estimate_js_m_extended(d, d, GEO, cfg) == (0.0, 0.0)

    def test_gaussian_geometric_within_band(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=1_000_000, seed=20240502)
        estimate, stderr = estimate_js_m_extended(d1, d2, GEO, cfg)
        closed = gjsd_extended_gaussian(N01, N11)
        assert abs(estimate - closed) <= 4.0 * stderr

    def test_skew_mean_uses_swapped_weights(self):
        # alpha != 1/2 exercises the argument swap in the second KL term
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        mean = MeanSpec.geometric(alpha=0.3)
        cfg = EstimatorConfig(samples=500_000, seed=6)
        estimate, stderr = estimate_js_m_extended(d1, d2, mean, cfg)
        # closed form for normalized inputs: js_m + Z - log Z - 1 with
        # Z = exp(-B_alpha) and js_m = beta-averaged KL to the skew mixture
        mix = geometric_mixture_params(N01, N11, 0.3)
        z = math.exp(-bhattacharyya_gaussian(N01, N11, 0.3))
        js_skew = 0.5 * (kl_gaussian(N01, mix) + kl_gaussian(N11, mix))
        closed = js_skew + z - math.log(z) - 1.0
        assert abs(estimate - closed) <= 4.0 * stderr

    def test_categorical_embedding_matches_discrete(self):
        p1 = DiscreteDensity.probability([0.5, 0.3, 0.2])
        p2 = DiscreteDensity.probability([0.2, 0.5, 0.3])
        d1, d2 = categorical_sampled(p1), categorical_sampled(p2)
        cfg = EstimatorConfig(samples=400_000, seed=101)
        estimate, stderr = estimate_js_m_extended(d1, d2, GEO, cfg)
        exact = js_m_extended(p1, p2, GEO)
        assert abs(estimate - exact) <= 4.0 * stderr

    def test_requires_samplers(self):
        d1 = SampledDensity(gaussian_sampled(N01).log_density)
        d2 = gaussian_sampled(N11)
        with pytest.raises(ValueError):
            estimate_js_m_extended(d1, d2, GEO, EstimatorConfig(samples=10))


class TestDeterminism:
    def test_bit_identical_across_workers_and_runs(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        cfg = EstimatorConfig(samples=150_000, seed=99, chunk_size=4096)
        serial = estimate_js_m_extended(d1, d2, GEO, cfg, workers=1)
        threaded = estimate_js_m_extended(d1, d2, GEO, cfg, workers=8)
        repeat = estimate_js_m_extended(d1, d2, GEO, cfg, workers=8)
        assert serial == threaded == repeat

    def test_seed_changes_stream(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        a = estimate_z(d1, d2, GEO, EstimatorConfig(samples=10_000, seed=1))
        b = estimate_z(d1, d2, GEO, EstimatorConfig(samples=10_000, seed=2))
        assert a != b


class TestGammaDivergence:
    def test_zero_at_identity_all_routes(self):
        p = DiscreteDensity.probability([0.4, 0.6])
        assert gamma_divergence(p, p, 0.5) == pytest.approx(0.0, abs=1e-12)
        e = expfam_density(N01)
        assert gamma_divergence(e, e, 0.5) == pytest.approx(0.0, abs=1e-12)
        d = gaussian_sampled(N01)
        assert gamma_divergence(d, d, 0.5, "quadrature",
                                support=(-12.0, 12.0)) == pytest.approx(
            0.0, abs=1e-9)

    def test_projective_scaling_invariance(self):
        e1, e2 = expfam_density(N01), expfam_density(N12)
        s1 = expfam_density(N01, math.log(2.0))
        s2 = expfam_density(N12, math.log(3.0))
        assert gamma_divergence(s1, s2, 0.7) == pytest.approx(
            gamma_divergence(e1, e2, 0.7), abs=1e-10)

    def test_discrete_projective(self):
        p1 = DiscreteDensity.probability([0.5, 0.5])
        p2 = DiscreteDensity.probability([0.25, 0.75])
        scaled1 = DiscreteDensity.positive(2.0 * p1.weights)
        scaled2 = DiscreteDensity.positive(3.0 * p2.weights)
        assert gamma_divergence(scaled1, scaled2, 0.3) == pytest.approx(
            gamma_divergence(p1, p2, 0.3), abs=1e-12)

    def test_quadrature_projective(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N12)
        scaled1 = SampledDensity(lambda x: d1.log_density(x) + math.log(2.0))
        scaled2 = SampledDensity(lambda x: d2.log_density(x) + math.log(3.0))
        support = (-20.0, 20.0)
        plain = gamma_divergence(d1, d2, 0.5, "quadrature", support=support)
        scaled = gamma_divergence(scaled1, scaled2, 0.5, "quadrature",
                                  support=support)
        assert scaled == pytest.approx(plain, abs=1e-10)

    def test_gamma_to_zero_recovers_kl_discrete(self):
        p1 = DiscreteDensity.probability([0.5, 0.5])
        p2 = DiscreteDensity.probability([0.25, 0.75])
        exact = kl(p1, p2)
        gaps = [abs(gamma_divergence(p1, p2, g) - exact)
                for g in (1e-2, 1e-3, 1e-4)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[1] < 5e-3

    def test_gamma_to_zero_recovers_kl_gaussian(self):
        e1, e2 = expfam_density(N01), expfam_density(N12)
        exact = kl_gaussian(N01, N12)
        assert gamma_divergence(e1, e2, 1e-3) == pytest.approx(exact, abs=1e-3)

    def test_quadrature_matches_closed_form(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N12)
        closed = gamma_divergence(expfam_density(N01), expfam_density(N12), 0.5)
        quad = gamma_divergence(d1, d2, 0.5, "quadrature",
                                support=(-20.0, 20.0))
        assert quad == pytest.approx(closed, abs=1e-7)

    def test_monte_carlo_route(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N12)
        closed = gamma_divergence(expfam_density(N01), expfam_density(N12), 0.5)
        cfg = EstimatorConfig(samples=400_000, seed=8, proposal=Proposal.CUSTOM)
        mc = gamma_divergence(d1, d2, 0.5, "monte_carlo", cfg=cfg,
                              proposal=arithmetic_mixture_proposal(d1, d2))
        assert mc == pytest.approx(closed, abs=5e-3)

    def test_domain_exit_raises(self):
        # gamma large enough that theta1 + gamma*theta2 stays PD is fine;
        # a negative-definite direction must raise instead
        fam = gaussian_family(1)
        good = expfam_density(N01)
        bad = ExpFamilyDensity(fam, np.array([0.0, -0.4]))
        with pytest.raises(DivergentIntegral):
            gamma_divergence(good, bad, 2.0, "closed_form")

    def test_rejects_nonpositive_gamma(self):
        p = DiscreteDensity.probability([0.5, 0.5])
        with pytest.raises(ValueError):
            gamma_divergence(p, p, 0.0)


class TestJsMGamma:
    def test_zero_at_identity(self):
        p = DiscreteDensity.probability([0.3, 0.7])
        assert js_m_gamma(p, p, GEO, 1e-3) == pytest.approx(0.0, abs=1e-12)

    def test_discrete_approximates_js_m(self):
        p1 = DiscreteDensity.probability([0.5, 0.5])
        p2 = DiscreteDensity.probability([0.25, 0.75])
        for mean in (GEO, MeanSpec.power(2.0), ARITH):
            approx = js_m_gamma(p1, p2, mean, 1e-3)
            assert approx == pytest.approx(js_m(p1, p2, mean), abs=5e-3)

    def test_gaussian_geometric_closed_form(self):
        e1, e2 = expfam_density(N01), expfam_density(N11)
        approx = js_m_gamma(e1, e2, GEO, 1e-3, "closed_form")
        assert approx == pytest.approx(gjsd_gaussian(N01, N11), abs=5e-3)

    def test_gaussian_quadrature_route(self):
        d1, d2 = gaussian_sampled(N01), gaussian_sampled(N11)
        approx = js_m_gamma(d1, d2, GEO, 1e-3, "quadrature",
                            support=(-14.0, 15.0))
        assert approx == pytest.approx(gjsd_gaussian(N01, N11), abs=5e-3)

    def test_expfam_rejects_non_geometric(self):
        e1, e2 = expfam_density(N01), expfam_density(N11)
        with pytest.raises(ValueError):
            js_m_gamma(e1, e2, ARITH, 1e-3)
