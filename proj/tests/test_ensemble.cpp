#include <gtest/gtest.h>

#include <cmath>

#include "chaoscope/ensemble.hpp"
#include "chaoscope/io.hpp"
#include "support.hpp"

using namespace chaoscope;

namespace {

EnsembleRunConfig config(QubitState q, std::uint64_t N, std::size_t n, EnsembleScheme s, std::uint64_t seed) {
    EnsembleRunConfig c;
    c.initial_state = q;
    c.N = N;
    c.n_iters = n;
    c.scheme = std::move(s);
    c.seed = seed;
    return c;
}

// Binomial oracle for one iteration: floor(N/2) groups, each kept with prob p.
void expect_one_step_ratio(const RunStats& st, double p) {
    const double groups = std::floor(st.sizes[0] / 2.0);
    const double mean = groups * p;
    const double sd = std::sqrt(groups * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(st.sizes[1]), mean, 3 * sd);
}

TEST(Ensemble, Validation) {
    EXPECT_THROW(simulate_ensemble(config(QubitState::plus(), 1, 1, EnsembleScheme::full(), 0)), std::invalid_argument);
    auto c = config(QubitState::plus(), 10, 1, EnsembleScheme::full(), 0);
    c.post_unitary = Eigen::Matrix2cd::Constant(1.0);
    EXPECT_THROW(simulate_ensemble(c), std::invalid_argument);
}

TEST(Ensemble, PoleStateHalvesDeterministically) {
    const auto st = simulate_ensemble(config(QubitState::zero(), 1000, 6, EnsembleScheme::full(), 1));
    const std::vector<std::uint64_t> want{1000, 500, 250, 125, 62, 31, 15};
    EXPECT_EQ(st.sizes, want);
    for (double p : st.per_pair_acceptance) EXPECT_NEAR(p, 1.0, 1e-15);
    EXPECT_FALSE(st.extinct_at.has_value());
}

TEST(Ensemble, BalancedStateFirstStep) {
    const auto full = simulate_ensemble(config(QubitState::plus(), 1000000, 1, EnsembleScheme::full(), 2));
    expect_one_step_ratio(full, 0.5);
    EXPECT_NEAR(full.sizes[1] / 1e6, 0.25, 3 * std::sqrt(5e5 * 0.25) / 1e6);
    const auto simp = simulate_ensemble(config(QubitState::plus(), 1000000, 1, EnsembleScheme::simplified(), 3));
    expect_one_step_ratio(simp, 0.25);
    EXPECT_NEAR(simp.sizes[1] / 1e6, 0.125, 3 * std::sqrt(5e5 * 0.25 * 0.75) / 1e6);
}

TEST(Ensemble, PairwiseConsumptionProperty) {
    CounterRng rng(90);
    for (int t = 0; t < 40; ++t) {
        const QubitState q = uniform_qubit(rng);
        const auto scheme = t % 2 ? EnsembleScheme::full() : EnsembleScheme::simplified();
        auto c = config(q, 1000 + 37 * t, 8, scheme, 100 + t);
        if (t % 3 == 0) c.post_unitary = u_theta_phi(0.4, kPi / 2);
        const auto st = simulate_ensemble(c);
        ASSERT_EQ(st.sizes.size(), 9u);
        ASSERT_EQ(st.states.size(), 9u);
        EXPECT_EQ(st.seed, c.seed);
        for (std::size_t k = 0; k + 1 < st.sizes.size(); ++k) {
            EXPECT_LE(st.sizes[k + 1], st.sizes[k] / 2);
            EXPECT_GE(st.per_iter_rates[k], 0.0);
            EXPECT_LE(st.per_iter_rates[k], 0.5);
        }
        if (st.extinct_at) {
            for (std::size_t k = *st.extinct_at; k < st.sizes.size(); ++k) EXPECT_EQ(st.sizes[k], 0u);
        }
    }
}

TEST(Ensemble, GeneralSchemeUsesDegreeGroups) {
    const RationalMap cubic({0.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 0.0});
    const auto st = simulate_ensemble(config(QubitState::zero(), 999, 2, EnsembleScheme::general(cubic), 4));
    EXPECT_EQ(st.sizes[1], 333u);
    EXPECT_EQ(st.sizes[2], 111u);
    // The general z^2 scheme follows the same track as FULL.
    const auto a = simulate_ensemble(config(QubitState(0.6, 0.8), 10000, 5, EnsembleScheme::general(RationalMap::quadratic(0.0)), 5));
    const auto b = simulate_ensemble(config(QubitState(0.6, 0.8), 10000, 5, EnsembleScheme::full(), 5));
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        EXPECT_NEAR(std::abs(a.states[k].overlap(b.states[k])), 1.0, 1e-12);
    }
    for (std::size_t k = 0; k < a.per_pair_acceptance.size(); ++k) {
        EXPECT_NEAR(a.per_pair_acceptance[k], b.per_pair_acceptance[k], 1e-12);
    }
}

TEST(Ensemble, StateTrackFollowsStep) {
    const QubitState q0(0.6, 0.8);
    auto c = config(q0, 5000, 4, EnsembleScheme::full(), 6);
    c.post_unitary = u_theta_phi(kPi / 4, kPi / 2);
    const auto st = simulate_ensemble(c);
    SpherePoint z = qubit_to_sphere(q0);
    for (std::size_t k = 1; k < st.states.size(); ++k) {
        z = evaluate(lattes_f(), z);
        EXPECT_LT(spherical_distance(qubit_to_sphere(st.states[k]), z), 1e-12);
    }
}

TEST(Ensemble, Reproducible) {
    const auto c = config(QubitState(0.6, 0.8), 100000, 6, EnsembleScheme::full(), 77);
    const auto a = simulate_ensemble(c);
    const auto b = simulate_ensemble(c);
    EXPECT_EQ(run_stats_csv(a), run_stats_csv(b));
    EXPECT_EQ(io::run_stats_json(a).dump(), io::run_stats_json(b).dump());
    auto c2 = c;
    c2.seed = 78;
    EXPECT_NE(simulate_ensemble(c2).sizes, a.sizes);
}

TEST(Ensemble, AcceptanceConvergesProperty) {
    CounterRng rng(91);
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const QubitState q = uniform_qubit(rng);
        const auto st = simulate_ensemble(config(q, 200000, 1, EnsembleScheme::full(), seed));
        const double p = s_step(q, SScheme::Full).success_prob;
        EXPECT_NEAR(st.per_pair_acceptance[0], p, 1e-15);
        const double g = 100000;
        EXPECT_NEAR(st.empirical_acceptance[0], p, 3 * std::sqrt(p * (1 - p) / g));
    }
}

TEST(Ensemble, SizeMomentsMatchMonteCarlo) {
    // Mean and sd of M_n from the recursion against 400 independent runs.
    const std::vector<double> probs{0.5, 0.5, 0.5};
    const auto mom = size_moments(4000, probs);
    EXPECT_NEAR(mom.mean, 4000.0 / 64, 1e-12);
    double s = 0, s2 = 0;
    const int runs = 400;
    for (int r = 0; r < runs; ++r) {
        const double m = static_cast<double>(
            simulate_ensemble(config(QubitState::plus(), 4000, 3, EnsembleScheme::full(), 1000 + r)).sizes.back());
        s += m;
        s2 += m * m;
    }
    const double mean = s / runs;
    const double sd = std::sqrt(s2 / runs - mean * mean);
    EXPECT_NEAR(mean, mom.mean, 4 * mom.sd / std::sqrt(runs));
    EXPECT_NEAR(sd / mom.sd, 1.0, 0.15);
}

TEST(Helstrom, Examples) {
    EXPECT_DOUBLE_EQ(helstrom_error(1.0, 7).exact, 0.5);
    EXPECT_DOUBLE_EQ(helstrom_error(0.0, 1).exact, 0.0);
    const auto h = helstrom_error(0.9999, 100);
    EXPECT_NEAR(h.linearized / h.exact, 1.0, 0.05);
    EXPECT_THROW(helstrom_error(1.1, 1), DomainError);
    EXPECT_THROW(helstrom_error(0.5, 0), DomainError);
}

TEST(Helstrom, Monotone) {
    for (int c : {1, 3, 10, 100}) {
        double prev = -1;
        for (int i = 0; i <= 100; ++i) {
            const double e = helstrom_error(i / 100.0, c).exact;
            EXPECT_GE(e, prev);
            prev = e;
        }
    }
    for (double o : {0.1, 0.5, 0.9, 0.999}) {
        double prev = 1;
        for (int c = 1; c <= 200; ++c) {
            const double e = helstrom_error(o, c).exact;
            EXPECT_LE(e, prev);
            prev = e;
        }
    }
}

TEST(Magnification, Bound) {
    EXPECT_DOUBLE_EQ(magnification_bound(2.0), 0.25);
    for (int n = 1; n <= 8; ++n) EXPECT_DOUBLE_EQ(magnification_bound(std::ldexp(1.0, n)), std::pow(4.0, -n));
    EXPECT_NEAR(magnification_bound(1.0 + 1e-12), 1.0, 1e-11);
    EXPECT_THROW(magnification_bound(1.0), DomainError);
    EXPECT_THROW(magnification_bound(0.5), DomainError);
}

TEST(CostBound, Examples) {
    const auto zero = cost_bound_check(0, 1000, 1e-4, 1);
    EXPECT_EQ(zero.final_size, 1000u);
    EXPECT_DOUBLE_EQ(zero.bound, 1.0);
    EXPECT_TRUE(zero.passed());

    const auto r = cost_bound_check(3, 1000000, 1e-4, 2);
    EXPECT_TRUE(r.doubling_checked);
    EXPECT_NEAR(r.separation_ratio / 8.0, 1.0, 0.1);
    EXPECT_TRUE(r.passed());

    const auto at_plus = cost_bound_check(3, 1000000, 0.0, 3);
    EXPECT_NEAR(at_plus.ratio, 1.0 / 64, 3 * at_plus.sigma);
    EXPECT_TRUE(at_plus.inequality_ok);
}

TEST(Export, CsvLayout) {
    const auto st = simulate_ensemble(config(QubitState::zero(), 8, 2, EnsembleScheme::full(), 1));
    EXPECT_EQ(run_stats_csv(st),
              "iter,size,rate,alpha_re,alpha_im,beta_re,beta_im\n"
              "0,8,1,1,0,0,0\n"
              "1,4,0.5,1,0,0,0\n"
              "2,2,0.5,1,0,0,0\n");
    const auto j = io::run_stats_json(st);
    EXPECT_EQ(j["sizes"], nlohmann::json({8, 4, 2}));
    EXPECT_EQ(j["seed"], 1);
    EXPECT_TRUE(j["extinct_at"].is_null());
}

}  // namespace
