#pragma once

// Monte Carlo model of an ensemble shrinking under iterated post-selection.
// Survivors of a step are identical by construction, so the state is tracked
// deterministically and only the counts are random: at each iteration the
// ensemble is cut into groups (pairs for the two-photon scheme, groups of n
// for a degree-n map, odd leftovers dropped) and each group survives with the
// step's success probability.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaoscope/errors.hpp"
#include "chaoscope/protocol.hpp"
#include "chaoscope/rational_map.hpp"
#include "chaoscope/rng.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

enum class SchemeKind { Full, Simplified, General };

struct EnsembleScheme {
    SchemeKind kind = SchemeKind::Full;
    std::optional<RationalMap> map;  // General only

    static EnsembleScheme full() { return {SchemeKind::Full, std::nullopt}; }
    static EnsembleScheme simplified() { return {SchemeKind::Simplified, std::nullopt}; }
    static EnsembleScheme general(RationalMap m) { return {SchemeKind::General, std::move(m)}; }

    // Qubits consumed per accepted output qubit.
    int group_size() const { return kind == SchemeKind::General ? map->degree() : 2; }
};

struct EnsembleRunConfig {
    QubitState initial_state = QubitState::zero();
    std::uint64_t N = 2;
    std::size_t n_iters = 0;
    EnsembleScheme scheme{};
    // Applied after S for the Full/Simplified schemes, e.g. U_{theta,phi}.
    std::optional<Eigen::Matrix2cd> post_unitary;
    std::uint64_t seed = 0;

    void validate() const {
        if (N < 2) throw std::invalid_argument("EnsembleRunConfig: N must be >= 2");
        if (scheme.kind == SchemeKind::General && !scheme.map) {
            throw std::invalid_argument("EnsembleRunConfig: General scheme needs a map");
        }
        if (post_unitary) {
            const double r = ((*post_unitary).adjoint() * *post_unitary - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
            if (!(r < kUnitarityTol)) throw std::invalid_argument("EnsembleRunConfig: post_unitary is not unitary");
        }
    }
};

// U_{theta,phi} = [[cos t, sin t e^{i phi}], [-sin t e^{-i phi}, cos t]]
inline Eigen::Matrix2cd u_theta_phi(double theta, double phi) {
    Eigen::Matrix2cd u;
    u << std::cos(theta), std::polar(std::sin(theta), phi), -std::polar(std::sin(theta), -phi), std::cos(theta);
    return u;
}

struct RunStats {
    std::vector<std::uint64_t> sizes;          // M_0 = N, ..., M_n
    std::vector<double> per_iter_rates;        // M_{k+1} / M_k (0 once extinct)
    std::vector<QubitState> states;            // state at iteration 0..n
    std::vector<double> per_pair_acceptance;   // analytic success probability per iteration
    std::vector<double> empirical_acceptance;  // survivors / groups per iteration
    std::optional<std::size_t> extinct_at;     // first k with M_k = 0
    std::uint64_t seed = 0;
};

namespace detail {

struct Stepper {
    const EnsembleRunConfig& cfg;
    std::optional<NQubitUnitary> V;

    explicit Stepper(const EnsembleRunConfig& c) : cfg(c) {
        if (cfg.scheme.kind == SchemeKind::General) V = build_unitary(*cfg.scheme.map);
    }

    // nullopt when the accepted branch has zero amplitude.
    std::optional<StepResult> operator()(const QubitState& q) const {
        if (V) {
            try {
                return protocol_step_general(*V, q);
            } catch (const ZeroBranch&) {
                return std::nullopt;
            }
        }
        StepResult r = s_step(q, cfg.scheme.kind == SchemeKind::Full ? SScheme::Full : SScheme::Simplified);
        if (r.success_prob <= 0.0) return std::nullopt;
        if (cfg.post_unitary) {
            const Eigen::Vector2cd v = *cfg.post_unitary * Eigen::Vector2cd(r.out_state.alpha(), r.out_state.beta());
            r.out_state = QubitState::normalized(v(0), v(1));
        }
        return r;
    }
};

}  // namespace detail

// Iteration k draws group outcomes from CounterRng::substream(seed, k); group
// i survives iff element i of that stream, as a uniform in [0, 1), is below
// the success probability.
inline RunStats simulate_ensemble(const EnsembleRunConfig& cfg) {
    cfg.validate();
    const detail::Stepper step(cfg);
    const auto group = static_cast<std::uint64_t>(cfg.scheme.group_size());
    RunStats st;
    st.seed = cfg.seed;
    st.sizes.push_back(cfg.N);
    st.states.push_back(cfg.initial_state);
    QubitState q = cfg.initial_state;
    for (std::size_t k = 0; k < cfg.n_iters; ++k) {
        const std::uint64_t m = st.sizes.back();
        const auto res = step(q);
        const double p = res ? res->success_prob : 0.0;
        const std::uint64_t groups = m / group;
        std::uint64_t survivors = 0;
        if (p > 0.0) {
            const CounterRng rng = CounterRng::substream(cfg.seed, k);
            for (std::uint64_t i = 0; i < groups; ++i) {
                if (static_cast<double>(rng.at(i) >> 11) * 0x1.0p-53 < p) ++survivors;
            }
        }
        if (res) q = res->out_state;
        st.sizes.push_back(survivors);
        st.states.push_back(q);
        st.per_pair_acceptance.push_back(p);
        st.empirical_acceptance.push_back(groups > 0 ? static_cast<double>(survivors) / static_cast<double>(groups) : 0.0);
        st.per_iter_rates.push_back(m > 0 ? static_cast<double>(survivors) / static_cast<double>(m) : 0.0);
        if (survivors == 0 && !st.extinct_at) st.extinct_at = k + 1;
    }
    return st;
}

// Mean and standard deviation of M_n for the branching process
// M_{k+1} ~ Binomial(floor(M_k / g), p_k), by moment recursion (floor taken
// as exact division).
struct SizeMoments {
    double mean = 0.0;
    double sd = 0.0;
};

inline SizeMoments size_moments(std::uint64_t N, const std::vector<double>& probs, int group = 2) {
    double mean = static_cast<double>(N);
    double var = 0.0;
    for (double p : probs) {
        const double gm = mean / group;
        const double gv = var / (group * group);
        var = gm * p * (1.0 - p) + p * p * gv;
        mean = gm * p;
    }
    return {mean, std::sqrt(var)};
}

// --- discrimination and magnification bounds ----------------------------------

struct HelstromError {
    double exact = 0.0;       // (1 - sqrt(1 - s^2)) / 2, s = overlap^copies
    double linearized = 0.0;  // (1 - sqrt(copies) sin(angle)) / 2
};

inline HelstromError helstrom_error(double overlap_mod, std::uint64_t copies) {
    if (!(overlap_mod >= 0.0 && overlap_mod <= 1.0)) throw DomainError("helstrom_error: overlap must lie in [0, 1]");
    if (copies < 1) throw DomainError("helstrom_error: copies must be >= 1");
    const double s = std::pow(overlap_mod, static_cast<double>(copies));
    const double d = std::sqrt((1.0 - overlap_mod) * (1.0 + overlap_mod));
    // (1 - sqrt(1 - s^2)) / 2 rewritten without the cancellation at small s.
    const double exact = 0.5 * s * s / (1.0 + std::sqrt((1.0 - s) * (1.0 + s)));
    return {exact, 0.5 * (1.0 - std::sqrt(static_cast<double>(copies)) * d)};
}

inline double magnification_bound(double lambda) {
    if (!(lambda > 1.0)) throw DomainError("magnification_bound: lambda must exceed 1");
    return 1.0 / (lambda * lambda);
}

// --- cost check near the balanced fixed point ----------------------------------------

struct CostReport {
    std::size_t n_iters = 0;
    std::uint64_t N = 0;
    double delta = 0.0;
    std::uint64_t final_size = 0;
    double ratio = 0.0;           // M_n / N
    double bound = 1.0;           // 4^-n
    double expected_ratio = 1.0;  // from the analytic acceptance track
    double sigma = 0.0;           // sd of M_n / N
    bool ratio_within_3sigma = false;
    double separation_ratio = 1.0;  // d_A(track_n, |+>) / d_A(track_0, |+>)
    double expected_separation = 1.0;
    bool doubling_checked = false;  // only for delta <= 2^-(n+4)
    bool doubling_ok = true;
    double discrimination_lhs = 0.0;  // sqrt(M) 2^n sin(delta)
    double discrimination_rhs = 0.0;  // sqrt(N) sin(delta) (1 + 3 sigma slack)
    bool inequality_ok = false;
    RunStats stats;

    bool passed() const noexcept { return ratio_within_3sigma && doubling_ok && inequality_ok; }
};

// The state at quantum angle delta from |+> along the real great circle.
inline QubitState near_plus_state(double delta) {
    return {std::cos(0.25 * kPi + delta), std::sin(0.25 * kPi + delta)};
}

inline CostReport cost_bound_check(std::size_t n_iters, std::uint64_t N, double delta, std::uint64_t seed) {
    CostReport rep;
    rep.n_iters = n_iters;
    rep.N = N;
    rep.delta = delta;
    EnsembleRunConfig cfg;
    cfg.initial_state = near_plus_state(delta);
    cfg.N = N;
    cfg.n_iters = n_iters;
    cfg.scheme = EnsembleScheme::full();
    cfg.seed = seed;
    rep.stats = simulate_ensemble(cfg);

    const double n_d = static_cast<double>(n_iters);
    const double two_n = std::ldexp(1.0, static_cast<int>(n_iters));
    rep.final_size = rep.stats.sizes.back();
    rep.ratio = static_cast<double>(rep.final_size) / static_cast<double>(N);
    rep.bound = std::pow(4.0, -n_d);
    const auto mom = size_moments(N, rep.stats.per_pair_acceptance);
    rep.expected_ratio = mom.mean / static_cast<double>(N);
    rep.sigma = mom.sd / static_cast<double>(N);
    rep.ratio_within_3sigma = std::abs(rep.ratio - rep.bound) <= 3.0 * rep.sigma + 1e-15;

    const QubitState plus = QubitState::plus();
    const double d0 = quantum_angle(rep.stats.states.front(), plus);
    rep.separation_ratio = d0 > 0.0 ? quantum_angle(rep.stats.states.back(), plus) / d0 : 1.0;
    rep.expected_separation = two_n;
    rep.doubling_checked = delta <= std::ldexp(1.0, -static_cast<int>(n_iters) - 4);
    rep.doubling_ok = !rep.doubling_checked || std::abs(rep.separation_ratio / two_n - 1.0) <= 0.1;

    // sqrt(M) 2^n d <= sqrt(N) d; the slack is 3 sd of sqrt(M) relative to
    // its mean, sd(sqrt M) ~ sd(M) / (2 sqrt(E M)).
    const double s = std::sin(delta);
    const double rel = mom.mean > 0.0 ? 3.0 * mom.sd / (2.0 * mom.mean) : 0.0;
    rep.discrimination_lhs = std::sqrt(static_cast<double>(rep.final_size)) * two_n * s;
    rep.discrimination_rhs = std::sqrt(static_cast<double>(N)) * s * (1.0 + rel);
    // sin(delta) > 0 cancels; compare without it so delta = 0 is covered.
    rep.inequality_ok =
        std::sqrt(static_cast<double>(rep.final_size)) * two_n <= std::sqrt(static_cast<double>(N)) * (1.0 + rel);
    return rep;
}

// --- export ---------------------------------------------------------------------------

namespace detail {
inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace detail

// Columns iter,size,rate,alpha_re,alpha_im,beta_re,beta_im; rate is M_k / M_{k-1}
// (1 on the first row).
inline std::string run_stats_csv(const RunStats& st) {
    std::string out = "iter,size,rate,alpha_re,alpha_im,beta_re,beta_im\n";
    for (std::size_t k = 0; k < st.sizes.size(); ++k) {
        const double rate = k == 0 ? 1.0 : st.per_iter_rates[k - 1];
        const QubitState& q = st.states[k];
        out += std::to_string(k) + "," + std::to_string(st.sizes[k]) + "," + detail::fmt_double(rate) + "," +
               detail::fmt_double(q.alpha().real()) + "," + detail::fmt_double(q.alpha().imag()) + "," +
               detail::fmt_double(q.beta().real()) + "," + detail::fmt_double(q.beta().imag()) + "\n";
    }
    return out;
}

}  // namespace chaoscope
