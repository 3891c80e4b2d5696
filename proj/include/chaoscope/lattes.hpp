#pragma once

// Weierstrass p for the square lattice Z[i] and the numerical checks built on
// it: the Lattes conjugacy f^n o p~ = p~ o (1-i)^n, the conformal factor of
// p~ and the exponential-mixing coverage experiment.
//
// p is summed directly over the lattice points with max(|m|,|n|) <= K, shell
// by shell. Beyond the square, the expansion
//   sum_{w outside} [1/(t-w)^2 - 1/w^2] = sum_j (j+1) t^j sum_{w outside} w^-(j+2)
// only keeps powers j + 2 divisible by 4 (the set is invariant under w -> i w).
// The w^-4 moment of the outside region decays like 1/K^2, far too slowly, so it
// is added back exactly: 3 t^2 (G4 - S4(K)), with G4 = sum' w^-4 evaluated row
// by row through sum_m (m + x)^-4 = pi^4 (2 + cos 2 pi x) / (3 sin^4 pi x).
// What remains is O(|t|^6 / K^6).

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/rational_map.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

struct WeierstrassConfig {
    int truncation_radius = 40;  // K
    double target_tol = 1e-8;
};

inline constexpr double kPoleGuard = 1e-8;

// A point of C / Z[i], stored in [0,1) x [0,1) i.
class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(cplx t) : t_(reduce(t)) {}

    cplx value() const noexcept { return t_; }

    // Representative in [-1/2, 1/2) x [-1/2, 1/2) i.
    cplx centered() const noexcept {
        double re = t_.real();
        double im = t_.imag();
        if (re >= 0.5) re -= 1.0;
        if (im >= 0.5) im -= 1.0;
        return {re, im};
    }

    // Distance to the nearest lattice point.
    double lattice_distance() const noexcept { return std::abs(centered()); }

private:
    static double frac(double x) noexcept {
        double r = x - std::floor(x);
        return r >= 1.0 ? 0.0 : r;
    }
    static cplx reduce(cplx t) noexcept { return {frac(t.real()), frac(t.imag())}; }

    cplx t_{0.0, 0.0};
};

// z -> (1 - i)^n z mod Z[i]
inline TorusPoint torus_multiply(const TorusPoint& t, std::size_t n_steps) {
    TorusPoint r = t;
    for (std::size_t k = 0; k < n_steps; ++k) r = TorusPoint(cplx(1.0, -1.0) * r.value());
    return r;
}

// sum' w^-4 over Z[i] by rows: the n = 0 row is 2 zeta(4), the rows +-n add
// pi^4 (2 + cosh 2 pi n) / (3 sinh^4 pi n) each.
inline double lattice_moment4(int max_rows = 64) {
    const double pi4 = kPi * kPi * kPi * kPi;
    double sum = 2.0 * pi4 / 90.0;
    for (int n = 1; n <= max_rows; ++n) {
        const double sh = std::sinh(kPi * n);
        const double row = pi4 * (2.0 + std::cosh(2.0 * kPi * n)) / (3.0 * sh * sh * sh * sh);
        sum += 2.0 * row;
        if (row < 1e-18 * sum) break;
    }
    return sum;
}

class Weierstrass {
public:
    explicit Weierstrass(WeierstrassConfig cfg = {}) : cfg_(cfg) {
        const int K = cfg_.truncation_radius;
        if (K < 10) throw std::invalid_argument("WeierstrassConfig: truncation radius must be >= 10");
        if (tail_bound() > cfg_.target_tol) {
            throw ToleranceNotMet("WeierstrassConfig: tail bound " + std::to_string(tail_bound()) +
                                  " exceeds target " + std::to_string(cfg_.target_tol));
        }
        // Shells s = 1..K, each listed as +-w pairs.
        points_.reserve(static_cast<std::size_t>((2 * K + 1) * (2 * K + 1) - 1));
        cplx s4 = 0.0;
        cplx s6 = 0.0;
        for (int s = 1; s <= K; ++s) {
            for (int m = -s; m <= s; ++m) {
                for (int n = -s; n <= s; ++n) {
                    if (std::max(std::abs(m), std::abs(n)) != s) continue;
                    if (m < 0 || (m == 0 && n < 0)) continue;  // emitted with its negative
                    const cplx w(m, n);
                    points_.push_back(w);
                    points_.push_back(-w);
                    const cplx w2 = w * w;
                    s4 += 2.0 / (w2 * w2);
                    s6 += 2.0 / (w2 * w2 * w2);
                }
            }
        }
        g4_ = lattice_moment4();
        tail4_ = g4_ - s4.real();
        g2_ = 60.0 * g4_;
        sqrt_g2_ = std::sqrt(g2_);
        g3_ = 140.0 * s6;
    }

    const WeierstrassConfig& config() const noexcept { return cfg_; }

    // Estimated truncation error of p after the w^-4 correction, for |t| <= 1/sqrt(2):
    // 7 |t|^6 sum_{s>K} 8 s * s^-8 <= 7 / 8 * 8 / (6 K^6).
    double tail_bound() const noexcept {
        const double K = cfg_.truncation_radius;
        return 7.0 / 6.0 / std::pow(K, 6);
    }

    double g2() const noexcept { return g2_; }
    double sqrt_g2() const noexcept { return sqrt_g2_; }
    // Shell sum 140 sum' w^-6; zero for the square lattice up to rounding.
    cplx g3() const noexcept { return g3_; }

    cplx p(cplx t) const {
        const cplx tc = checked_center(t, "weierstrass_p");
        const cplx t2 = tc * tc;
        cplx sum = 0.0;
        for (const cplx& w : points_) {
            const cplx d = tc - w;
            // 1/(t-w)^2 - 1/w^2 without cancellation.
            sum += tc * (2.0 * w - tc) / (w * w * d * d);
        }
        return 1.0 / t2 + sum + 3.0 * t2 * tail4_;
    }

    cplx p_prime(cplx t) const {
        const cplx tc = checked_center(t, "weierstrass_p_prime");
        cplx sum = 0.0;
        for (const cplx& w : points_) {
            const cplx d = tc - w;
            sum += 1.0 / (d * d * d);
        }
        return -2.0 / (tc * tc * tc) - 2.0 * sum + 6.0 * tc * tail4_;
    }

    // p~(t) = M(2 p(t) / (i sqrt(g2))), M(z) = (z + 1)/(z - 1). Lattice points
    // map to M(infinity) = 1.
    SpherePoint tilde(cplx t) const {
        const cplx tc = TorusPoint(t).centered();
        if (std::abs(tc) < kPoleGuard) return {1.0, 1.0};
        // (2 p t^2 : i sqrt(g2) t^2) stays bounded near the pole.
        const cplx t2 = tc * tc;
        const cplx ua = 2.0 * p(tc) * t2;
        const cplx ub = cplx(0.0, sqrt_g2_) * t2;
        return {ua + ub, ua - ub};
    }

    // rho^2 = 64 g2 |4 p^3 - g2 p| / (4 |p|^2 + g2)^2
    double rho(cplx t) const {
        const cplx w = p(t);
        const double num = 64.0 * g2_ * std::abs(4.0 * w * w * w - g2_ * w);
        const double den = 4.0 * std::norm(w) + g2_;
        return std::sqrt(num) / den;
    }

private:
    static cplx checked_center(cplx t, const char* who) {
        const cplx tc = TorusPoint(t).centered();
        if (std::abs(tc) < kPoleGuard) throw PoleInput(std::string(who) + ": argument is a lattice point");
        return tc;
    }

    WeierstrassConfig cfg_;
    std::vector<cplx> points_;
    double g4_ = 0.0;
    double tail4_ = 0.0;
    double g2_ = 0.0;
    double sqrt_g2_ = 0.0;
    cplx g3_ = 0.0;
};

// |p'^2 - (4 p^3 - g2 p)| relative to the size of the terms, so that points
// near a pole are not penalized for the magnitude of p.
inline double lattes_ode_residual(const Weierstrass& wp, cplx t) {
    const cplx p = wp.p(t);
    const cplx dp = wp.p_prime(t);
    const double g2 = wp.g2();
    const cplx r = dp * dp - (4.0 * p * p * p - g2 * p);
    const double scale = std::norm(dp) + 4.0 * std::norm(p) * std::abs(p) + g2 * std::abs(p);
    return std::abs(r) / std::max(1.0, scale);
}

inline double compute_g2(const WeierstrassConfig& cfg) { return Weierstrass(cfg).g2(); }

inline cplx compute_g3(const WeierstrassConfig& cfg) {
    Weierstrass w(cfg);
    if (!(std::abs(w.g3()) < cfg.target_tol)) throw ToleranceNotMet("compute_g3: |g3| above target tolerance");
    return w.g3();
}

inline cplx weierstrass_p(const TorusPoint& t, const WeierstrassConfig& cfg) { return Weierstrass(cfg).p(t.value()); }
inline cplx weierstrass_p_prime(const TorusPoint& t, const WeierstrassConfig& cfg) {
    return Weierstrass(cfg).p_prime(t.value());
}
inline SpherePoint wp_tilde(const TorusPoint& t, const WeierstrassConfig& cfg) { return Weierstrass(cfg).tilde(t.value()); }
inline double conformal_rho(const TorusPoint& t, const WeierstrassConfig& cfg) { return Weierstrass(cfg).rho(t.value()); }

inline constexpr double kOrbitPoleGuard = 1e-6;

// d_R(f^n(p~(t)), p~((1-i)^n t)) with f the Lattes map (z^2 + i)/(i z^2 + 1).
inline double conjugacy_residual(const Weierstrass& wp, const TorusPoint& t, std::size_t n_steps) {
    TorusPoint tk = t;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        if (tk.lattice_distance() < kOrbitPoleGuard) {
            throw PoleEncountered(k, "conjugacy_residual: torus orbit hits a pole at step " + std::to_string(k));
        }
        if (k < n_steps) tk = TorusPoint(cplx(1.0, -1.0) * tk.value());
    }
    const RationalMap f = lattes_f();
    SpherePoint z = wp.tilde(t.value());
    for (std::size_t k = 0; k < n_steps; ++k) z = evaluate(f, z);
    return spherical_distance(z, wp.tilde(tk.value()));
}

inline double conjugacy_residual(const TorusPoint& t, std::size_t n_steps, const WeierstrassConfig& cfg) {
    return conjugacy_residual(Weierstrass(cfg), t, n_steps);
}

// --- exponential mixing ------------------------------------------------------

// ceil(6 - log_sqrt2(eps))
inline std::size_t mixing_iterations(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mixing_iterations: eps must lie in (0, 1)");
    return static_cast<std::size_t>(std::ceil(6.0 - 2.0 * std::log(eps) / std::log(2.0)));
}

// Equal-angle latitude/longitude partition of the Bloch sphere; the first and
// last latitude bands are each merged into a single polar cap.
struct SpherePartition {
    int lat_bands = 32;
    int lon_cells = 64;

    int cell_count() const noexcept { return 2 + (lat_bands - 2) * lon_cells; }

    int cell_of(const SpherePoint& p) const noexcept {
        const auto v = bloch_vector(p);
        const double theta = std::acos(std::clamp(v[2], -1.0, 1.0));
        const int band = std::min(lat_bands - 1, static_cast<int>(theta / kPi * lat_bands));
        if (band == 0) return 0;
        if (band == lat_bands - 1) return 1;
        const double phi = std::atan2(v[1], v[0]) + kPi;
        const int lon = std::min(lon_cells - 1, static_cast<int>(phi / (2.0 * kPi) * lon_cells));
        return 2 + (band - 1) * lon_cells + lon;
    }
};

struct MixingOptions {
    int grid = 400;  // grid x grid samples over the ball's tangent square
    SpherePartition partition{};
};

struct MixingResult {
    double coverage = 0.0;
    std::size_t n_steps = 0;
    int covered_cells = 0;
    int total_cells = 0;
    std::size_t samples = 0;
};

// Iterates the Lattes map over a grid filling the ball d_A(z, z0) <= eps
// (d_R <= 2 eps) and reports the fraction of partition cells hit.
inline MixingResult mixing_cover_test(const SpherePoint& z0, double eps, std::optional<std::size_t> n_override = {},
                                      const MixingOptions& opts = {}) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mixing_cover_test: eps must lie in (0, 1)");
    if (opts.grid < 2) throw std::invalid_argument("mixing_cover_test: grid must be >= 2");
    MixingResult res;
    res.n_steps = n_override.value_or(mixing_iterations(eps));
    res.total_cells = opts.partition.cell_count();

    const QubitState psi = sphere_to_qubit(z0);
    const cplx pa = psi.alpha();
    const cplx pb = psi.beta();
    // Orthogonal direction: (-conj(beta), conj(alpha)).
    const cplx qa = -std::conj(pb);
    const cplx qb = std::conj(pa);
    const RationalMap f = lattes_f();
    std::vector<char> hit(static_cast<std::size_t>(res.total_cells), 0);

    for (int i = 0; i < opts.grid; ++i) {
        const double u = eps * (-1.0 + 2.0 * i / (opts.grid - 1));
        for (int j = 0; j < opts.grid; ++j) {
            const double v = eps * (-1.0 + 2.0 * j / (opts.grid - 1));
            const double s = std::hypot(u, v);
            if (s > eps) continue;
            const cplx dir = s > 0.0 ? cplx(u, v) / s : cplx(1.0);
            const double cs = std::cos(s);
            const double sn = std::sin(s);
            SpherePoint z(cs * pa + sn * dir * qa, cs * pb + sn * dir * qb);
            for (std::size_t k = 0; k < res.n_steps; ++k) z = evaluate(f, z);
            hit[static_cast<std::size_t>(opts.partition.cell_of(z))] = 1;
            ++res.samples;
        }
    }
    for (char h : hit) res.covered_cells += h;
    res.coverage = static_cast<double>(res.covered_cells) / res.total_cells;
    return res;
}

}  // namespace chaoscope
