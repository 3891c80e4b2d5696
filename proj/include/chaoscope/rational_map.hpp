#pragma once

// Rational maps of the Riemann sphere, z -> sum c_k z^k / sum d_k z^k, handled
// as a pair of binary forms of formal degree n so that poles need no special
// casing: (a, b) -> (C(a, b), D(a, b)).

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/poly.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

// Resultant threshold (coefficient vectors normalized to unit norm) below
// which numerator and denominator are considered to share a root.
inline constexpr double kCoprimeTol = 1e-9;

class RationalMap {
public:
    // c and d hold c_0..c_n and d_0..d_n; both must have the same length >= 2.
    RationalMap(std::vector<cplx> c, std::vector<cplx> d) : c_(std::move(c)), d_(std::move(d)) {
        if (c_.size() != d_.size() || c_.size() < 2) {
            throw std::invalid_argument("RationalMap: coefficient vectors must have equal length n+1 >= 2");
        }
        const double nc = poly::l2_norm(c_);
        const double nd = poly::l2_norm(d_);
        if (nc == 0.0 || nd == 0.0) throw DegenerateMap("RationalMap: numerator or denominator is identically zero");
        if (!std::isfinite(nc) || !std::isfinite(nd)) throw std::invalid_argument("RationalMap: non-finite coefficient");
        std::vector<cplx> cn(c_), dn(d_);
        for (auto& x : cn) x /= nc;
        for (auto& x : dn) x /= nd;
        resultant_ = std::abs(poly::resultant(cn, dn));
        if (!(resultant_ > kCoprimeTol)) {
            throw DegenerateMap("RationalMap: numerator and denominator share a root (|resultant| = " +
                                std::to_string(resultant_) + ")");
        }
    }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cplx>& numerator() const noexcept { return c_; }
    const std::vector<cplx>& denominator() const noexcept { return d_; }

    // |resultant| of the unit-normalized coefficient vectors.
    double normalized_resultant() const noexcept { return resultant_; }

    // z^2 + c
    static RationalMap quadratic(cplx c) { return {{c, 0.0, 1.0}, {1.0, 0.0, 0.0}}; }

    // (C(a, b), D(a, b)) before normalization.
    std::pair<cplx, cplx> apply_homogeneous(cplx a, cplx b) const {
        return {poly::evaluate(c_, a, b), poly::evaluate(d_, a, b)};
    }

private:
    std::vector<cplx> c_;
    std::vector<cplx> d_;
    double resultant_ = 0.0;
};

inline SpherePoint evaluate(const RationalMap& map, const SpherePoint& z) {
    const auto [num, den] = map.apply_homogeneous(z.a(), z.b());
    if (std::abs(num) < 1e-300 && std::abs(den) < 1e-300) {
        throw DegenerateResult("evaluate: both homogeneous components vanished");
    }
    return {num, den};
}

struct Orbit {
    std::vector<SpherePoint> points;
    RationalMap map;
};

inline Orbit iterate(const RationalMap& map, const SpherePoint& z0, std::size_t n_steps) {
    Orbit orbit{{}, map};
    orbit.points.reserve(n_steps + 1);
    orbit.points.push_back(z0);
    for (std::size_t k = 0; k < n_steps; ++k) orbit.points.push_back(evaluate(map, orbit.points.back()));
    return orbit;
}

// The degree-2 map induced by U_{theta,phi} after the squaring step S.
inline RationalMap phi_family(double theta, double phi) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    return {{st * std::polar(1.0, phi), 0.0, ct}, {ct, 0.0, -st * std::polar(1.0, -phi)}};
}

// f(z) = (z^2 + i) / (i z^2 + 1)
inline RationalMap lattes_f() { return phi_family(kPi / 4.0, kPi / 2.0); }

// Local expansion factor of the map in the spherical metric,
// |f'(z)| (1 + |z|^2) / (1 + |f(z)|^2). Computed in homogeneous form,
//   |C_a D_b - C_b D_a| (|a|^2 + |b|^2) / (n (|C|^2 + |D|^2)),
// which is valid at infinity without a chart change. The partial
// derivatives are formed once per map.
class SphericalDerivative {
public:
    explicit SphericalDerivative(const RationalMap& map)
        : c_(map.numerator()), d_(map.denominator()), ca_(poly::partial_a(c_)), cb_(poly::partial_b(c_)),
          da_(poly::partial_a(d_)), db_(poly::partial_b(d_)), n_(map.degree()) {}

    double operator()(const SpherePoint& z) const {
        const cplx a = z.a();
        const cplx b = z.b();
        const cplx cv = poly::evaluate(c_, a, b);
        const cplx dv = poly::evaluate(d_, a, b);
        const double denom = static_cast<double>(n_) * (std::norm(cv) + std::norm(dv));
        if (denom == 0.0) throw DegenerateResult("derivative_spherical: map vanishes at point");
        const cplx w = poly::evaluate(ca_, a, b) * poly::evaluate(db_, a, b) -
                       poly::evaluate(cb_, a, b) * poly::evaluate(da_, a, b);
        return std::abs(w) * (std::norm(a) + std::norm(b)) / denom;
    }

private:
    poly::Coeffs c_, d_, ca_, cb_, da_, db_;
    int n_;
};

inline double derivative_spherical(const RationalMap& map, const SpherePoint& z) {
    return SphericalDerivative(map)(z);
}

// m^-1 o map o m
inline RationalMap conjugate(const RationalMap& map, const Mobius& m) {
    const auto cs = poly::substitute_linear(map.numerator(), m.m11(), m.m12(), m.m21(), m.m22());
    const auto ds = poly::substitute_linear(map.denominator(), m.m11(), m.m12(), m.m21(), m.m22());
    const Mobius inv = m.inverse();
    std::vector<cplx> c(cs.size()), d(ds.size());
    for (std::size_t k = 0; k < cs.size(); ++k) {
        c[k] = inv.m11() * cs[k] + inv.m12() * ds[k];
        d[k] = inv.m21() * cs[k] + inv.m22() * ds[k];
    }
    return {std::move(c), std::move(d)};
}

// Wronskian form C_a D_b - C_b D_a (degree 2n - 2); its roots are the
// critical points.
inline poly::Coeffs wronskian(const RationalMap& map) {
    const auto& c = map.numerator();
    const auto& d = map.denominator();
    auto lhs = poly::multiply(poly::partial_a(c), poly::partial_b(d));
    const auto rhs = poly::multiply(poly::partial_b(c), poly::partial_a(d));
    for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] -= rhs[k];
    return lhs;
}

inline std::vector<SpherePoint> critical_points(const RationalMap& map) {
    return poly::roots(wronskian(map), 1e-10);
}

inline constexpr double kFixedPointResidual = 1e-8;

// Roots of a D(a, b) - b C(a, b), a form of degree n + 1.
inline std::vector<SpherePoint> fixed_points(const RationalMap& map) {
    const auto& c = map.numerator();
    const auto& d = map.denominator();
    const std::size_t n = c.size() - 1;
    poly::Coeffs p(n + 2, cplx(0.0));
    for (std::size_t k = 0; k <= n; ++k) {
        p[k + 1] += d[k];
        p[k] -= c[k];
    }
    auto pts = poly::roots(p);
    for (const auto& z : pts) {
        const double r = spherical_distance(evaluate(map, z), z);
        if (!(r < kFixedPointResidual)) {
            throw SolverFailure("fixed_points: residual " + std::to_string(r) + " above tolerance");
        }
    }
    return pts;
}

struct LyapunovEstimate {
    double exponent = 0.0;
    std::size_t skipped = 0;  // steps with derivative below 1e-12
    std::size_t used = 0;
};

// Orbit average of ln f#(z_k), k = 0..n_steps-1. Steps landing on critical
// points (derivative below 1e-12) are excluded from both sum and count.
inline LyapunovEstimate lyapunov_estimate(const RationalMap& map, const SpherePoint& z0, std::size_t n_steps) {
    if (n_steps == 0) throw std::invalid_argument("lyapunov_estimate: n_steps must be positive");
    LyapunovEstimate est;
    const SphericalDerivative deriv(map);
    double sum = 0.0;
    SpherePoint z = z0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double g = deriv(z);
        if (g < 1e-12) {
            ++est.skipped;
        } else {
            sum += std::log(g);
            ++est.used;
        }
        z = evaluate(map, z);
    }
    est.exponent = est.used > 0 ? sum / static_cast<double>(est.used) : 0.0;
    return est;
}

}  // namespace chaoscope
