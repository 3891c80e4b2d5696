#pragma once

// Riemann sphere / Bloch sphere geometry.
//
// A point of the extended plane is stored as a homogeneous pair (a, b) with
// z = a / b, z = infinity iff b = 0. Pairs are kept in canonical form: unit
// Euclidean norm, and the first nonzero component out of (b, a) real positive.
// A qubit alpha|0> + beta|1> corresponds to the pair (alpha, beta).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "chaoscope/errors.hpp"

namespace chaoscope {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNormTol = 1e-12;
// Two sphere points compare equal below this spherical distance.
inline constexpr double kPointEqualityTol = 1e-9;

class QubitState {
public:
    // Amplitudes must already be normalized.
    QubitState(cplx alpha, cplx beta) : alpha_(alpha), beta_(beta) {
        const double n2 = std::norm(alpha) + std::norm(beta);
        if (!(std::abs(n2 - 1.0) <= kNormTol)) {
            throw std::invalid_argument("QubitState: amplitudes not normalized (|a|^2+|b|^2 = " +
                                        std::to_string(n2) + ")");
        }
    }

    // Rescales an arbitrary nonzero pair.
    static QubitState normalized(cplx alpha, cplx beta) {
        const double scale = std::max(std::abs(alpha), std::abs(beta));
        if (scale == 0.0 || !std::isfinite(scale)) {
            throw std::invalid_argument("QubitState: zero or non-finite amplitude pair");
        }
        alpha /= scale;
        beta /= scale;
        const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
        return QubitState(alpha / n, beta / n);
    }

    static QubitState zero() { return {1.0, 0.0}; }
    static QubitState one() { return {0.0, 1.0}; }
    static QubitState plus() { return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }

    cplx alpha() const noexcept { return alpha_; }
    cplx beta() const noexcept { return beta_; }

    // <this|other>
    cplx overlap(const QubitState& other) const noexcept {
        return std::conj(alpha_) * other.alpha_ + std::conj(beta_) * other.beta_;
    }

private:
    cplx alpha_;
    cplx beta_;
};

class SpherePoint {
public:
    SpherePoint(cplx a, cplx b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale == 0.0 || !std::isfinite(scale)) {
            throw std::invalid_argument("SpherePoint: (0, 0) or non-finite homogeneous pair");
        }
        a /= scale;
        b /= scale;
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        a /= n;
        b /= n;
        // Fix the global phase on the first nonzero of (b, a).
        const cplx lead = (b != cplx(0.0)) ? b : a;
        const cplx rot = std::conj(lead) / std::abs(lead);
        a_ = a * rot;
        b_ = b * rot;
        if (b_ != cplx(0.0)) {
            b_ = cplx(b_.real(), 0.0);
        } else {
            a_ = cplx(a_.real(), 0.0);
        }
    }

    static SpherePoint from_complex(cplx z) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return infinity();
        return {z, 1.0};
    }
    static SpherePoint infinity() { return {1.0, 0.0}; }

    cplx a() const noexcept { return a_; }
    cplx b() const noexcept { return b_; }

    bool is_infinity() const noexcept { return b_ == cplx(0.0); }

    // a / b; infinity is returned as (inf, 0).
    cplx value() const noexcept {
        if (is_infinity()) return {std::numeric_limits<double>::infinity(), 0.0};
        return a_ / b_;
    }

    // |z| without forming the quotient (inf for the pole).
    double modulus() const noexcept {
        if (is_infinity()) return std::numeric_limits<double>::infinity();
        return std::abs(a_) / std::abs(b_);
    }

private:
    cplx a_;
    cplx b_;
};

inline SpherePoint qubit_to_sphere(const QubitState& q) { return {q.alpha(), q.beta()}; }

inline QubitState sphere_to_qubit(const SpherePoint& z) { return QubitState::normalized(z.a(), z.b()); }

namespace detail {

// |a0 b1 - a1 b0| and |conj(a0) a1 + conj(b0) b1| for unit pairs: sine and
// cosine of the quantum angle.
inline double pair_sine(cplx a0, cplx b0, cplx a1, cplx b1) noexcept {
    return std::abs(a0 * b1 - a1 * b0);
}
inline double pair_cosine(cplx a0, cplx b0, cplx a1, cplx b1) noexcept {
    return std::abs(std::conj(a0) * a1 + std::conj(b0) * b1);
}

}  // namespace detail

// d_A = arccos |<psi0|psi1>|, evaluated as atan2(sin, cos) for accuracy near 0.
inline double quantum_angle(const QubitState& q0, const QubitState& q1) noexcept {
    const double s = detail::pair_sine(q0.alpha(), q0.beta(), q1.alpha(), q1.beta());
    const double c = detail::pair_cosine(q0.alpha(), q0.beta(), q1.alpha(), q1.beta());
    return std::atan2(s, c);
}

// sqrt(2(1 - F)) with F = |<psi0|psi1>|; equals 2 sin(d_A / 2).
inline double bures_distance(const QubitState& q0, const QubitState& q1) noexcept {
    return 2.0 * std::sin(0.5 * quantum_angle(q0, q1));
}

// sqrt(1 - |<psi0|psi1>|^2) = sin(d_A).
inline double root_infidelity(const QubitState& q0, const QubitState& q1) noexcept {
    const double s = detail::pair_sine(q0.alpha(), q0.beta(), q1.alpha(), q1.beta());
    return std::min(1.0, s);
}

// Great-circle distance on the unit Bloch sphere, 2 d_A, in [0, pi].
inline double spherical_distance(const SpherePoint& z0, const SpherePoint& z1) noexcept {
    const double s = detail::pair_sine(z0.a(), z0.b(), z1.a(), z1.b());
    const double c = detail::pair_cosine(z0.a(), z0.b(), z1.a(), z1.b());
    return 2.0 * std::atan2(s, c);
}

inline bool approx_equal(const SpherePoint& z0, const SpherePoint& z1,
                         double tol = kPointEqualityTol) noexcept {
    return spherical_distance(z0, z1) < tol;
}

// Bloch vector (x, y, z) of the state (a, b): z-axis points at |0>, i.e. at
// the pole z = infinity of the stereographic chart.
inline std::array<double, 3> bloch_vector(const SpherePoint& p) noexcept {
    const cplx ab = std::conj(p.a()) * p.b();
    return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(p.a()) - std::norm(p.b())};
}

inline SpherePoint from_bloch(double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    const double theta = std::acos(std::clamp(z / r, -1.0, 1.0));
    const double phi = std::atan2(y, x);
    return {std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)};
}

class Mobius {
public:
    Mobius(cplx m11, cplx m12, cplx m21, cplx m22) : m_{m11, m12, m21, m22} {
        const double fro = std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
        if (!(fro > 0.0) || !std::isfinite(fro) ||
            std::abs((m11 / fro) * (m22 / fro) - (m12 / fro) * (m21 / fro)) <= 1e-12) {
            throw DegenerateMap("Mobius: singular matrix");
        }
    }

    static Mobius identity() { return {1.0, 0.0, 0.0, 1.0}; }

    // z -> (z + 1) / (z - 1), the self-inverse rotation relating f and the
    // standard Lattes map.
    static Mobius lattes_frame() { return {1.0, 1.0, 1.0, -1.0}; }

    cplx m11() const noexcept { return m_[0]; }
    cplx m12() const noexcept { return m_[1]; }
    cplx m21() const noexcept { return m_[2]; }
    cplx m22() const noexcept { return m_[3]; }

    SpherePoint apply(const SpherePoint& z) const {
        return {m_[0] * z.a() + m_[1] * z.b(), m_[2] * z.a() + m_[3] * z.b()};
    }

    // Adjugate; equal to the inverse up to a scalar, which is all that
    // matters projectively.
    Mobius inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

    cplx determinant() const noexcept { return m_[0] * m_[3] - m_[1] * m_[2]; }

private:
    std::array<cplx, 4> m_;
};

inline SpherePoint mobius_apply(const Mobius& m, const SpherePoint& z) { return m.apply(z); }

// apply(compose(m1, m2), z) == apply(m1, apply(m2, z))
inline Mobius mobius_compose(const Mobius& m1, const Mobius& m2) {
    return {m1.m11() * m2.m11() + m1.m12() * m2.m21(), m1.m11() * m2.m12() + m1.m12() * m2.m22(),
            m1.m21() * m2.m11() + m1.m22() * m2.m21(), m1.m21() * m2.m12() + m1.m22() * m2.m22()};
}

}  // namespace chaoscope
