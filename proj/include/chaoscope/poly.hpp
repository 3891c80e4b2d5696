#pragma once

// Binary forms P(a, b) = sum_k p[k] a^k b^(deg-k) over C. Rational maps on the
// sphere are pairs of such forms; roots are points of the sphere (b = 0 gives
// infinity), so every form of degree d has exactly d roots with multiplicity.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "chaoscope/sphere.hpp"

namespace chaoscope::poly {

using Coeffs = std::vector<cplx>;

inline int degree(const Coeffs& p) { return static_cast<int>(p.size()) - 1; }

inline cplx evaluate(const Coeffs& p, cplx a, cplx b) {
    // Homogeneous Horner: after step k the accumulator holds
    // sum_{j>=k} p_j a^(j-k) b^(n-j).
    const int n = degree(p);
    cplx acc = 0.0;
    cplx bpow = 1.0;
    for (int k = n; k >= 0; --k) {
        acc = acc * a + p[static_cast<std::size_t>(k)] * bpow;
        bpow *= b;
    }
    return acc;
}

inline Coeffs multiply(const Coeffs& p, const Coeffs& q) {
    Coeffs r(p.size() + q.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

// (u a + v b)^k
inline Coeffs linear_power(cplx u, cplx v, int k) {
    Coeffs r{cplx(1.0)};
    const Coeffs lin{v, u};  // index = power of a
    for (int i = 0; i < k; ++i) r = multiply(r, lin);
    return r;
}

// P(m11 a + m12 b, m21 a + m22 b)
inline Coeffs substitute_linear(const Coeffs& p, cplx m11, cplx m12, cplx m21, cplx m22) {
    const int n = degree(p);
    Coeffs r(p.size(), cplx(0.0));
    for (int k = 0; k <= n; ++k) {
        if (p[static_cast<std::size_t>(k)] == cplx(0.0)) continue;
        const Coeffs term = multiply(linear_power(m11, m12, k), linear_power(m21, m22, n - k));
        for (std::size_t i = 0; i < term.size(); ++i) r[i] += p[static_cast<std::size_t>(k)] * term[i];
    }
    return r;
}

inline Coeffs partial_a(const Coeffs& p) {
    const int n = degree(p);
    if (n == 0) return {cplx(0.0)};
    Coeffs r(static_cast<std::size_t>(n), cplx(0.0));
    for (int k = 1; k <= n; ++k) r[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * p[static_cast<std::size_t>(k)];
    return r;
}

inline Coeffs partial_b(const Coeffs& p) {
    const int n = degree(p);
    if (n == 0) return {cplx(0.0)};
    Coeffs r(static_cast<std::size_t>(n), cplx(0.0));
    for (int k = 0; k < n; ++k) r[static_cast<std::size_t>(k)] = static_cast<double>(n - k) * p[static_cast<std::size_t>(k)];
    return r;
}

inline double max_abs(const Coeffs& p) {
    double m = 0.0;
    for (const auto& c : p) m = std::max(m, std::abs(c));
    return m;
}

inline double l2_norm(const Coeffs& p) {
    double s = 0.0;
    for (const auto& c : p) s += std::norm(c);
    return std::sqrt(s);
}

// Resultant of two forms of the same formal degree n: the Sylvester
// determinant, which vanishes iff they share a root on the sphere (including
// the case where both leading coefficients vanish, a common root at infinity).
inline cplx resultant(const Coeffs& p, const Coeffs& q) {
    const int n = degree(p);
    const int m = degree(q);
    const int size = n + m;
    if (size == 0) return 1.0;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
    for (int row = 0; row < m; ++row) {
        for (int k = 0; k <= n; ++k) s(row, row + (n - k)) = p[static_cast<std::size_t>(k)];
    }
    for (int row = 0; row < n; ++row) {
        for (int k = 0; k <= m; ++k) s(m + row, row + (m - k)) = q[static_cast<std::size_t>(k)];
    }
    return s.partialPivLu().determinant();
}

namespace detail {

inline cplx horner_z(const Coeffs& p, cplx z) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline cplx horner_dz(const Coeffs& p, cplx z) {
    cplx acc = 0.0;
    for (std::size_t k = p.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * p[k];
    return acc;
}

// A few Newton steps, accepted only if they reduce the residual.
inline cplx polish(const Coeffs& p, cplx z) {
    for (int it = 0; it < 8; ++it) {
        const cplx f = horner_z(p, z);
        const cplx df = horner_dz(p, z);
        if (df == cplx(0.0)) break;
        const cplx next = z - f / df;
        if (!(std::abs(horner_z(p, next)) < std::abs(f))) break;
        z = next;
    }
    return z;
}

}  // namespace detail

// All roots of a binary form, with multiplicity. Leading coefficients below
// rel_tol * max|p| are treated as zero and give roots at infinity.
inline std::vector<SpherePoint> roots(const Coeffs& p, double rel_tol = 1e-14) {
    const int n = degree(p);
    std::vector<SpherePoint> out;
    const double scale = max_abs(p);
    if (n <= 0 || scale == 0.0) return out;

    int top = n;
    while (top > 0 && std::abs(p[static_cast<std::size_t>(top)]) <= rel_tol * scale) {
        out.push_back(SpherePoint::infinity());
        --top;
    }
    int low = 0;
    while (low < top && std::abs(p[static_cast<std::size_t>(low)]) <= rel_tol * scale) {
        out.push_back(SpherePoint::from_complex(0.0));
        ++low;
    }
    const int d = top - low;
    if (d == 0) return out;

    Coeffs q(p.begin() + low, p.begin() + top + 1);
    const cplx lead = q.back();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -q[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);

    Coeffs reversed(q.rbegin(), q.rend());
    for (int i = 0; i < d; ++i) {
        cplx z = solver.eigenvalues()(i);
        if (std::abs(z) <= 1.0) {
            z = detail::polish(q, z);
            out.push_back(SpherePoint::from_complex(z));
        } else {
            // Polish 1/z against the reversed polynomial to stay well scaled.
            const cplx w = detail::polish(reversed, 1.0 / z);
            out.push_back(SpherePoint(1.0, w));
        }
    }
    return out;
}

}  // namespace chaoscope::poly
