#pragma once

// State-vector simulation of the post-selective protocols.
//
// n-qubit states are indexed big-endian: qubit 1 is the most significant bit,
// the kept (unmeasured) qubit is the last one. The general protocol applies V
// to q^{(x)n}, measures qubits 1..n-1 and accepts outcome 0...0, leaving the
// last qubit in proportion to (<0..00|V|phi>, <0..01|V|phi>).

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/rational_map.hpp"
#include "chaoscope/rng.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

struct NQubitState {
    int n = 0;
    std::vector<cplx> amps;  // length 2^n

    double norm2() const noexcept {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }
};

inline constexpr double kUnitarityTol = 1e-10;

class NQubitUnitary {
public:
    NQubitUnitary(int n, Eigen::MatrixXcd entries) : n_(n), m_(std::move(entries)) {
        const Eigen::Index dim = Eigen::Index{1} << n;
        if (n < 1 || m_.rows() != dim || m_.cols() != dim) {
            throw std::invalid_argument("NQubitUnitary: matrix must be 2^n x 2^n");
        }
        const double r = unitarity_residual();
        if (!(r < kUnitarityTol)) {
            throw std::invalid_argument("NQubitUnitary: not unitary (residual " + std::to_string(r) + ")");
        }
    }

    int qubits() const noexcept { return n_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }

    // max |(V^dagger V - I)_ij|
    double unitarity_residual() const {
        const Eigen::MatrixXcd g = m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
        return g.cwiseAbs().maxCoeff();
    }

    NQubitState apply(const NQubitState& s) const {
        if (s.n != n_) throw std::invalid_argument("NQubitUnitary::apply: qubit count mismatch");
        const Eigen::Map<const Eigen::VectorXcd> in(s.amps.data(), static_cast<Eigen::Index>(s.amps.size()));
        NQubitState out{n_, std::vector<cplx>(s.amps.size())};
        Eigen::Map<Eigen::VectorXcd>(out.amps.data(), static_cast<Eigen::Index>(out.amps.size())) = m_ * in;
        return out;
    }

private:
    int n_;
    Eigen::MatrixXcd m_;
};

struct StepResult {
    QubitState out_state;
    double success_prob = 0.0;
    std::map<std::string, double> branch_probs;
};

enum class SScheme { Full, Simplified };

// --- two-photon PBS scheme -------------------------------------------------

// Coincidence component of the PBS output (one photon per output mode),
// alpha^2 |HH> + beta^2 |VV>, unnormalized: its squared norm is the PBS
// acceptance probability |alpha|^4 + |beta|^4.
inline NQubitState pbs_two_photon(const QubitState& q) {
    const cplx a = q.alpha();
    const cplx b = q.beta();
    return {2, {a * a, 0.0, 0.0, b * b}};
}

// Weight of the bunched outcomes (both photons in one mode), 2|alpha beta|^2.
inline double pbs_bunching_weight(const QubitState& q) { return 2.0 * std::norm(q.alpha() * q.beta()); }

// S: alpha|H> + beta|V> -> N (alpha^2|H> + beta^2|V>). Photon 4 is measured in
// the |+/-> basis; FULL keeps both outcomes (Z-correcting on '-'), SIMPLIFIED
// keeps only '+'.
inline StepResult s_step(const QubitState& q, SScheme scheme) {
    const cplx a2 = q.alpha() * q.alpha();
    const cplx b2 = q.beta() * q.beta();
    const double accepted = std::norm(a2) + std::norm(b2);
    StepResult r{QubitState::normalized(a2, b2), 0.0, {}};
    r.branch_probs["reject"] = pbs_bunching_weight(q);
    r.branch_probs["plus"] = 0.5 * accepted;
    r.branch_probs["minus"] = 0.5 * accepted;
    r.success_prob = scheme == SScheme::Full ? accepted : 0.5 * accepted;
    return r;
}

// --- general n-qubit construction ------------------------------------------

// q^{(x)n}: amplitude of bitstring b is alpha^{#zeros(b)} beta^{#ones(b)}.
inline NQubitState product_state(const QubitState& q, int n) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> apow(static_cast<std::size_t>(n) + 1, 1.0), bpow(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) {
        apow[static_cast<std::size_t>(k)] = apow[static_cast<std::size_t>(k) - 1] * q.alpha();
        bpow[static_cast<std::size_t>(k)] = bpow[static_cast<std::size_t>(k) - 1] * q.beta();
    }
    NQubitState s{n, std::vector<cplx>(dim)};
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const int ones = std::popcount(idx);
        s.amps[idx] = apow[static_cast<std::size_t>(n - ones)] * bpow[static_cast<std::size_t>(ones)];
    }
    return s;
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// |phi_k>: sum of the bitstrings with exactly k zeros, so that
// q^{(x)n} = sum_k alpha^k beta^(n-k) |phi_k>.
inline std::vector<cplx> symmetric_vector(int n, int k) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> v(dim, 0.0);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (n - std::popcount(idx) == k) v[idx] = 1.0;
    }
    return v;
}

// |omega> = (|0..010> - |0..001>) / sqrt(2), orthogonal to every |phi_k>.
inline std::vector<cplx> omega_vector(int n) {
    std::vector<cplx> v(std::size_t{1} << n, 0.0);
    v[2] = 1.0 / std::sqrt(2.0);
    v[1] = -1.0 / std::sqrt(2.0);
    return v;
}

struct UnitaryConstruction {
    // Unnormalized first two rows of V as entry vectors:
    // row0[b] = c_k / C(n,k) + x omega[b], row1[b] = d_k / C(n,k) + y omega[b]
    // for b with k zeros.
    std::vector<cplx> row0;
    std::vector<cplx> row1;
    cplx x;  // omega coefficient of row0 (entry convention)
    cplx y;  // omega coefficient of row1, real and >= 0 unless x carries it
    NQubitUnitary V;
};

namespace detail {

// Modified Gram-Schmidt completion over e_0, e_1, ... (two passes per candidate).
inline Eigen::MatrixXcd complete_rows(const std::vector<std::vector<cplx>>& seed_rows, std::size_t dim) {
    std::vector<Eigen::VectorXcd> rows;
    for (const auto& r : seed_rows) rows.push_back(Eigen::Map<const Eigen::VectorXcd>(r.data(), static_cast<Eigen::Index>(dim)));
    for (std::size_t j = 0; j < dim && rows.size() < dim; ++j) {
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
        u(static_cast<Eigen::Index>(j)) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& r : rows) {
                // Row inner product <u, r> = sum u_b conj(r_b).
                const cplx proj = (r.adjoint() * u)(0);
                u -= proj * r;
            }
        }
        const double nu = u.norm();
        if (nu < 1e-8) continue;
        rows.push_back(u / nu);
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return m;
}

}  // namespace detail

// V whose first two rows realize `map` through post-selection. The omega
// coefficients solve orthogonality and equal norms of the two rows:
//   sum_k c_k conj(d_k) / C(n,k) + x conj(y) = 0
//   |x|^2 - |y|^2 = sum_k (|d_k|^2 - |c_k|^2) / C(n,k)
// with y >= 0 real when nonzero, and the smaller of x, y set to 0 when the
// coefficient product vanishes.
inline UnitaryConstruction build_unitary_detailed(const RationalMap& map) {
    const int n = map.degree();
    if (n < 2) throw std::invalid_argument("build_unitary: degree must be >= 2");
    const auto& c = map.numerator();
    const auto& d = map.denominator();

    cplx p = 0.0;
    double delta = 0.0;
    for (int k = 0; k <= n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double w = binomial(n, k);
        p += c[ks] * std::conj(d[ks]) / w;
        delta += (std::norm(d[ks]) - std::norm(c[ks])) / w;
    }
    // v = |y|^2 solves v^2 + delta v - |p|^2 = 0; pick the cancellation-free form.
    const double disc = std::sqrt(delta * delta + 4.0 * std::norm(p));
    const double v = delta > 0.0 ? 2.0 * std::norm(p) / (delta + disc) : 0.5 * (disc - delta);
    cplx x, y;
    if (v > 0.0) {
        y = std::sqrt(v);
        x = -p / y;
    } else {
        y = 0.0;
        x = std::sqrt(std::max(delta, 0.0));
    }

    const std::size_t dim = std::size_t{1} << n;
    const auto omega = omega_vector(n);
    std::vector<cplx> row0(dim), row1(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const int k = n - std::popcount(idx);
        const double w = binomial(n, k);
        row0[idx] = c[static_cast<std::size_t>(k)] / w + x * omega[idx];
        row1[idx] = d[static_cast<std::size_t>(k)] / w + y * omega[idx];
    }
    double n0 = 0.0;
    double n1 = 0.0;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        n0 += std::norm(row0[idx]);
        n1 += std::norm(row1[idx]);
    }
    n0 = std::sqrt(n0);
    n1 = std::sqrt(n1);
    std::vector<cplx> u0(row0), u1(row1);
    for (auto& e : u0) e /= n0;
    for (auto& e : u1) e /= n1;
    NQubitUnitary V(n, detail::complete_rows({u0, u1}, dim));
    return {std::move(row0), std::move(row1), x, y, std::move(V)};
}

inline NQubitUnitary build_unitary(const RationalMap& map) { return build_unitary_detailed(map).V; }

inline StepResult protocol_step_general(const NQubitUnitary& V, const QubitState& q) {
    const NQubitState out = V.apply(product_state(q, V.qubits()));
    const cplx A = out.amps[0];
    const cplx B = out.amps[1];
    const double accepted = std::norm(A) + std::norm(B);
    if (accepted < 1e-300) throw ZeroBranch("protocol_step_general: post-selected branch has zero amplitude");
    StepResult r{QubitState::normalized(A, B), accepted, {}};
    r.branch_probs["accept"] = accepted;
    r.branch_probs["reject"] = std::max(0.0, out.norm2() - accepted);
    return r;
}

// --- Mandelbrot circuit --------------------------------------------------------

struct MandelbrotParams {
    cplx c;
    double r1 = 0.0;
    double r2 = 0.0;
    double phase = 0.0;
};

inline MandelbrotParams mandelbrot_params(cplx c) {
    const double m = std::abs(c);
    if (m == 0.0) throw ZeroParameter("mandelbrot_params: c = 0 (use build_unitary of z^2)");
    const double r2 = m * std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (m * m))));
    return {c, 1.0 / r2, r2, std::arg(c)};
}

namespace detail {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

inline Mat2 proj(int bit) {
    Mat2 p = Mat2::Zero();
    p(bit, bit) = 1.0;
    return p;
}

// Qubit 1 (most significant) controls g on qubit 2.
inline Mat4 ctrl_first(const Mat2& g) { return kron(proj(0), Mat2::Identity()) + kron(proj(1), g); }
// Qubit 2 controls g on qubit 1.
inline Mat4 ctrl_second(const Mat2& g) { return kron(Mat2::Identity(), proj(0)) + kron(g, proj(1)); }

inline Mat2 rotation_gate(double r) {
    Mat2 g;
    g << 1.0, r, r, -1.0;
    return g / std::sqrt(1.0 + r * r);
}

inline Mat2 phase_gate(double phi) {
    Mat2 g = Mat2::Identity();
    g(1, 1) = std::polar(1.0, phi);
    return g;
}

inline bool induces_quadratic(const NQubitUnitary& V, cplx c) {
    const RationalMap target = RationalMap::quadratic(c);
    const std::array<SpherePoint, 7> probes{
        SpherePoint::from_complex(0.0),          SpherePoint::from_complex(1.0),
        SpherePoint::from_complex({0.0, 1.0}),   SpherePoint::from_complex({-1.0, 0.5}),
        SpherePoint::from_complex({2.0, -1.0}),  SpherePoint::from_complex({0.3, 0.2}),
        SpherePoint::infinity()};
    for (const auto& z : probes) {
        const auto step = protocol_step_general(V, sphere_to_qubit(z));
        if (!(spherical_distance(qubit_to_sphere(step.out_state), evaluate(target, z)) < 1e-9)) return false;
    }
    return true;
}

}  // namespace detail

// Two-qubit circuit for z -> z^2 + c. Gate order, qubit 1 on top:
//   CNOT(1->2), H on 1 controlled by 2, R(r1) on 2 controlled by 1,
//   phase(phi) on 1 and phase(-phi) on 2, X on 2, R(r2) on 1 controlled by 2,
//   CNOT(1->2), X on 2;
// then qubit 2 is measured and outcome 0 accepted, qubit 1 is kept. The
// returned matrix is followed by a qubit swap so that, as for build_unitary,
// the measured qubit comes first and the kept qubit last. R(r) is
// (1/sqrt(1+r^2)) [[1, r], [r, -1]].
inline NQubitUnitary mandelbrot_unitary(const MandelbrotParams& params) {
    using namespace detail;
    Mat2 X;
    X << 0.0, 1.0, 1.0, 0.0;
    Mat2 H;
    H << 1.0, 1.0, 1.0, -1.0;
    H /= std::sqrt(2.0);
    Mat4 swap = Mat4::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;

    const std::array<Mat4, 8> gates{
        ctrl_first(X),
        ctrl_second(H),
        ctrl_first(rotation_gate(params.r1)),
        kron(phase_gate(params.phase), phase_gate(-params.phase)),
        kron(Mat2::Identity(), X),
        ctrl_second(rotation_gate(params.r2)),
        ctrl_first(X),
        kron(Mat2::Identity(), X)};
    Mat4 u = Mat4::Identity();
    for (const auto& g : gates) u = g * u;
    NQubitUnitary V(2, swap * u);
    if (!induces_quadratic(V, params.c)) {
        throw GateOrderMismatch("mandelbrot_unitary: circuit does not induce z^2 + c");
    }
    return V;
}

// Sphere-uniform state from two uniforms: cos(theta) uniform, phi uniform.
inline QubitState uniform_qubit(CounterRng& rng) {
    const double cos_theta = 2.0 * rng.uniform01() - 1.0;
    const double phi = 2.0 * kPi * rng.uniform01();
    const double half = 0.5 * std::acos(cos_theta);
    return {std::cos(half), std::polar(std::sin(half), phi)};
}

// Minimum post-selection success probability over sphere-uniform inputs.
inline double min_success_prob(const RationalMap& map, std::size_t n_samples, std::uint64_t seed = 0x5EEDULL) {
    if (n_samples == 0) throw std::invalid_argument("min_success_prob: n_samples must be >= 1");
    const NQubitUnitary V = build_unitary(map);
    CounterRng rng(seed);
    double best = 1.0;
    for (std::size_t i = 0; i < n_samples; ++i) best = std::min(best, protocol_step_general(V, uniform_qubit(rng)).success_prob);
    return best;
}

}  // namespace chaoscope
