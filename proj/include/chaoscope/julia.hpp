#pragma once

// Stability classification of initial points. Attracting cycles are found by
// following the critical orbits (every attracting cycle captures a critical
// point); a point is CONVERGENT when its orbit settles on one of them and
// NON_CONVERGENT otherwise. For the chaotic Lattes map no attracting cycle
// exists and every point is NON_CONVERGENT.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "chaoscope/rational_map.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

enum class Stability { Convergent, NonConvergent };

struct Classification {
    Stability kind = Stability::NonConvergent;
    int cycle_id = -1;  // index into JuliaClassifier::cycles() when convergent
    int phase = -1;     // cycle point the start shadows at iteration 0, mod period
    std::size_t iterations = 0;  // steps until capture

    bool convergent() const noexcept { return kind == Stability::Convergent; }
};

struct AttractingCycle {
    std::vector<SpherePoint> points;  // in orbit order
    double multiplier = 0.0;          // product of spherical derivatives
};

struct CycleSearchOptions {
    int max_period = 64;
    std::size_t transient = 4096;
    double detect_tol = 1e-9;
};

inline constexpr std::size_t kDefaultMaxIter = 512;
inline constexpr double kDefaultCycleTol = 1e-6;

class JuliaClassifier {
public:
    explicit JuliaClassifier(RationalMap map, CycleSearchOptions opts = {}) : map_(std::move(map)), deriv_(map_) {
        for (const auto& crit : critical_points(map_)) find_cycle_from(crit, opts);
    }

    const RationalMap& map() const noexcept { return map_; }
    const std::vector<AttractingCycle>& cycles() const noexcept { return cycles_; }

    Classification classify(const SpherePoint& z0, std::size_t max_iter = kDefaultMaxIter,
                            double tol = kDefaultCycleTol) const {
        if (cycles_.empty()) return {};
        const double sin_tol = std::sin(0.5 * tol);
        SpherePoint z = z0;
        for (std::size_t k = 0; k <= max_iter; ++k) {
            for (std::size_t id = 0; id < cycles_.size(); ++id) {
                const auto& pts = cycles_[id].points;
                for (std::size_t j = 0; j < pts.size(); ++j) {
                    if (!near(z, pts[j], sin_tol)) continue;
                    if (!stays_on_cycle(z, pts, j, sin_tol)) continue;
                    const std::size_t period = pts.size();
                    const auto ph = static_cast<int>((j + period - k % period) % period);
                    return {Stability::Convergent, static_cast<int>(id), ph, k};
                }
            }
            if (k < max_iter) z = evaluate(map_, z);
        }
        return {};
    }

    // log of the spherical expansion |(f^k)'| accumulated until the orbit first
    // comes within d_R = capture of an attracting cycle; nullopt if it never
    // does within max_iter steps. capture / exp(result) estimates the distance
    // from z0 to the Julia set.
    std::optional<double> capture_log_expansion(const SpherePoint& z0, double capture,
                                                std::size_t max_iter = kDefaultMaxIter) const {
        if (cycles_.empty()) return std::nullopt;
        const double sin_cap = std::sin(0.5 * capture);
        SpherePoint z = z0;
        double log_exp = 0.0;
        for (std::size_t k = 0; k <= max_iter; ++k) {
            for (const auto& cyc : cycles_) {
                for (const auto& q : cyc.points) {
                    if (near(z, q, sin_cap)) return log_exp;
                }
            }
            if (k == max_iter) break;
            log_exp += std::log(std::max(deriv_(z), 1e-300));
            z = evaluate(map_, z);
        }
        return std::nullopt;
    }

private:
    static bool near(const SpherePoint& p, const SpherePoint& q, double sin_tol) noexcept {
        return detail::pair_cosine(p.a(), p.b(), q.a(), q.b()) > 0.0 &&
               detail::pair_sine(p.a(), p.b(), q.a(), q.b()) < sin_tol;
    }

    // One full period of shadowing within tolerance.
    bool stays_on_cycle(SpherePoint z, const std::vector<SpherePoint>& pts, std::size_t j, double sin_tol) const {
        for (std::size_t step = 1; step <= pts.size(); ++step) {
            z = evaluate(map_, z);
            if (!near(z, pts[(j + step) % pts.size()], sin_tol)) return false;
        }
        return true;
    }

    void find_cycle_from(const SpherePoint& start, const CycleSearchOptions& opts) {
        SpherePoint z = start;
        for (std::size_t k = 0; k < opts.transient; ++k) z = evaluate(map_, z);
        std::vector<SpherePoint> orbit{z};
        for (int p = 1; p <= opts.max_period; ++p) {
            orbit.push_back(evaluate(map_, orbit.back()));
            if (spherical_distance(orbit.back(), orbit.front()) >= opts.detect_tol) continue;
            orbit.pop_back();
            double multiplier = 1.0;
            for (const auto& q : orbit) multiplier *= deriv_(q);
            if (!(multiplier < 1.0)) return;  // repelling or indifferent
            for (const auto& known : cycles_) {
                for (const auto& q : known.points) {
                    if (spherical_distance(q, orbit.front()) < 1e-6) return;
                }
            }
            cycles_.push_back({std::move(orbit), multiplier});
            return;
        }
    }

    RationalMap map_;
    SphericalDerivative deriv_;
    std::vector<AttractingCycle> cycles_;
};

inline Classification classify_point(const RationalMap& map, const SpherePoint& z,
                                     std::size_t max_iter = kDefaultMaxIter, double tol = kDefaultCycleTol) {
    if (max_iter < 1) throw std::invalid_argument("classify_point: max_iter must be >= 1");
    return JuliaClassifier(map).classify(z, max_iter, tol);
}

}  // namespace chaoscope
