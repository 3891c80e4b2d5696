#pragma once

// Deterministic raster output: iteration masks on a rectangle of the plane,
// Julia sets drawn on an orthographically projected Bloch sphere, and the
// Mandelbrot parameter plane. Rows are rendered in parallel, each worker
// writing only its own rows, so the bytes never depend on scheduling.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/julia.hpp"
#include "chaoscope/protocol.hpp"
#include "chaoscope/rational_map.hpp"
#include "chaoscope/sphere.hpp"

namespace chaoscope {

enum class RenderMode { Mask, JuliaSphere, Mandelbrot };
enum class Projection { Plane, OrthographicSphere };

struct Region {
    double re_min = -2.0;
    double re_max = 2.0;
    double im_min = -2.0;
    double im_max = 2.0;
};

struct RenderSpec {
    int width = 512;
    int height = 512;
    Region region{};
    int n_iter = 0;
    RenderMode mode = RenderMode::Mask;
    Projection projection = Projection::Plane;
    std::array<double, 2> view_angles{0.6, 0.5};  // yaw about the z axis, then pitch
    int threads = 0;                              // 0: CHAOSCOPE_THREADS or hardware

    void validate() const {
        if (width < 1 || height < 1) throw std::invalid_argument("RenderSpec: width and height must be >= 1");
        if (n_iter < 0) throw std::invalid_argument("RenderSpec: n_iter must be >= 0");
        if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min)) {
            throw std::invalid_argument("RenderSpec: region must have positive area");
        }
        if (threads < 0) throw std::invalid_argument("RenderSpec: threads must be >= 0");
    }

    // Centre of pixel (col, row); row 0 is the top edge (largest imaginary part).
    cplx pixel_center(int col, int row) const noexcept {
        const double re = region.re_min + (col + 0.5) * (region.re_max - region.re_min) / width;
        const double im = region.im_max - (row + 0.5) * (region.im_max - region.im_min) / height;
        return {re, im};
    }
};

using Rgb = std::array<std::uint8_t, 3>;

class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, Rgb fill = {0, 0, 0}) : width_(width), height_(height) {
        if (width < 1 || height < 1) throw std::invalid_argument("ImageBuffer: width and height must be >= 1");
        pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
        for (std::size_t i = 0; i < pixels_.size(); i += 3) std::copy(fill.begin(), fill.end(), pixels_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    ImageBuffer(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (width < 1 || height < 1) throw std::invalid_argument("ImageBuffer: width and height must be >= 1");
        if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
            throw std::invalid_argument("ImageBuffer: pixel data must hold width*height*3 bytes");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    Rgb at(int col, int row) const {
        const std::size_t o = offset(col, row);
        return {pixels_[o], pixels_[o + 1], pixels_[o + 2]};
    }
    void set(int col, int row, Rgb c) {
        const std::size_t o = offset(col, row);
        pixels_[o] = c[0];
        pixels_[o + 1] = c[1];
        pixels_[o + 2] = c[2];
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    std::size_t offset(int col, int row) const {
        if (col < 0 || col >= width_ || row < 0 || row >= height_) throw std::out_of_range("ImageBuffer: pixel index");
        return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kJuliaBlue{30, 70, 230};
inline constexpr Rgb kBackground{255, 255, 255};

// --- threading ------------------------------------------------------------------

// requested > 0 wins; otherwise hardware concurrency. CHAOSCOPE_THREADS > 0
// caps the result.
inline int worker_count(int requested = 0) {
    int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("CHAOSCOPE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<long>(n, cap);
    }
    return std::max(1, n);
}

// Calls fn(row) for every row; rows are dealt round-robin to workers.
inline void parallel_rows(int height, int threads, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(threads), height);
    if (workers <= 1) {
        for (int r = 0; r < height; ++r) fn(r);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int r = w; r < height; r += workers) fn(r);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// --- masks ------------------------------------------------------------------------

// Black iff |f^n(z)| > 1 (infinity included). The orbit is carried as an
// unnormalized pair rescaled by a power of two, so n = 0 compares |z| with 1
// exactly.
inline bool mask_outside(const RationalMap& map, cplx z, int n_iter) {
    cplx a = z;
    cplx b = 1.0;
    for (int k = 0; k < n_iter; ++k) {
        auto [na, nb] = map.apply_homogeneous(a, b);
        const double m = std::max(std::abs(na), std::abs(nb));
        if (!(m > 0.0) || !std::isfinite(m)) throw DegenerateResult("mask_outside: orbit left floating-point range");
        const int e = std::ilogb(m);
        a = std::ldexp(na.real(), -e) + cplx(0.0, std::ldexp(na.imag(), -e));
        b = std::ldexp(nb.real(), -e) + cplx(0.0, std::ldexp(nb.imag(), -e));
    }
    return std::abs(a) > std::abs(b);
}

inline ImageBuffer render_mask(const RationalMap& map, const RenderSpec& spec) {
    spec.validate();
    if (spec.mode != RenderMode::Mask) throw std::invalid_argument("render_mask: spec.mode must be Mask");
    ImageBuffer img(spec.width, spec.height);
    parallel_rows(spec.height, spec.threads, [&](int row) {
        for (int col = 0; col < spec.width; ++col) {
            img.set(col, row, mask_outside(map, spec.pixel_center(col, row), spec.n_iter) ? kBlack : kWhite);
        }
    });
    return img;
}

// --- Julia sets on the sphere -------------------------------------------------------

// Orthographic camera around the Bloch sphere: toward-viewer axis
// F = (cos p cos y, cos p sin y, sin p), right R = (-sin y, cos y, 0), up F x R.
struct SphereCamera {
    std::array<double, 3> right{}, up{}, forward{};

    explicit SphereCamera(std::array<double, 2> view) {
        const double y = view[0];
        const double p = view[1];
        forward = {std::cos(p) * std::cos(y), std::cos(p) * std::sin(y), std::sin(p)};
        right = {-std::sin(y), std::cos(y), 0.0};
        up = {-std::sin(p) * std::cos(y), -std::sin(p) * std::sin(y), std::cos(p)};
    }

    // Bloch vector seen at screen coordinates (u, v) in the unit disk, plus
    // the depth component toward the viewer; nullopt off the sphere.
    std::optional<std::pair<std::array<double, 3>, double>> unproject(double u, double v) const {
        const double r2 = u * u + v * v;
        if (r2 > 1.0) return std::nullopt;
        const double w = std::sqrt(1.0 - r2);
        std::array<double, 3> x{};
        for (int i = 0; i < 3; ++i) x[i] = u * right[i] + v * up[i] + w * forward[i];
        return std::make_pair(x, w);
    }
};

namespace detail {

inline Rgb shade(Rgb c, double light) {
    Rgb out{};
    for (int i = 0; i < 3; ++i) out[i] = static_cast<std::uint8_t>(std::lround(c[i] * light));
    return out;
}

inline Rgb basin_color(int label) {
    static constexpr std::array<Rgb, 6> palette{{{250, 214, 120}, {236, 140, 110}, {150, 210, 150},
                                                 {205, 170, 225}, {245, 180, 200}, {170, 220, 225}}};
    return palette[static_cast<std::size_t>(label) % palette.size()];
}

}  // namespace detail

inline constexpr double kCaptureRadius = 0.05;

// Each on-sphere pixel is labelled by classify_point: NON_CONVERGENT pixels
// are blue. So is any pixel whose 4-neighbour on the sphere carries a different
// label (a basin boundary crosses the pixel), and any pixel whose distance
// estimate to the Julia set, kCaptureRadius / |(f^k)'| at capture, is below
// a quarter pixel; the latter makes totally disconnected Julia sets visible.
// Remaining pixels get a basin colour per (cycle, cycle point). Light falls
// off toward the limb.
inline ImageBuffer render_julia_sphere(const RationalMap& map, const RenderSpec& spec) {
    spec.validate();
    if (spec.mode != RenderMode::JuliaSphere) throw std::invalid_argument("render_julia_sphere: spec.mode must be JuliaSphere");
    const JuliaClassifier classifier(map);
    const SphereCamera cam(spec.view_angles);
    const int w = spec.width;
    const int h = spec.height;
    const double scale = 0.5 * std::min(w, h) / 1.02;
    // d_R spanned by one pixel at the disk centre is 1 / scale.
    const double log_pixel_ratio = std::log(4.0 * kCaptureRadius * scale);

    constexpr int kOff = -2;
    constexpr int kUnstable = -1;
    std::vector<int> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kOff);
    std::vector<double> depth(label.size(), 0.0);
    const auto max_iter = static_cast<std::size_t>(spec.n_iter > 0 ? spec.n_iter : static_cast<int>(kDefaultMaxIter));

    parallel_rows(h, spec.threads, [&](int row) {
        for (int col = 0; col < w; ++col) {
            const double u = (col + 0.5 - 0.5 * w) / scale;
            const double v = (0.5 * h - row - 0.5) / scale;
            const auto hit = cam.unproject(u, v);
            if (!hit) continue;
            const auto& [x, d] = *hit;
            const std::size_t idx = static_cast<std::size_t>(row) * static_cast<std::size_t>(w) + static_cast<std::size_t>(col);
            depth[idx] = d;
            const SpherePoint z = from_bloch(x[0], x[1], x[2]);
            const auto cls = classifier.classify(z, max_iter);
            label[idx] = cls.convergent() ? cls.cycle_id * 64 + cls.phase : kUnstable;
            if (cls.convergent()) {
                const auto le = classifier.capture_log_expansion(z, kCaptureRadius, max_iter);
                if (!le || *le > log_pixel_ratio) label[idx] = kUnstable;
            }
        }
    });

    ImageBuffer img(w, h, kBackground);
    parallel_rows(h, spec.threads, [&](int row) {
        for (int col = 0; col < w; ++col) {
            const std::size_t idx = static_cast<std::size_t>(row) * static_cast<std::size_t>(w) + static_cast<std::size_t>(col);
            const int l = label[idx];
            if (l == kOff) continue;
            bool boundary = l == kUnstable;
            const std::array<std::pair<int, int>, 4> nbrs{{{col - 1, row}, {col + 1, row}, {col, row - 1}, {col, row + 1}}};
            for (const auto& [c2, r2] : nbrs) {
                if (boundary) break;
                if (c2 < 0 || c2 >= w || r2 < 0 || r2 >= h) continue;
                const int l2 = label[static_cast<std::size_t>(r2) * static_cast<std::size_t>(w) + static_cast<std::size_t>(c2)];
                if (l2 != kOff && l2 != l) boundary = true;
            }
            const double light = 0.55 + 0.45 * depth[idx];
            img.set(col, row, detail::shade(boundary ? kJuliaBlue : detail::basin_color(l), light));
        }
    });
    return img;
}

// --- Mandelbrot set ----------------------------------------------------------------------

inline constexpr double kEscapeRadius = 2.0;

enum class MandelbrotEngine { Direct, Quantum };

// First k in 0..n_iter with |z_k| > 2 for z_0 = 0, z_{k+1} = z_k^2 + c, or -1
// if the orbit stays bounded. Quantum routes each step through the two-qubit
// post-selection circuit for c (the z^2 unitary when c = 0).
inline int escape_time(cplx c, int n_iter, MandelbrotEngine engine) {
    SpherePoint z = SpherePoint::from_complex(0.0);
    if (engine == MandelbrotEngine::Direct) {
        const RationalMap map = RationalMap::quadratic(c);
        for (int k = 0; k <= n_iter; ++k) {
            if (z.modulus() > kEscapeRadius) return k;
            if (k < n_iter) z = evaluate(map, z);
        }
        return -1;
    }
    const NQubitUnitary V =
        c == cplx(0.0) ? build_unitary(RationalMap::quadratic(c)) : mandelbrot_unitary(mandelbrot_params(c));
    for (int k = 0; k <= n_iter; ++k) {
        if (z.modulus() > kEscapeRadius) return k;
        if (k < n_iter) z = qubit_to_sphere(protocol_step_general(V, sphere_to_qubit(z)).out_state);
    }
    return -1;
}

inline Rgb escape_color(int k, int n_iter) {
    if (k < 0) return kBlack;
    const double t = std::sqrt(static_cast<double>(k) / std::max(1, n_iter));
    const auto ch = [t](double a, double b) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * t)); };
    return {ch(20, 255), ch(30, 230), ch(90, 120)};
}

inline ImageBuffer render_mandelbrot(const RenderSpec& spec, MandelbrotEngine engine = MandelbrotEngine::Direct) {
    spec.validate();
    if (spec.mode != RenderMode::Mandelbrot) throw std::invalid_argument("render_mandelbrot: spec.mode must be Mandelbrot");
    ImageBuffer img(spec.width, spec.height);
    parallel_rows(spec.height, spec.threads, [&](int row) {
        for (int col = 0; col < spec.width; ++col) {
            img.set(col, row, escape_color(escape_time(spec.pixel_center(col, row), spec.n_iter, engine), spec.n_iter));
        }
    });
    return img;
}

// --- PPM ---------------------------------------------------------------------------------

inline std::string ppm_bytes(const ImageBuffer& img) {
    std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
    return out;
}

inline void write_ppm(const ImageBuffer& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure(path, "cannot open for writing");
    const std::string bytes = ppm_bytes(img);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoFailure(path, "write failed");
}

// Reads the P6 files written by write_ppm (maxval 255, no comments).
inline ImageBuffer read_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoFailure(path, "cannot open for reading");
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    f >> magic >> w >> h >> maxval;
    if (!f || magic != "P6" || maxval != 255 || w < 1 || h < 1) throw IoFailure(path, "not a binary 8-bit PPM");
    f.get();  // single whitespace byte after maxval
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
    f.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (f.gcount() != static_cast<std::streamsize>(px.size())) throw IoFailure(path, "truncated pixel data");
    return {w, h, std::move(px)};
}

}  // namespace chaoscope
