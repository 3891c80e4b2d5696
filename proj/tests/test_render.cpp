#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "chaoscope/render.hpp"
#include "support.hpp"

using namespace chaoscope;
using testing_support::sha256_hex;

namespace {

namespace fs = std::filesystem;

RenderSpec mask_spec(int size, int n) {
    RenderSpec s;
    s.width = s.height = size;
    s.n_iter = n;
    s.mode = RenderMode::Mask;
    return s;
}

RenderSpec sphere_spec(int size) {
    RenderSpec s;
    s.width = s.height = size;
    s.mode = RenderMode::JuliaSphere;
    s.projection = Projection::OrthographicSphere;
    return s;
}

RenderSpec mandel_spec(int size, int n) {
    RenderSpec s;
    s.width = s.height = size;
    s.n_iter = n;
    s.mode = RenderMode::Mandelbrot;
    s.region = {-2.2, 0.8, -1.5, 1.5};
    return s;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("chaoscope_" + name); }

TEST(Ppm, OnePixelWhite) {
    ImageBuffer img(1, 1, kWhite);
    const std::string want = std::string("P6\n1 1\n255\n") + "\xFF\xFF\xFF";
    EXPECT_EQ(ppm_bytes(img), want);
    EXPECT_EQ(ppm_bytes(img).size(), 14u);  // 11 header bytes + one RGB triple
    const auto path = temp_file("one.ppm");
    write_ppm(img, path.string());
    std::ifstream f(path, std::ios::binary);
    const std::string got((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    EXPECT_EQ(got, want);
    fs::remove(path);
}

TEST(Ppm, RoundTrip) {
    ImageBuffer img(5, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 5; ++c) img.set(c, r, {std::uint8_t(c * 40), std::uint8_t(r * 90), std::uint8_t(c + r + 10)});
    const auto path = temp_file("rt.ppm");
    write_ppm(img, path.string());
    EXPECT_EQ(read_ppm(path.string()), img);
    fs::remove(path);
}

TEST(Ppm, Errors) {
    EXPECT_THROW(write_ppm(ImageBuffer(1, 1), "/nonexistent-dir/x.ppm"), IoFailure);
    EXPECT_THROW(read_ppm("/nonexistent-dir/x.ppm"), IoFailure);
    const auto path = temp_file("bad.ppm");
    std::ofstream(path) << "P6\n4 4\n255\nabc";
    EXPECT_THROW(read_ppm(path.string()), IoFailure);
    fs::remove(path);
    try {
        write_ppm(ImageBuffer(1, 1), "/nonexistent-dir/x.ppm");
    } catch (const IoFailure& e) {
        EXPECT_EQ(e.path(), "/nonexistent-dir/x.ppm");
    }
}

TEST(ImageBuffer, Validation) {
    EXPECT_THROW(ImageBuffer(0, 3), std::invalid_argument);
    EXPECT_EQ(ImageBuffer(7, 3).pixels().size(), 63u);
    RenderSpec s = mask_spec(4, 0);
    s.n_iter = -1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = mask_spec(4, 0);
    s.region = {1.0, 1.0, -1.0, 1.0};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_THROW(render_mandelbrot(mask_spec(4, 1)), std::invalid_argument);
}

TEST(Mask, ZeroIterationsIsDiskComplement) {
    const RenderSpec s = mask_spec(256, 0);
    const ImageBuffer img = render_mask(lattes_f(), s);
    for (int r = 0; r < s.height; ++r) {
        for (int c = 0; c < s.width; ++c) {
            const cplx z = s.pixel_center(c, r);
            const bool outside = z.real() * z.real() + z.imag() * z.imag() > 1.0;
            ASSERT_EQ(img.at(c, r), outside ? kBlack : kWhite) << c << "," << r;
        }
    }
}

TEST(Mask, SquareKeepsUnitDisk) {
    const RationalMap sq = RationalMap::quadratic(0.0);
    const ImageBuffer base = render_mask(sq, mask_spec(128, 0));
    for (int n : {1, 3, 6}) EXPECT_EQ(render_mask(sq, mask_spec(128, n)), base) << n;
}

TEST(Mask, ScalarOracle) {
    // Plain complex iteration on points comfortably away from |w| = 1.
    CounterRng rng(80);
    const RationalMap f = lattes_f();
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const cplx z(4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0);
        for (int n = 0; n <= 3; ++n) {
            cplx w = z;
            for (int k = 0; k < n; ++k) w = (w * w + cplx(0, 1)) / (cplx(0, 1) * w * w + 1.0);
            if (!std::isfinite(std::abs(w)) || std::abs(std::abs(w) - 1.0) < 1e-9) continue;
            EXPECT_EQ(mask_outside(f, z, n), std::abs(w) > 1.0);
            ++checked;
        }
    }
    EXPECT_GT(checked, 7000);
}

TEST(Mask, ScanlineAlternationGrows) {
    const RationalMap f = lattes_f();
    auto flips = [&](int n) {
        const RenderSpec s = mask_spec(1024, n);
        const ImageBuffer img = render_mask(f, s);
        int count = 0;
        for (int c = 1; c < s.width; ++c) count += img.at(c, 300) != img.at(c - 1, 300);
        return count;
    };
    int prev = flips(1);
    for (int n = 3; n <= 9; n += 2) {
        const int cur = flips(n);
        EXPECT_GT(cur, prev) << n;
        prev = cur;
    }
}

TEST(Mask, ConjugatedMapMatchesTransformedMask) {
    // f = M g M with M(w) = (w+1)/(w-1) self-inverse, so |g^n(z)| > 1 iff Re f^n(M z) > 0.
    const Mobius M = Mobius::lattes_frame();
    const RationalMap g = conjugate(lattes_f(), M);
    for (int n : {1, 3, 5}) {
        const RenderSpec s = mask_spec(160, n);
        const ImageBuffer img = render_mask(g, s);
        std::vector<char> oracle(static_cast<std::size_t>(s.width * s.height));
        for (int r = 0; r < s.height; ++r) {
            for (int c = 0; c < s.width; ++c) {
                SpherePoint w = M.apply(SpherePoint::from_complex(s.pixel_center(c, r)));
                for (int k = 0; k < n; ++k) w = evaluate(lattes_f(), w);
                oracle[static_cast<std::size_t>(r * s.width + c)] = !w.is_infinity() && w.value().real() > 0.0;
            }
        }
        int mismatched = 0;
        for (int r = 0; r < s.height; ++r) {
            for (int c = 0; c < s.width; ++c) {
                const char black = img.at(c, r) == kBlack;
                if (black == oracle[static_cast<std::size_t>(r * s.width + c)]) continue;
                ++mismatched;
                bool near = false;
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || cc < 0 || rr >= s.height || cc >= s.width) continue;
                        near |= oracle[static_cast<std::size_t>(rr * s.width + cc)] == black;
                    }
                EXPECT_TRUE(near) << "n=" << n << " pixel " << c << "," << r;
            }
        }
        EXPECT_LT(mismatched, s.width * s.height / 200);
    }
}

TEST(Mandelbrot, KnownParameters) {
    for (auto e : {MandelbrotEngine::Direct, MandelbrotEngine::Quantum}) {
        EXPECT_EQ(escape_time(0.0, 50, e), -1);
        EXPECT_EQ(escape_time(-1.0, 50, e), -1);
        EXPECT_EQ(escape_time(1.0, 50, e), 3);  // 0, 1, 2, 5
        EXPECT_EQ(escape_time(3.0, 50, e), 1);
        // Preperiodic onto a repelling cycle; rounding eventually lets it escape.
        EXPECT_EQ(escape_time(cplx(0.0, 1.0), 20, e), -1);
    }
    EXPECT_EQ(escape_color(-1, 30), kBlack);
}

TEST(Mandelbrot, QuantumMatchesDirect) {
    const RenderSpec s = mandel_spec(128, 30);
    const ImageBuffer d = render_mandelbrot(s, MandelbrotEngine::Direct);
    const ImageBuffer q = render_mandelbrot(s, MandelbrotEngine::Quantum);
    EXPECT_EQ(ppm_bytes(d), ppm_bytes(q));
    int interior = 0;
    for (int r = 0; r < s.height; ++r)
        for (int c = 0; c < s.width; ++c) interior += d.at(c, r) == kBlack;
    // Area of the Mandelbrot set is about 1.506 out of 9 for this window.
    EXPECT_NEAR(interior / double(s.width * s.height), 1.506 / 9.0, 0.03);
}

TEST(JuliaSphere, SquareGreatCircle) {
    const RenderSpec s = sphere_spec(200);
    const ImageBuffer img = render_julia_sphere(RationalMap::quadratic(0.0), s);
    const SphereCamera cam(s.view_angles);
    const double scale = 0.5 * s.width / 1.02;
    int blue = 0, blue_far = 0;
    for (int r = 0; r < s.height; ++r) {
        for (int c = 0; c < s.width; ++c) {
            const auto hit = cam.unproject((c + 0.5 - 0.5 * s.width) / scale, (0.5 * s.height - r - 0.5) / scale);
            if (!hit) {
                EXPECT_EQ(img.at(c, r), kBackground);
                continue;
            }
            const Rgb px = img.at(c, r);
            const bool is_blue = px[2] > px[0] + 60 && px[2] > px[1] + 60;
            if (!is_blue) continue;
            ++blue;
            // Blue pixels lie near the equator of the Bloch sphere (|z| = 1).
            if (std::abs(hit->first[2]) > 0.05) ++blue_far;
        }
    }
    EXPECT_GT(blue, 150);
    EXPECT_EQ(blue_far, 0);
}

TEST(JuliaSphere, LattesFullyBlue) {
    const RenderSpec s = sphere_spec(64);
    const ImageBuffer img = render_julia_sphere(lattes_f(), s);
    int on_sphere = 0, blue = 0;
    for (int r = 0; r < s.height; ++r) {
        for (int c = 0; c < s.width; ++c) {
            const Rgb px = img.at(c, r);
            if (px == kBackground) continue;
            ++on_sphere;
            blue += px[2] > px[0] + 60 && px[2] > px[1] + 60;
        }
    }
    EXPECT_GT(on_sphere, 2500);
    EXPECT_EQ(blue, on_sphere);
}

TEST(Determinism, ThreadCountDoesNotMatter) {
    RenderSpec s = sphere_spec(96);
    s.threads = 1;
    const RationalMap g = phi_family(0.4, kPi / 2);
    const ImageBuffer one = render_julia_sphere(g, s);
    s.threads = 4;
    EXPECT_EQ(render_julia_sphere(g, s), one);
    RenderSpec m = mask_spec(96, 4);
    m.threads = 1;
    const ImageBuffer mask1 = render_mask(lattes_f(), m);
    m.threads = 3;
    EXPECT_EQ(render_mask(lattes_f(), m), mask1);
}

// --- golden masters --------------------------------------------------------------------

std::map<std::string, std::string> golden_renders() {
    std::map<std::string, std::string> out;
    for (int n = 1; n <= 11; ++n) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_f_n%02d", n);
        out[name] = ppm_bytes(render_mask(lattes_f(), mask_spec(256, n)));
    }
    out["julia_theta0.4_phipi2"] = ppm_bytes(render_julia_sphere(phi_family(0.4, kPi / 2), sphere_spec(256)));
    out["julia_theta0.5_phi0.5"] = ppm_bytes(render_julia_sphere(phi_family(0.5, 0.5), sphere_spec(256)));
    out["mandelbrot_128_n30"] = ppm_bytes(render_mandelbrot(mandel_spec(128, 30)));
    return out;
}

TEST(Golden, Hashes) {
    const fs::path hash_file = fs::path(CHAOSCOPE_GOLDEN_DIR) / "sha256.txt";
    const auto renders = golden_renders();
    const char* regen = std::getenv("CHAOSCOPE_REGEN_GOLDEN");
    if (regen && std::string(regen) == "1") {
        std::ofstream out(hash_file);
        for (const auto& [name, bytes] : renders) {
            out << sha256_hex(bytes) << "  " << name << ".ppm\n";
            std::ofstream(temp_file(name + ".ppm"), std::ios::binary) << bytes;
        }
        GTEST_SKIP() << "golden hashes regenerated; images written to " << fs::temp_directory_path();
    }
    std::ifstream in(hash_file);
    ASSERT_TRUE(in) << "missing " << hash_file;
    std::map<std::string, std::string> pinned;
    std::string hash, file;
    while (in >> hash >> file) pinned[file.substr(0, file.size() - 4)] = hash;
    ASSERT_EQ(pinned.size(), renders.size());
    for (const auto& [name, bytes] : renders) {
        ASSERT_TRUE(pinned.count(name)) << name;
        EXPECT_EQ(sha256_hex(bytes), pinned[name]) << name;
    }
}

}  // namespace
