// chaoscope: command-line front end.
//
// Exit codes: 0 ok, 2 usage or invalid parameters, 3 I/O failure,
// 4 degenerate input, 5 verification failure. Errors are reported as a single
// line on stderr: "error[<kind>] <message>".

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chaoscope/chaoscope.hpp"
#include "chaoscope/io.hpp"

namespace {

using namespace chaoscope;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitVerify = 5;

constexpr double kQuarterPi = 0.78539816339744831;
constexpr double kHalfPi = 1.5707963267948966;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

int fail(const char* kind, int code, const std::string& msg) {
    std::cerr << "error[" << kind << "] " << one_line(msg) << "\n";
    return code;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used == 0 || used != item.size() || !std::isfinite(v)) throw UsageError(what + ": cannot parse '" + s + "'");
        out.push_back(v);
    }
    if (out.size() != expected) {
        throw UsageError(what + ": expected " + std::to_string(expected) + " comma-separated numbers");
    }
    return out;
}

// "re", "re,im" or "inf".
SpherePoint parse_point(const std::string& s, const std::string& what) {
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "inf" || t == "infinity") return SpherePoint::infinity();
    const auto n = static_cast<std::size_t>(std::count(s.begin(), s.end(), ',')) + 1;
    const auto v = parse_list(s, n == 1 ? 1 : 2, what);
    return SpherePoint::from_complex({v[0], v.size() > 1 ? v[1] : 0.0});
}

cplx parse_complex(const std::string& s, const std::string& what) {
    const auto n = static_cast<std::size_t>(std::count(s.begin(), s.end(), ',')) + 1;
    const auto v = parse_list(s, n == 1 ? 1 : 2, what);
    return {v[0], v.size() > 1 ? v[1] : 0.0};
}

Region parse_region(const std::string& s) {
    const auto v = parse_list(s, 4, "--region");
    Region r{v[0], v[1], v[2], v[3]};
    if (!(r.re_max > r.re_min) || !(r.im_max > r.im_min)) throw UsageError("--region: needs re_min < re_max and im_min < im_max");
    return r;
}

std::array<double, 2> parse_view(const std::string& s) {
    const auto v = parse_list(s, 2, "--view");
    return {v[0], v[1]};
}

// Map selection shared by several commands: --coeffs wins over --theta/--phi.
struct MapArgs {
    double theta = kQuarterPi;
    double phi = kHalfPi;
    std::string coeffs;

    void add(CLI::App* cmd, double default_theta) {
        theta = default_theta;
        cmd->add_option("--theta", theta, "theta of U_{theta,phi} (radians)");
        cmd->add_option("--phi", phi, "phi of U_{theta,phi} (radians)");
        cmd->add_option("--coeffs", coeffs, "JSON file {c: [[re,im],...], d: [...]}; overrides --theta/--phi");
    }

    RationalMap resolve() const {
        if (!coeffs.empty()) {
            const json j = io::parse_json(io::read_text(coeffs), coeffs);
            try {
                return io::map_from_json(j);
            } catch (const DegenerateMap&) {
                throw;
            } catch (const std::invalid_argument& e) {
                throw UsageError(coeffs + ": " + e.what());
            }
        }
        return phi_family(theta, phi);
    }
};

void write_image(const ImageBuffer& img, const std::string& path) {
    write_ppm(img, path);
    std::cerr << "wrote " << path << "\n";
}

// --- julia -------------------------------------------------------------------------

struct JuliaCmd {
    MapArgs map;
    int width = 512;
    int height = 512;
    int iters = static_cast<int>(kDefaultMaxIter);
    std::string view = "0.6,0.5";
    std::string out;
    int threads = 0;

    void setup(CLI::App* cmd) {
        map.add(cmd, 0.4);
        cmd->add_option("--width", width, "image width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", height, "image height")->check(CLI::PositiveNumber);
        cmd->add_option("--iters", iters, "maximum iterations per point")->check(CLI::PositiveNumber);
        cmd->add_option("--view", view, "view angles yaw,pitch (radians)");
        cmd->add_option("--out", out, "output PPM path")->required();
        cmd->add_option("--threads", threads, "worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    }

    int run() const {
        RenderSpec spec;
        spec.width = width;
        spec.height = height;
        spec.n_iter = iters;
        spec.mode = RenderMode::JuliaSphere;
        spec.projection = Projection::OrthographicSphere;
        spec.view_angles = parse_view(view);
        spec.threads = threads;
        spec.validate();
        const RationalMap f = map.resolve();
        std::cout << io::map_to_json(f).dump() << "\n";
        write_image(render_julia_sphere(f, spec), out);
        return 0;
    }
};

// --- mask ----------------------------------------------------------------------------

struct MaskCmd {
    MapArgs map;
    int iters = 0;
    int width = 512;
    int height = 512;
    std::string region = "-2,2,-2,2";
    std::string out;
    int threads = 0;

    void setup(CLI::App* cmd) {
        cmd->add_option("--iters", iters, "number of map applications n")->check(CLI::NonNegativeNumber);
        map.add(cmd, kQuarterPi);
        cmd->add_option("--width", width, "image width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", height, "image height")->check(CLI::PositiveNumber);
        cmd->add_option("--region", region, "re_min,re_max,im_min,im_max");
        cmd->add_option("--out", out, "output PPM path")->required();
        cmd->add_option("--threads", threads, "worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    }

    int run() const {
        RenderSpec spec;
        spec.width = width;
        spec.height = height;
        spec.n_iter = iters;
        spec.region = parse_region(region);
        spec.mode = RenderMode::Mask;
        spec.threads = threads;
        spec.validate();
        const RationalMap f = map.resolve();
        write_image(render_mask(f, spec), out);
        return 0;
    }
};

// --- build-v -------------------------------------------------------------------------

struct BuildVCmd {
    std::string coeffs;
    std::string out;
    int samples = 100;
    std::uint64_t seed = 1;

    void setup(CLI::App* cmd) {
        cmd->add_option("--coeffs", coeffs, "JSON file {c: [[re,im],...], d: [...]}")->required();
        cmd->add_option("--out", out, "output JSON path for V")->required();
        cmd->add_option("--samples", samples, "random test states for the induced-map check")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "seed for the test states");
    }

    int run() const {
        MapArgs m;
        m.coeffs = coeffs;
        const RationalMap f = m.resolve();
        const auto built = build_unitary_detailed(f);
        const NQubitUnitary& V = built.V;
        CounterRng rng(seed);
        double mismatch = 0.0;
        for (int i = 0; i < samples; ++i) {
            const QubitState q = uniform_qubit(rng);
            const auto step = protocol_step_general(V, q);
            mismatch = std::max(mismatch, spherical_distance(qubit_to_sphere(step.out_state), evaluate(f, qubit_to_sphere(q))));
        }
        io::write_text(out, io::to_json(V.matrix()).dump() + "\n");
        const double residual = V.unitarity_residual();
        std::cout << "qubits " << V.qubits() << "\n";
        std::cout << "unitarity_residual " << fmt(residual) << "\n";
        std::cout << "max_map_mismatch " << fmt(mismatch) << "\n";
        if (!(residual < kUnitarityTol) || !(mismatch < 1e-10)) {
            return fail("verify", kExitVerify, "construction residuals above 1e-10");
        }
        return 0;
    }
};

// --- iterate -------------------------------------------------------------------------

struct IterateCmd {
    MapArgs map;
    std::string z0 = "0";
    int iters = 20;
    bool quantum = false;
    std::string out;

    void setup(CLI::App* cmd) {
        cmd->add_option("--z0", z0, "initial point: re, re,im or inf");
        cmd->add_option("--iters", iters, "number of steps")->check(CLI::NonNegativeNumber);
        map.add(cmd, kQuarterPi);
        cmd->add_flag("--quantum", quantum, "step through the post-selected unitary instead of evaluating the map");
        cmd->add_option("--out", out, "output CSV path (stdout if empty)");
    }

    int run() const {
        const SpherePoint start = parse_point(z0, "--z0");
        const RationalMap f = map.resolve();
        std::optional<NQubitUnitary> V;
        if (quantum) V = build_unitary(f);
        std::string csv = quantum ? "step,z_re,z_im,success_prob\n" : "step,z_re,z_im\n";
        double max_step_dev = 0.0;
        SpherePoint z = start;
        std::optional<double> prob;
        for (int k = 0; k <= iters; ++k) {
            csv += std::to_string(k) + ",";
            if (z.is_infinity()) {
                csv += "INF,INF";
            } else {
                const cplx v = z.value();
                csv += fmt(v.real()) + "," + fmt(v.imag());
            }
            if (quantum) csv += "," + (prob ? fmt(*prob) : std::string());
            csv += "\n";
            if (k == iters) break;
            if (V) {
                const auto step = protocol_step_general(*V, sphere_to_qubit(z));
                const SpherePoint next = qubit_to_sphere(step.out_state);
                max_step_dev = std::max(max_step_dev, spherical_distance(next, evaluate(f, z)));
                prob = step.success_prob;
                z = next;
            } else {
                z = evaluate(f, z);
            }
        }
        if (out.empty()) {
            std::cout << csv;
        } else {
            io::write_text(out, csv);
            std::cerr << "wrote " << out << "\n";
        }
        if (quantum) {
            std::cerr << "max_step_deviation " << fmt(max_step_dev) << "\n";
            if (!(max_step_dev < 1e-9)) return fail("verify", kExitVerify, "quantum step deviates from the map by more than 1e-9");
        }
        return 0;
    }
};

// --- verify-lattes ---------------------------------------------------------------------

struct VerifyLattesCmd {
    int samples = 100;
    int rho_samples = 10000;
    int max_n = 5;
    int trunc = 40;
    std::uint64_t seed = 7;

    void setup(CLI::App* cmd) {
        cmd->add_option("--samples", samples, "random torus points for the conjugacy check")->check(CLI::PositiveNumber);
        cmd->add_option("--rho-samples", rho_samples, "random torus points for the conformal factor")->check(CLI::PositiveNumber);
        cmd->add_option("--max-n", max_n, "largest iterate checked")->check(CLI::Range(1, 30));
        cmd->add_option("--trunc", trunc, "lattice truncation radius K")->check(CLI::Range(10, 2000));
        cmd->add_option("--seed", seed, "sampling seed");
    }

    int run() const {
        WeierstrassConfig cfg;
        cfg.truncation_radius = trunc;
        const Weierstrass wp(cfg);
        bool ok = true;
        auto line = [&](const std::string& name, double value, double tol, bool pass) {
            std::cout << name << " " << fmt(value) << " tol " << fmt(tol) << " " << (pass ? "ok" : "FAIL") << "\n";
            ok = ok && pass;
        };
        line("sqrt_g2", wp.sqrt_g2(), 1e-3, std::abs(wp.sqrt_g2() - 13.7504) <= 1e-3);
        line("g3_residual", std::abs(wp.g3()), 1e-6, std::abs(wp.g3()) < 1e-6);

        CounterRng rng(substream_key(seed, 0));
        double ode = 0.0;
        for (int i = 0; i < samples; ++i) {
            const TorusPoint t(cplx(rng.uniform01(), rng.uniform01()));
            if (t.lattice_distance() < 0.05) continue;
            ode = std::max(ode, lattes_ode_residual(wp, t.value()));
        }
        line("ode_residual", ode, 1e-6, ode < 1e-6);

        CounterRng crng(substream_key(seed, 1));
        for (int n = 1; n <= max_n; ++n) {
            double worst = 0.0;
            int used = 0;
            while (used < samples) {
                const TorusPoint t(cplx(crng.uniform01(), crng.uniform01()));
                try {
                    worst = std::max(worst, conjugacy_residual(wp, t, static_cast<std::size_t>(n)));
                    ++used;
                } catch (const PoleEncountered&) {
                }
            }
            const double tol = n == 1 ? 1e-6 : 1e-4 * std::ldexp(1.0, n - 1);
            line("conjugacy_residual n=" + std::to_string(n), worst, tol, worst < tol);
        }

        CounterRng rrng(substream_key(seed, 2));
        double max_rho = 0.0;
        for (int i = 0; i < rho_samples; ++i) {
            const TorusPoint t(cplx(rrng.uniform01(), rrng.uniform01()));
            if (t.lattice_distance() < kPoleGuard) continue;
            max_rho = std::max(max_rho, wp.rho(t.value()));
        }
        line("max_rho", max_rho, 16.0, max_rho < 16.0);
        if (!ok) return fail("verify", kExitVerify, "Lattes checks outside tolerance");
        return 0;
    }
};

// --- ensemble ------------------------------------------------------------------------------

struct EnsembleCmd {
    std::string alpha;
    std::string beta;
    std::string z0;
    std::uint64_t N = 1000000;
    int iters = 3;
    std::uint64_t seed = 42;
    std::string scheme = "full";
    std::string coeffs;
    std::optional<double> theta;
    std::optional<double> phi;
    std::string out;
    std::string format = "csv";

    void setup(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "amplitude of |0>: re or re,im");
        cmd->add_option("--beta", beta, "amplitude of |1>: re or re,im");
        cmd->add_option("--z0", z0, "initial state as sphere point alpha/beta (re, re,im or inf)");
        cmd->add_option("--N", N, "initial ensemble size")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
        cmd->add_option("--iters", iters, "iterations")->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", seed, "64-bit seed");
        cmd->add_option("--scheme", scheme, "full, simplified or general")
            ->check(CLI::IsMember({"full", "simplified", "general"}));
        cmd->add_option("--coeffs", coeffs, "map for the general scheme (JSON coefficient file)");
        cmd->add_option("--theta", theta, "apply U_{theta,phi} after each S step (full/simplified)");
        cmd->add_option("--phi", phi, "phi of the post-unitary (default pi/2 when --theta is given)");
        cmd->add_option("--out", out, "output path for RunStats (stdout if empty)");
        cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    QubitState initial() const {
        if (!z0.empty()) {
            if (!alpha.empty() || !beta.empty()) throw UsageError("use either --z0 or --alpha/--beta");
            return sphere_to_qubit(parse_point(z0, "--z0"));
        }
        if (alpha.empty() && beta.empty()) return QubitState::plus();
        const cplx a = alpha.empty() ? cplx(0.0) : parse_complex(alpha, "--alpha");
        const cplx b = beta.empty() ? cplx(0.0) : parse_complex(beta, "--beta");
        const double n2 = std::norm(a) + std::norm(b);
        if (!(std::abs(n2 - 1.0) <= 1e-9)) throw UsageError("--alpha/--beta must satisfy |alpha|^2 + |beta|^2 = 1");
        return QubitState::normalized(a, b);
    }

    int run() const {
        EnsembleRunConfig cfg;
        cfg.initial_state = initial();
        cfg.N = N;
        cfg.n_iters = static_cast<std::size_t>(iters);
        cfg.seed = seed;
        if (scheme == "general") {
            if (coeffs.empty()) throw UsageError("--scheme general needs --coeffs");
            MapArgs m;
            m.coeffs = coeffs;
            cfg.scheme = EnsembleScheme::general(m.resolve());
        } else {
            if (!coeffs.empty()) throw UsageError("--coeffs only applies to --scheme general");
            cfg.scheme = scheme == "full" ? EnsembleScheme::full() : EnsembleScheme::simplified();
            if (theta) cfg.post_unitary = u_theta_phi(*theta, phi.value_or(kHalfPi));
        }
        if (phi && !theta) throw UsageError("--phi needs --theta");
        cfg.validate();

        const RunStats st = simulate_ensemble(cfg);
        const std::string body = format == "json" ? io::run_stats_json(st).dump(2) + "\n" : run_stats_csv(st);
        if (out.empty()) {
            std::cout << body;
        } else {
            io::write_text(out, body);
            std::cerr << "wrote " << out << "\n";
        }

        const double ratio = static_cast<double>(st.sizes.back()) / static_cast<double>(N);
        const auto mom = size_moments(N, st.per_pair_acceptance, cfg.scheme.group_size());
        std::cerr << "final_ratio " << fmt(ratio) << "\n";
        std::cerr << "expected_ratio " << fmt(mom.mean / static_cast<double>(N)) << " sd " << fmt(mom.sd / static_cast<double>(N)) << "\n";
        const double d_plus = quantum_angle(cfg.initial_state, QubitState::plus());
        if (d_plus < 0.1) {
            const double bound = std::pow(4.0, -static_cast<double>(iters));
            std::cerr << "near |+> (d_A " << fmt(d_plus) << "): bound 4^-n " << fmt(bound) << ", ratio/bound "
                      << fmt(ratio / bound) << "\n";
        }
        return 0;
    }
};

// --- mandelbrot ---------------------------------------------------------------------------

struct MandelbrotCmd {
    int width = 512;
    int height = 512;
    int iters = 100;
    std::string region = "-2.2,0.8,-1.5,1.5";
    bool quantum = false;
    std::string out;
    int threads = 0;

    void setup(CLI::App* cmd) {
        cmd->add_option("--width", width, "image width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", height, "image height")->check(CLI::PositiveNumber);
        cmd->add_option("--iters", iters, "iterations per parameter")->check(CLI::NonNegativeNumber);
        cmd->add_option("--region", region, "re_min,re_max,im_min,im_max of the c plane");
        cmd->add_flag("--quantum", quantum, "iterate with the two-qubit post-selection circuit");
        cmd->add_option("--out", out, "output PPM path")->required();
        cmd->add_option("--threads", threads, "worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    }

    int run() const {
        RenderSpec spec;
        spec.width = width;
        spec.height = height;
        spec.n_iter = iters;
        spec.region = parse_region(region);
        spec.mode = RenderMode::Mandelbrot;
        spec.threads = threads;
        spec.validate();
        write_image(render_mandelbrot(spec, quantum ? MandelbrotEngine::Quantum : MandelbrotEngine::Direct), out);
        return 0;
    }
};

// --- config files ----------------------------------------------------------------------------

// Turns {"width": 64, "quantum": true, "view": [0.1, 0.2]} into
// --width 64 --quantum --view 0.1,0.2.
std::vector<std::string> config_flags(const json& cfg, const std::string& path) {
    if (!cfg.is_object()) throw UsageError(path + ": config must be a JSON object");
    std::vector<std::string> args;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "config") continue;
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_number_integer() || value.is_number_unsigned()) {
            args.push_back(flag);
            args.push_back(value.dump());
        } else if (value.is_number()) {
            args.push_back(flag);
            args.push_back(fmt(value.get<double>()));
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& e : value) {
                if (!e.is_number()) throw UsageError(path + ": list values must be numbers (key " + key + ")");
                joined += (joined.empty() ? "" : ",") + fmt(e.get<double>());
            }
            args.push_back(flag);
            args.push_back(joined);
        } else {
            throw UsageError(path + ": unsupported value for key " + key);
        }
    }
    return args;
}

// Config flags go right after the subcommand name so that explicit flags,
// parsed later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& argv) {
    std::optional<std::string> path;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == "--config") {
            if (i + 1 >= argv.size()) throw UsageError("--config needs a path");
            path = argv[i + 1];
        } else if (argv[i].rfind("--config=", 0) == 0) {
            path = argv[i].substr(9);
        }
    }
    if (!path) return argv;
    const auto flags = config_flags(io::parse_json(io::read_text(*path), *path), *path);
    std::size_t pos = 1;
    while (pos < argv.size() && !argv[pos].empty() && argv[pos][0] == '-') ++pos;
    if (pos >= argv.size()) throw UsageError("--config must follow a subcommand");
    std::vector<std::string> out(argv.begin(), argv.begin() + static_cast<std::ptrdiff_t>(pos + 1));
    out.insert(out.end(), flags.begin(), flags.end());
    out.insert(out.end(), argv.begin() + static_cast<std::ptrdiff_t>(pos + 1), argv.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Post-selected qubit dynamics: rational maps, Julia sets, Lattes chaos and ensemble costs"};
    app.name("chaoscope");
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    JuliaCmd julia;
    MaskCmd mask;
    BuildVCmd build_v;
    IterateCmd iterate_cmd;
    VerifyLattesCmd verify;
    EnsembleCmd ensemble;
    MandelbrotCmd mandelbrot;
    std::string config_path;

    struct Entry {
        CLI::App* cmd;
        std::function<int()> run;
    };
    std::vector<Entry> entries;
    auto add = [&](const char* name, const char* help, auto& c) {
        CLI::App* sub = app.add_subcommand(name, help);
        c.setup(sub);
        sub->add_option("--config", config_path, "JSON file of flag values; explicit flags override it");
        entries.push_back({sub, [&c] { return c.run(); }});
    };
    add("julia", "render the Julia set of a map on the Bloch sphere", julia);
    add("mask", "render the |f^n(z)| > 1 mask on a rectangle", mask);
    add("build-v", "build the post-selection unitary for a rational map", build_v);
    add("iterate", "iterate a map from one point and write the orbit", iterate_cmd);
    add("verify-lattes", "check the Weierstrass constants and the Lattes conjugacy", verify);
    add("ensemble", "simulate ensemble shrinkage under iterated post-selection", ensemble);
    add("mandelbrot", "render the Mandelbrot set of z^2 + c", mandelbrot);

    try {
        args = expand_config(args);
    } catch (const IoFailure& e) {
        return fail("io", kExitIo, e.what());
    } catch (const std::invalid_argument& e) {
        return fail("usage", kExitUsage, e.what());
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", kExitUsage, e.what());
    }

    try {
        for (const auto& e : entries) {
            if (e.cmd->parsed()) return e.run();
        }
        return fail("usage", kExitUsage, "no subcommand given");
    } catch (const IoFailure& e) {
        return fail("io", kExitIo, e.what());
    } catch (const DegenerateMap& e) {
        return fail("degenerate", kExitDegenerate, e.what());
    } catch (const DegenerateResult& e) {
        return fail("degenerate", kExitDegenerate, e.what());
    } catch (const ZeroBranch& e) {
        return fail("degenerate", kExitDegenerate, e.what());
    } catch (const ZeroParameter& e) {
        return fail("degenerate", kExitDegenerate, e.what());
    } catch (const ToleranceNotMet& e) {
        return fail("usage", kExitUsage, e.what());
    } catch (const std::invalid_argument& e) {
        return fail("usage", kExitUsage, e.what());
    } catch (const std::exception& e) {
        return fail("internal", 1, e.what());
    }
}
