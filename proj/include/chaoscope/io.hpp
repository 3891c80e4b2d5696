#pragma once

// JSON encodings shared by the command-line tool: complex numbers are
// [re, im] pairs, matrices are row-major lists of rows, coefficient files are
// {"c": [...], "d": [...]} with index k holding the coefficient of z^k.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "chaoscope/ensemble.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/rational_map.hpp"

namespace chaoscope::io {

using nlohmann::json;

// + 0.0 turns -0 into 0 so that output does not depend on the sign of zero.
inline json to_json(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("expected a complex number as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(to_json(z));
    return a;
}

inline std::vector<cplx> complex_vector_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a list of [re, im] pairs");
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(complex_from_json(e));
    return v;
}

inline json to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty list of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    const auto m = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXcd out(n, m);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = complex_vector_from_json(j[static_cast<std::size_t>(r)]);
        if (static_cast<Eigen::Index>(row.size()) != m) throw std::invalid_argument("ragged matrix rows");
        for (Eigen::Index c = 0; c < m; ++c) out(r, c) = row[static_cast<std::size_t>(c)];
    }
    return out;
}

inline json map_to_json(const RationalMap& map) {
    return {{"degree", map.degree()}, {"c", to_json(map.numerator())}, {"d", to_json(map.denominator())}};
}

// Throws std::invalid_argument on malformed content; RationalMap itself
// throws DegenerateMap for non-coprime pairs.
inline RationalMap map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("c") || !j.contains("d")) {
        throw std::invalid_argument("coefficient file needs keys \"c\" and \"d\"");
    }
    return {complex_vector_from_json(j.at("c")), complex_vector_from_json(j.at("d"))};
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoFailure(path, "cannot open for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoFailure(path, "read failed");
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure(path, "cannot open for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) throw IoFailure(path, "write failed");
}

inline json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(origin + ": invalid JSON (" + e.what() + ")");
    }
}

inline RationalMap load_map(const std::string& path) { return map_from_json(parse_json(read_text(path), path)); }

inline json run_stats_json(const RunStats& st) {
    json states = json::array();
    for (const auto& q : st.states) states.push_back(json::array({to_json(q.alpha()), to_json(q.beta())}));
    json j = {{"seed", st.seed},
              {"sizes", st.sizes},
              {"per_iter_rates", st.per_iter_rates},
              {"per_pair_acceptance", st.per_pair_acceptance},
              {"empirical_acceptance", st.empirical_acceptance},
              {"states", std::move(states)}};
    j["extinct_at"] = st.extinct_at ? json(*st.extinct_at) : json(nullptr);
    return j;
}

}  // namespace chaoscope::io
