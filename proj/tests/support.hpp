#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "chaoscope/chaoscope.hpp"

namespace testing_support {

using chaoscope::cplx;

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

inline cplx gaussian_complex(chaoscope::CounterRng& rng) {
    // Box-Muller on two uniforms; the guard keeps log away from 0.
    const double u1 = std::max(rng.uniform01(), 1e-300);
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return std::polar(r / std::sqrt(2.0), 2.0 * chaoscope::kPi * u2);
}

inline chaoscope::RationalMap random_map(chaoscope::CounterRng& rng, int degree) {
    for (;;) {
        std::vector<cplx> c(static_cast<std::size_t>(degree) + 1), d(c.size());
        for (auto& x : c) x = gaussian_complex(rng);
        for (auto& x : d) x = gaussian_complex(rng);
        try {
            return {c, d};
        } catch (const chaoscope::DegenerateMap&) {
        }
    }
}

inline chaoscope::SpherePoint random_point(chaoscope::CounterRng& rng) {
    return chaoscope::qubit_to_sphere(chaoscope::uniform_qubit(rng));
}

}  // namespace testing_support
