// SPDX-License-Identifier: Apache-2.0

#include "csv.hpp"

#include <charconv>
#include <cmath>

namespace crr::cli {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_header_block(std::ostream& os, const RunConfig& cfg, const std::string& command) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.canonical())));
    os << "# crregion " << command << '\n'
       << "# version: " << kToolVersion << '\n'
       << "# config_hash: " << hash << '\n'
       << "# seed: " << cfg.system.seed << '\n'
       << "# cpi_len: " << cfg.system.cpi_len << '\n';
}

}  // namespace crr::cli
