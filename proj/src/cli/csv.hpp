// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_CLI_CSV_HPP
#define CRR_CLI_CSV_HPP

#include <cstdint>
#include <ostream>
#include <string>

#include "config.hpp"

namespace crr::cli {

// Locale-independent rendering: 17 significant digits, '.' decimal point,
// infinities as "inf"/"-inf".
std::string fmt_double(double v);

std::uint64_t fnv1a64(const std::string& s);

// Commented header block carried by every output file: tool version, config
// hash, seed, and the CPI length (the one model parameter with no canonical
// default).
void write_header_block(std::ostream& os, const RunConfig& cfg, const std::string& command);

}  // namespace crr::cli

#endif
