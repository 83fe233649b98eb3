// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_CLI_COMMANDS_HPP
#define CRR_CLI_COMMANDS_HPP

#include "config.hpp"

namespace crr::cli {

// Exit codes: 0 success, 2 config error (raised as ConfigError by the
// caller), 3 infeasible everywhere, 4 solver hit its iteration budget.
int cmd_corner(const RunConfig& cfg);
int cmd_boundary(const RunConfig& cfg);
int cmd_rate_vs_snr(const RunConfig& cfg);
int cmd_power_alloc(const RunConfig& cfg);
int cmd_oracle_check(const RunConfig& cfg);

}  // namespace crr::cli

#endif
