#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace metricpc {

// Exit codes: 0 success, 2 usage or config error, 3 precision-guard
// violation, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metricpc
