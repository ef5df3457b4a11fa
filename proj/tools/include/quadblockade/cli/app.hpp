#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quadblockade/cli/output.hpp"

namespace quadblockade::cli {

enum ExitCode : int { kSuccess = 0, kParameterFailure = 1, kNumericFailure = 2 };

/// Fraction of failed points above which `reproduce` and `sweep` exit nonzero.
inline constexpr double kFailureBudget = 0.01;

/// Figure presets: fig2, fig3a, fig3b, fig4.
RunOutput reproduce_preset(const std::string& figure, const Config& config);
const std::vector<std::string>& figure_names();

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quadblockade::cli
