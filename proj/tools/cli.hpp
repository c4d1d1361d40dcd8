#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qvlasov::cli {

/// Exit statuses of the command-line tool.
enum Exit : int { success = 0, failure = 1, config_error = 2 };

/// Runs one subcommand. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace qvlasov::cli
