#pragma once
#include <string>
#include <vector>

namespace sunfact {

// Full CLI: subcommands factorize, meanfield, spectrum, entangle, project,
// reproduce. Returns the process exit code (0 ok, 2 config, 3 cap, 4 internal).
int cli_run(const std::vector<std::string>& args, std::string* out = nullptr,
            std::string* err = nullptr);

}  // namespace sunfact
