#pragma once

#include <functional>
#include <vector>

#include "CLI11.hpp"

namespace n2v::cli {

struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
};

// Adds every subcommand to `app`; the returned runners execute the parsed one.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace n2v::cli
