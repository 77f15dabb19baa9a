#include <iostream>

#include "commands.hpp"
#include "n2v/error.hpp"

namespace {

// Stable exit codes; 0 is success.
enum Exit : int { kOk = 0, kIo = 1, kValidation = 2, kData = 3, kDivergence = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Background skip-gram training, few-shot nonce learning and evaluation"};
  app.name("n2v");
  app.require_subcommand(1);
  const auto commands = n2v::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    for (const auto& c : commands) {
      if (c.app->parsed()) c.run();
    }
  } catch (const n2v::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const n2v::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const n2v::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const n2v::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
