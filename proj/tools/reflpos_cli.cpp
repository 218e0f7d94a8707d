#include <reflpos/cli.hpp>

int main(int argc, char** argv) {
  namespace cli = reflpos::cli;
  const cli::ParsedArgs parsed = cli::parse_args(std::vector<std::string>(argv + 1, argv + argc));
  if (!parsed.config) {
    if (parsed.exit_code == cli::kExitPass) {
      std::cout << parsed.message;
      return cli::kExitPass;
    }
    std::cerr << cli::error_json("UsageError", parsed.message).dump() << '\n';
    return parsed.exit_code;
  }
  return cli::run(*parsed.config);
}
