#include <iostream>

#include "discwitness_cli/cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = discwitness::cli::parse_args(argc, argv, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return discwitness::cli::run(*parsed.config, std::cout, std::cerr);
}
