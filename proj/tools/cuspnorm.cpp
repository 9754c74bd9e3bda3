#include <cstdio>
#include <iostream>

#include "cuspnorm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  const auto res = cuspnorm::cli::run(args);
  std::cout << res.output << std::flush;
  std::cerr << res.log;
  if (res.exit_code == 0 && !res.command.empty()) {
    std::fprintf(stderr, "%s: %.1f ms\n", res.command.c_str(), res.timing_ms);
  }
  return res.exit_code;
}
