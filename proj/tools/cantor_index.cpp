#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cantor/cli.hpp"

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("CANTOR_INDEX_THREADS")) {
    const int n = std::atoi(threads);
    Eigen::setNbThreads(n > 0 ? n : 1);
  } else {
    Eigen::setNbThreads(1);  // bitwise-deterministic reports by default
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto res = cantor::cli::run(args);
  if (!res.out.empty()) std::cout << res.out;
  if (!res.err.empty()) std::cerr << res.err;
  return res.exit_code;
}
