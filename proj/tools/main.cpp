#include <atomic>
#include <csignal>
#include <iostream>

#include "cli.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) {
  g_interrupted.store(true);
}

} // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);
  return mpcf::cli::run(argc, argv, std::cout, std::cerr, &g_interrupted);
}
