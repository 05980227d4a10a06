// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <iostream>
#include <string>
#include <vector>

#include "procalign/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv + 1, argv + argc);
  return procalign::cli::run(args, {std::cin, std::cout, std::cerr});
}
