// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "ddop/cli.hpp"

int main(int argc, char** argv) { return ddop::cli::run_cli(argc, argv, std::cout, std::cerr); }
