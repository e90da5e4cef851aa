// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "selrel/cli.hpp"

int main(int argc, char** argv) {
    return selrel::run_fixture_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
