// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

#include "cotun/cli.hpp"

int main(int argc, char** argv) { return cotun::cli::run(argc, argv); }
