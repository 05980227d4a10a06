// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace procalign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEmptyLexicon = 3;

/// Results go to `out`, diagnostics and warnings to `err`. Only translate
/// reads `in`.
struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// Each command takes its arguments without the program and subcommand names.
int cmd_align(std::span<const std::string> args, Streams io);
int cmd_evaluate(std::span<const std::string> args, Streams io);
int cmd_fit_test(std::span<const std::string> args, Streams io);
int cmd_translate(std::span<const std::string> args, Streams io);
int cmd_synth_check(std::span<const std::string> args, Streams io);

/// Dispatches on args[0] ("align", "evaluate", "fit-test", "translate",
/// "synth-check").
int run(std::span<const std::string> args, Streams io);

}  // namespace procalign::cli
