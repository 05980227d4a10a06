// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/log.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace procalign {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& current_sink() {
  static LogSink sink;
  return sink;
}

void emit(std::string_view prefix, std::string_view message) {
  std::string line(prefix);
  line += message;
  std::lock_guard lock(sink_mutex());
  if (current_sink()) {
    current_sink()(line);
  } else {
    std::cerr << line << '\n';
  }
}

}  // namespace

LogSink set_log_sink(LogSink sink) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(current_sink(), std::move(sink));
}

void warn(std::string_view message) { emit("warning: ", message); }
void info(std::string_view message) { emit("", message); }

}  // namespace procalign
