// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <functional>
#include <string_view>

namespace procalign {

using LogSink = std::function<void(std::string_view)>;

// Warnings go to standard error unless a sink is installed. Returns the
// previous sink so callers can restore it.
LogSink set_log_sink(LogSink sink);
void warn(std::string_view message);
void info(std::string_view message);

}  // namespace procalign
