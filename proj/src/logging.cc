// Copyright 2026 The hyperloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyperloc/logging.h"

#include <atomic>
#include <iostream>

namespace hyperloc {
namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::kQuiet)};
}  // namespace

void SetLogLevel(LogLevel level) { g_level = static_cast<int>(level); }

LogLevel GetLogLevel() { return static_cast<LogLevel>(g_level.load()); }

LogLine::LogLine(LogLevel level, std::string_view event)
    : enabled_(LogEnabled(level)) {
  if (enabled_) {
    out_.precision(10);
    out_ << "event=" << event;
  }
}

LogLine::~LogLine() {
  if (enabled_) {
    out_ << '\n';
    std::cerr << out_.str();
  }
}

}  // namespace hyperloc
