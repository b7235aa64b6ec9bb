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

// Structured key=value log lines written to stderr.

#ifndef HYPERLOC_LOGGING_H_
#define HYPERLOC_LOGGING_H_

#include <sstream>
#include <string>
#include <string_view>

namespace hyperloc {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

void SetLogLevel(LogLevel level);
LogLevel GetLogLevel();

inline bool LogEnabled(LogLevel level) {
  return static_cast<int>(level) <= static_cast<int>(GetLogLevel());
}

// Usage: LogLine(LogLevel::kInfo, "cg").Kv("iter", 3).Kv("obj", 1.5);
// The line is emitted when the object goes out of scope.
class LogLine {
 public:
  LogLine(LogLevel level, std::string_view event);
  ~LogLine();
  LogLine(const LogLine&) = delete;
  LogLine& operator=(const LogLine&) = delete;

  template <typename T>
  LogLine& Kv(std::string_view key, const T& value) {
    if (enabled_) out_ << ' ' << key << '=' << value;
    return *this;
  }

 private:
  bool enabled_;
  std::ostringstream out_;
};

}  // namespace hyperloc

#endif  // HYPERLOC_LOGGING_H_
