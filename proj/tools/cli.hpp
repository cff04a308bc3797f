/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rosie::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseFailure = 1;  // N-Triples or query syntax
inline constexpr int kIoFailure = 2;
inline constexpr int kTimedOut = 3;
inline constexpr int kUnsupported = 4;
inline constexpr int kAllFailed = 5;  // bench: no query succeeded
inline constexpr int kUsage = 64;

inline constexpr const char* kSnapshotName = "dataset.rosiedb";

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Milliseconds as printed by bench: integer, one decimal below 1 ms.
std::string format_ms(double ms);

}  // namespace rosie::cli
