// Copyright 2026 The Leanbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEANBRIDGE_COMMON_JSONL_H_
#define LEANBRIDGE_COMMON_JSONL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace leanbridge {

using Json = nlohmann::json;

// Serializes one record as a single line without the trailing newline.
// Invalid UTF-8 in model output is replaced rather than rejected.
std::string DumpLine(const Json& value);

std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temp file and rename so readers never observe a
// half-written artifact.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);

// Blank lines are skipped; any malformed line is an error naming the line.
std::vector<Json> ReadJsonl(const std::filesystem::path& path);
std::vector<Json> ParseJsonl(const std::string& text, const std::string& origin);

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<Json>& records);

// Appends one line and flushes. Used by checkpoints.
void AppendJsonlLine(const std::filesystem::path& path, const Json& record);

}  // namespace leanbridge

#endif  // LEANBRIDGE_COMMON_JSONL_H_
