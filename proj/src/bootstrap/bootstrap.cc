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

#include "leanbridge/bootstrap/bootstrap.h"

#include <array>
#include <map>
#include <set>

#include "leanbridge/common/error.h"
#include "leanbridge/common/parallel.h"
#include "leanbridge/common/text.h"
#include "leanbridge/genclient/template.h"

namespace leanbridge::bootstrap {
namespace {

struct Field {
  const char* key;
  const char* mirror;
  std::string ObtRecord::*member;
};

const std::array<Field, 7> kFields = {{
    {"Name", "name", &ObtRecord::name},
    {"Statement", "statement", &ObtRecord::statement},
    {"Proof", "proof", &ObtRecord::proof},
    {"File_path", "file_path", &ObtRecord::file_path},
    {"Commit", "commit", &ObtRecord::commit},
    {"Generated_informal_statement_and_proof", "generated_informal_statement_and_proof",
     &ObtRecord::generated_informal_statement_and_proof},
    {"Commented_proof", "commented_proof", &ObtRecord::commented_proof},
}};

// Outcome of one record in BootstrapCorpus.
enum class Cause { kEmitted, kInformalMissing, kInformalFailed, kVerification, kBackend };

}  // namespace

Json ToJson(const ObtRecord& r) {
  Json j = Json::object();
  for (const auto& f : kFields) j[f.key] = r.*f.member;
  return j;
}

ObtRecord ObtFromJson(const Json& j) {
  if (!j.is_object() || j.size() != kFields.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "OBT record must be an object with exactly 7 fields");
  }
  const bool mirror = !j.contains(kFields[0].key);
  ObtRecord r;
  for (const auto& f : kFields) {
    const char* key = mirror ? f.mirror : f.key;
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("OBT record field '") + key + "' is missing or not a string");
    }
    r.*f.member = it->get<std::string>();
  }
  return r;
}

std::string_view ModeName(BootstrapMode mode) {
  return mode == BootstrapMode::kHead ? "head" : "interleaved";
}

BootstrapMode ParseMode(std::string_view name) {
  if (name == "head") return BootstrapMode::kHead;
  if (name == "interleaved") return BootstrapMode::kInterleaved;
  throw Error(ErrorCode::kConfigInvalid,
              "bootstrap mode must be 'interleaved' or 'head', got '" + std::string(name) + "'");
}

std::string VerifyReport::Describe() const {
  return ok ? "verified" : corpus::DescribeDivergence(*divergence);
}

VerifyReport VerifyBootstrap(std::string_view original_proof, std::string_view commented_proof) {
  // StripComments lexes strictly, so malformed input throws here.
  const std::string stripped = corpus::StripComments(commented_proof);
  corpus::LexLean(original_proof);
  VerifyReport report;
  report.divergence = corpus::FirstDivergence(original_proof, stripped);
  report.ok = !report.divergence.has_value();
  if (!report.ok) {
    // Lexemes skip comments, so comparing against the commented text finds
    // the same divergence with offsets that point into the model output.
    if (auto located = corpus::FirstDivergence(original_proof, commented_proof)) {
      report.divergence = std::move(located);
    }
  }
  return report;
}

std::string HeadBootstrap(std::string_view proof, std::string_view nl_text) {
  std::string body;
  for (char c : nl_text) {
    if (!body.empty() && ((body.back() == '-' && c == '/') || (body.back() == '/' && c == '-'))) {
      body += ' ';
    }
    body += c;
  }
  return "/- " + body + " -/\n" + std::string(proof);
}

std::string ExtractCommentedCode(std::string_view reply) {
  for (const auto& block : FindFencedBlocks(reply)) {
    const std::string info(Trim(block.info));
    if (info.empty() || info == "lean" || info == "lean4") {
      return std::string(TrimRight(block.content));
    }
  }
  return std::string(TrimRight(reply));
}

BootstrapOutcome BootstrapTheorem(const corpus::TheoremRecord& record, std::string_view nl_text,
                                  genclient::Client* client, const BootstrapOptions& options) {
  BootstrapOutcome out;
  auto head = [&] {
    out.commented_proof = HeadBootstrap(record.proof, nl_text);
    out.mode_used = BootstrapMode::kHead;
    return out;
  };
  if (options.mode == BootstrapMode::kHead) return head();
  if (client == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "interleaved bootstrapping needs a backend");
  }
  if (options.max_attempts < 1) {
    throw Error(ErrorCode::kConfigInvalid, "bootstrap max_attempts must be >= 1");
  }

  genclient::GenerationRequest request;
  request.prompt = genclient::BootstrapTemplate().Render(
      {{"nl", std::string(nl_text)}, {"proof", record.proof}});
  request.max_new_tokens = options.max_new_tokens;
  request.temperature = options.temperature;
  std::optional<Error> last_error;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    request.request_id = "bootstrap:" + record.name + ":" + std::to_string(attempt);
    out.attempts = attempt;
    std::string code;
    try {
      code = ExtractCommentedCode(client->Complete(request).samples.front());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudgetExceeded) throw;
      out.attempt_log.push_back(std::string("backend: ") + e.what());
      last_error = e;
      continue;
    }
    VerifyReport v;
    try {
      v = VerifyBootstrap(record.proof, code);
    } catch (const Error& e) {
      // Model output that does not lex is a failed attempt, not a crash.
      out.attempt_log.push_back(std::string("output does not lex: ") + e.what());
      last_error = Error(ErrorCode::kBootstrapVerificationFailed,
                         record.name + ": output does not lex: " + e.what(), e.offset());
      continue;
    }
    if (v.ok) {
      out.commented_proof = std::move(code);
      out.mode_used = BootstrapMode::kInterleaved;
      return out;
    }
    out.attempt_log.push_back(v.Describe());
    last_error = Error(ErrorCode::kBootstrapVerificationFailed,
                       record.name + ": " + v.Describe(), v.divergence->actual_offset);
  }
  if (!options.fallback_to_head) throw *last_error;
  const int attempts = out.attempts;
  head();
  out.attempts = attempts;
  out.fell_back = true;
  return out;
}

ObtRecord AssembleObtRecord(const corpus::TheoremRecord& theorem,
                            const informalize::InformalizationResult& informal,
                            const std::string& commented_proof) {
  if (informal.theorem_name != theorem.name) {
    throw Error(ErrorCode::kPreconditionViolated,
                "informalization is for '" + informal.theorem_name + "', not '" +
                    theorem.name + "'");
  }
  if (!informal.pass || Trim(informal.nl_statement_and_proof).empty()) {
    throw Error(ErrorCode::kPreconditionViolated,
                "informalization of '" + theorem.name + "' did not pass");
  }
  const VerifyReport v = VerifyBootstrap(theorem.proof, commented_proof);
  if (!v.ok) {
    throw Error(ErrorCode::kPreconditionViolated,
                "commented proof of '" + theorem.name + "' does not verify: " + v.Describe());
  }
  ObtRecord r{theorem.name,      theorem.statement, theorem.proof,
              theorem.file_path, theorem.commit,    informal.nl_statement_and_proof,
              commented_proof};
  for (const auto& f : kFields) {
    if ((r.*f.member).empty()) {
      throw Error(ErrorCode::kPreconditionViolated,
                  std::string("theorem '") + theorem.name + "' has an empty " + f.key);
    }
  }
  return r;
}

Json BootstrapReport::ToJson() const {
  return Json{{"theorems", theorems},
              {"informal_failed", informal_failed},
              {"informal_missing", informal_missing},
              {"verification_failed", verification_failed},
              {"backend_failed", backend_failed},
              {"head_fallbacks", head_fallbacks},
              {"emitted", emitted}};
}

BootstrapDataset BootstrapCorpus(const std::vector<corpus::TheoremRecord>& theorems,
                                 const std::vector<informalize::InformalizationResult>& informal,
                                 genclient::Client* client, const BootstrapOptions& options,
                                 std::size_t parallelism) {
  std::map<std::string, const informalize::InformalizationResult*> by_name;
  for (const auto& r : informal) by_name.emplace(r.theorem_name, &r);

  const std::size_t n = theorems.size();
  std::vector<Cause> causes(n, Cause::kEmitted);
  std::vector<std::optional<ObtRecord>> records(n);
  std::vector<bool> fell_back(n, false);
  ParallelFor(n, std::max<std::size_t>(1, parallelism), [&](std::size_t i) {
    const auto& t = theorems[i];
    const auto it = by_name.find(t.name);
    if (it == by_name.end()) {
      causes[i] = Cause::kInformalMissing;
      return;
    }
    if (!it->second->pass) {
      causes[i] = Cause::kInformalFailed;
      return;
    }
    try {
      const BootstrapOutcome o =
          BootstrapTheorem(t, it->second->nl_statement_and_proof, client, options);
      records[i] = AssembleObtRecord(t, *it->second, o.commented_proof);
      fell_back[i] = o.fell_back;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudgetExceeded) throw;
      causes[i] = e.code() == ErrorCode::kBootstrapVerificationFailed ? Cause::kVerification
                                                                      : Cause::kBackend;
    }
  });

  BootstrapDataset out;
  out.report.theorems = static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (causes[i]) {
      case Cause::kEmitted:
        out.records.push_back(std::move(*records[i]));
        ++out.report.emitted;
        if (fell_back[i]) ++out.report.head_fallbacks;
        break;
      case Cause::kInformalMissing: ++out.report.informal_missing; break;
      case Cause::kInformalFailed: ++out.report.informal_failed; break;
      case Cause::kVerification: ++out.report.verification_failed; break;
      case Cause::kBackend: ++out.report.backend_failed; break;
    }
  }
  return out;
}

void WriteObtDataset(const std::filesystem::path& path, const std::vector<ObtRecord>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(ToJson(r));
  WriteJsonl(path, lines);
}

std::vector<ObtRecord> LoadObtDataset(const std::filesystem::path& path) {
  std::vector<ObtRecord> out;
  const auto lines = ReadJsonl(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    ObtRecord r = ObtFromJson(lines[i]);
    const VerifyReport v = VerifyBootstrap(r.proof, r.commented_proof);
    if (!v.ok) {
      throw Error(ErrorCode::kBootstrapVerificationFailed,
                  path.string() + ":" + std::to_string(i + 1) + ": '" + r.name + "': " +
                      v.Describe());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace leanbridge::bootstrap
