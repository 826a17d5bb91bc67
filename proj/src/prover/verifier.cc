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

#include "leanbridge/prover/verifier.h"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "leanbridge/common/error.h"
#include "leanbridge/corpus/lexer.h"

extern char** environ;

namespace leanbridge::prover {
namespace {

std::atomic<std::uint64_t> g_scratch_counter{0};

// Removes the scratch files on every exit path.
struct ScratchFiles {
  std::filesystem::path source;
  std::filesystem::path output;
  ~ScratchFiles() {
    std::error_code ec;
    std::filesystem::remove(source, ec);
    std::filesystem::remove(output, ec);
  }
};

}  // namespace

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kVerified: return "verified";
    case Verdict::kRejected: return "rejected";
    case Verdict::kError: return "error";
  }
  return "error";
}

Verdict ParseVerdict(std::string_view name) {
  if (name == "verified") return Verdict::kVerified;
  if (name == "rejected") return Verdict::kRejected;
  if (name == "error") return Verdict::kError;
  throw Error(ErrorCode::kInvalidArgument, "unknown verdict '" + std::string(name) + "'");
}

MockVerifier::MockVerifier(std::multimap<std::string, std::string> answer_key)
    : key_(std::move(answer_key)) {}

MockVerifier MockVerifier::FromFile(const std::filesystem::path& path) {
  std::multimap<std::string, std::string> key;
  for (const auto& j : ReadJsonl(path)) {
    try {
      key.emplace(j.at("name").get<std::string>(), j.at("proof").get<std::string>());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ": malformed answer key entry: " + e.what());
    }
  }
  return MockVerifier(std::move(key));
}

VerifyResult MockVerifier::Verify(const Problem& problem, const std::string& proof) {
  std::string stripped;
  try {
    stripped = corpus::StripComments(proof);
  } catch (const Error& e) {
    return {Verdict::kRejected, std::string("does not lex: ") + e.what()};
  }
  const auto [begin, end] = key_.equal_range(problem.name);
  if (begin == end) return {Verdict::kRejected, "no answer key for '" + problem.name + "'"};
  std::string closest;
  for (auto it = begin; it != end; ++it) {
    const auto d = corpus::FirstDivergence(it->second, stripped);
    if (!d) return {Verdict::kVerified, ""};
    if (closest.empty()) closest = corpus::DescribeDivergence(*d);
  }
  return {Verdict::kRejected, closest};
}

ExternalVerifier::ExternalVerifier(std::vector<std::string> command, double timeout_seconds,
                                   std::filesystem::path scratch_dir)
    : command_(std::move(command)),
      timeout_seconds_(timeout_seconds),
      scratch_dir_(std::move(scratch_dir)) {
  if (command_.empty() || command_.front().empty()) {
    throw Error(ErrorCode::kConfigInvalid, "verifier command is empty");
  }
  if (!(timeout_seconds_ > 0)) {
    throw Error(ErrorCode::kConfigInvalid, "verifier timeout must be positive");
  }
}

std::string ExternalVerifier::name() const { return "external:" + command_.front(); }

VerifyResult ExternalVerifier::Verify(const Problem& problem, const std::string& proof) {
  const std::string stem = "leanbridge_" + std::to_string(::getpid()) + "_" +
                           std::to_string(g_scratch_counter++);
  ScratchFiles files{scratch_dir_ / (stem + ".lean"), scratch_dir_ / (stem + ".out")};
  std::string source = problem.imports;
  if (!source.empty() && source.back() != '\n') source += '\n';
  if (!source.empty()) source += '\n';
  source += proof + "\n";
  WriteFileAtomic(files.source, source);

  std::vector<std::string> args = command_;
  args.push_back(files.source.string());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, files.output.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0600);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw Error(ErrorCode::kVerifierCrashed,
                "cannot start verifier '" + command_.front() + "': " + std::strerror(rc));
  }

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds_);
  int status = 0;
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) {
      throw Error(ErrorCode::kVerifierCrashed, std::string("waitpid: ") + std::strerror(errno));
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      throw Error(ErrorCode::kVerifierTimeout,
                  "verifier exceeded " + std::to_string(timeout_seconds_) + " s on '" +
                      problem.name + "'");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  // Reap anything the checker left running in its group.
  ::kill(-pid, SIGKILL);

  std::string output;
  try {
    output = ReadFile(files.output);
  } catch (const Error&) {
    // no output file means no diagnostic
  }
  if (output.size() > kMaxDiagnosticBytes) output.resize(kMaxDiagnosticBytes);
  if (WIFSIGNALED(status)) {
    throw Error(ErrorCode::kVerifierCrashed,
                "verifier killed by signal " + std::to_string(WTERMSIG(status)) + ": " + output);
  }
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code == 0) return {Verdict::kVerified, output};
  return {Verdict::kRejected, "exit status " + std::to_string(code) + ": " + output};
}

}  // namespace leanbridge::prover
