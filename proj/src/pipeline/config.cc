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

#include "leanbridge/pipeline/config.h"

#include <cstdlib>
#include <set>

#include "leanbridge/common/error.h"
#include "leanbridge/trainprep/tokenizer.h"

namespace leanbridge::pipeline {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kConfigInvalid, message);
}

// Reads one JSON object and remembers which keys were consumed, so that a
// misspelled key is reported instead of silently ignored.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Invalid("config key '" + Label() + "' must be an object");
  }

  template <typename T>
  void Get(const std::string& key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      Invalid("config key '" + Dotted(key) + "' has the wrong type: " + j_.at(key).dump());
    }
  }

  void GetPath(const std::string& key, fs::path& out, const fs::path& base) {
    std::string s;
    Get(key, s);
    if (!s.empty()) out = fs::path(s).is_absolute() ? fs::path(s) : base / s;
  }

  Section Child(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return Section(kEmpty, Dotted(key));
    return Section(j_.at(key), Dotted(key));
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  void Done() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) Invalid("unknown config key '" + Dotted(key) + "'");
    }
  }

 private:
  std::string Label() const { return path_.empty() ? "<root>" : path_; }
  std::string Dotted(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  static inline const Json kEmpty = Json::object();
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void RequireExists(const fs::path& p, const std::string& key) {
  if (!p.empty() && !fs::exists(p)) {
    Invalid("config key '" + key + "' names a missing path: " + p.string());
  }
}

void RequireSet(const fs::path& p, const std::string& key, const std::string& command) {
  if (p.empty()) Invalid("'" + command + "' needs config key '" + key + "'");
}

void RequireRange(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) Invalid("config key '" + key + "' must be " + rule);
}

}  // namespace

Json InterpolateEnv(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = InterpolateEnv(v);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(InterpolateEnv(v));
    return out;
  }
  if (!j.is_string()) return j;
  const std::string s = j.get<std::string>();
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = s.find("${", pos);
    if (open == std::string::npos) break;
    const std::size_t close = s.find('}', open + 2);
    if (close == std::string::npos) Invalid("unterminated ${ in config value: " + s);
    const std::string name = s.substr(open + 2, close - open - 2);
    const char* value = std::getenv(name.c_str());
    if (name.empty() || value == nullptr) {
      Invalid("config references unset environment variable '" + name + "'");
    }
    out += s.substr(pos, open - pos);
    out += value;
    pos = close + 1;
  }
  return out + s.substr(pos);
}

void ApplyOverrides(Json& j, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos || eq == 0) Invalid("override must look like key.path=value: " + a);
    const std::string key = a.substr(0, eq);
    const std::string raw = a.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    Json* node = &j;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
      if (part.empty()) Invalid("override has an empty key segment: " + a);
      if (node->is_null()) *node = Json::object();
      if (!node->is_object()) Invalid("override path crosses a non-object: " + a);
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    *node = std::move(value);
  }
}

PipelineConfig ParseConfig(const Json& j, const fs::path& base_dir) {
  PipelineConfig c;
  Section root(j, "");
  root.Get("seed", c.seed);
  root.GetPath("work_dir", c.work_dir, base_dir);
  if (!root.Has("work_dir")) c.work_dir = base_dir / c.work_dir;

  {
    Section s = root.Child("corpus");
    s.GetPath("path", c.corpus.path, base_dir);
    s.Get("repo_url", c.corpus.repo_url);
    s.Get("commit", c.corpus.commit);
    s.Done();
  }
  {
    Section s = root.Child("retrieval");
    auto& r = c.retrieval;
    Section e = s.Child("embedder");
    e.Get("kind", r.embedder.kind);
    e.Get("dimension", r.embedder.dimension);
    e.Get("ngram", r.embedder.ngram);
    e.Get("url", r.embedder.url);
    e.Get("timeout_seconds", r.embedder.timeout_seconds);
    e.Done();
    s.Get("pairs", r.pairs);
    if (r.pairs != "synthetic" && !r.pairs.empty() && fs::path(r.pairs).is_relative()) {
      r.pairs = (base_dir / r.pairs).string();
    }
    s.Get("synthetic_count", r.synthetic_count);
    s.Get("synthetic_dimension", r.synthetic_dimension);
    s.Get("synthetic_shared_dim", r.synthetic_shared_dim);
    s.Get("learning_rate", r.learning_rate);
    s.Get("steps", r.steps);
    s.Get("batch_size", r.batch_size);
    s.Get("d_out", r.d_out);
    s.Get("histogram_bins", r.histogram_bins);
    s.Done();
  }
  {
    Section s = root.Child("genclient");
    auto& g = c.genclient;
    Section b = s.Child("backend");
    b.Get("kind", g.backend.kind);
    b.GetPath("script", g.backend.script, base_dir);
    b.Get("base_url", g.backend.http.base_url);
    b.Get("model", g.backend.http.model);
    b.Get("api_key_env", g.backend.http.api_key_env);
    b.Get("timeout_seconds", g.backend.http.timeout_seconds);
    b.Done();
    s.Get("parallelism", g.parallelism);
    s.Get("temperature", g.temperature);
    Section r = s.Child("retry");
    r.Get("max_attempts", g.retry.max_attempts);
    r.Get("base_delay_seconds", g.retry.base_delay_seconds);
    r.Get("max_delay_seconds", g.retry.max_delay_seconds);
    r.Get("wall_clock_ceiling_seconds", g.retry.wall_clock_ceiling_seconds);
    r.Done();
    Section u = s.Child("budget");
    u.Get("max_requests", g.budget.max_requests);
    u.Get("max_tokens", g.budget.max_tokens);
    u.Done();
    s.Done();
  }
  {
    Section s = root.Child("informalize");
    auto& i = c.informalize;
    s.GetPath("examples", i.examples, base_dir);
    s.Get("examples_per_prompt", i.examples_per_prompt);
    s.Get("key", i.key);
    s.Get("max_attempts", i.max_attempts);
    s.Get("max_new_tokens", i.max_new_tokens);
    s.Get("max_tokens", i.limits.max_tokens);
    s.Get("repetition_ngram", i.limits.repetition_ngram);
    s.Get("repetition_ratio_max", i.limits.repetition_ratio_max);
    s.Get("required_sections", i.limits.required_sections);
    s.Done();
  }
  {
    Section s = root.Child("bootstrap");
    std::string mode(bootstrap::ModeName(c.bootstrap.mode));
    s.Get("mode", mode);
    try {
      c.bootstrap.mode = bootstrap::ParseMode(mode);
    } catch (const Error&) {
      Invalid("config key 'bootstrap.mode' must be \"interleaved\" or \"head\"");
    }
    s.Get("max_attempts", c.bootstrap.max_attempts);
    s.Get("fallback_to_head", c.bootstrap.fallback_to_head);
    s.Get("max_new_tokens", c.bootstrap.max_new_tokens);
    s.Done();
  }
  {
    Section s = root.Child("trainprep");
    auto& t = c.trainprep;
    s.Get("tokenizer", t.tokenizer);
    if (t.tokenizer.rfind("bpe:", 0) == 0 && fs::path(t.tokenizer.substr(4)).is_relative()) {
      t.tokenizer = "bpe:" + (base_dir / t.tokenizer.substr(4)).string();
    }
    s.Get("context_budget", t.emit.pack.context_budget);
    s.Get("nl_guidance", t.emit.pack.nl_guidance);
    s.Get("block", t.emit.pack.block);
    s.Get("curriculum", t.emit.curriculum);
    s.Get("use_bootstrapped", t.emit.use_bootstrapped);
    s.Get("bootstrapped_examples", t.emit.bootstrapped_examples);
    s.Done();
  }
  {
    Section s = root.Child("prover");
    auto& p = c.prover;
    s.GetPath("problems", p.problems, base_dir);
    s.GetPath("seed_pool", p.seed_pool, base_dir);
    s.Get("n_samples", p.harness.n_samples);
    s.Get("samples_per_request", p.harness.samples_per_request);
    s.Get("max_rounds", p.harness.max_rounds);
    s.Get("k_min", p.harness.prompt.k_min);
    s.Get("k_max", p.harness.prompt.k_max);
    s.Get("context_budget", p.harness.prompt.context_budget);
    s.Get("nl_guidance", p.harness.prompt.nl_guidance);
    s.Get("max_new_tokens", p.harness.max_new_tokens);
    s.Get("verifier_parallelism", p.harness.verifier_parallelism);
    Section v = s.Child("verifier");
    v.Get("kind", p.verifier.kind);
    v.GetPath("answer_key", p.verifier.answer_key, base_dir);
    v.Get("command", p.verifier.command);
    v.Get("timeout_seconds", p.verifier.timeout_seconds);
    v.Done();
    s.Done();
  }
  root.Done();

  // One temperature and parallelism knob drives every generating stage.
  c.bootstrap.temperature = c.genclient.temperature;
  c.prover.harness.temperature = c.genclient.temperature;
  c.prover.harness.parallelism = c.genclient.parallelism;
  c.trainprep.emit.parallelism = c.genclient.parallelism;
  return c;
}

PipelineConfig LoadConfig(const fs::path& path, const std::vector<std::string>& overrides) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::exception& e) {
    Invalid("config " + path.string() + " is not JSON: " + e.what());
  } catch (const Error& e) {
    Invalid("cannot read config " + path.string() + ": " + e.what());
  }
  j = InterpolateEnv(j);
  ApplyOverrides(j, overrides);
  return ParseConfig(j, fs::absolute(path).parent_path());
}

void PipelineConfig::Validate(Command command) const {
  const auto& r = retrieval;
  RequireRange(r.embedder.kind == "hash" || r.embedder.kind == "http",
               "retrieval.embedder.kind", "\"hash\" or \"http\"");
  RequireRange(r.embedder.dimension >= 1, "retrieval.embedder.dimension", ">= 1");
  RequireRange(r.embedder.ngram >= 1, "retrieval.embedder.ngram", ">= 1");
  RequireRange(r.embedder.kind != "http" || !r.embedder.url.empty(), "retrieval.embedder.url",
               "set for an http embedder");
  RequireRange(r.synthetic_count >= 2, "retrieval.synthetic_count", ">= 2");
  RequireRange(r.synthetic_shared_dim >= 1 && r.synthetic_shared_dim <= r.synthetic_dimension,
               "retrieval.synthetic_shared_dim", "in [1, synthetic_dimension]");
  RequireRange(r.learning_rate > 0, "retrieval.learning_rate", "> 0");
  RequireRange(r.steps >= 0, "retrieval.steps", ">= 0");
  RequireRange(r.batch_size >= 2, "retrieval.batch_size", ">= 2");
  RequireRange(r.d_out >= 0, "retrieval.d_out", ">= 0");
  RequireRange(r.histogram_bins >= 1, "retrieval.histogram_bins", ">= 1");
  if (r.pairs != "synthetic") RequireExists(r.pairs, "retrieval.pairs");

  const auto& g = genclient;
  RequireRange(g.backend.kind == "mock" || g.backend.kind == "openai" || g.backend.kind == "gemini",
               "genclient.backend.kind", "\"mock\", \"openai\" or \"gemini\"");
  RequireExists(g.backend.script, "genclient.backend.script");
  RequireRange(g.parallelism >= 1 && g.parallelism <= 256, "genclient.parallelism", "in [1, 256]");
  RequireRange(g.temperature >= 0 && g.temperature <= 2, "genclient.temperature", "in [0, 2]");
  RequireRange(g.retry.max_attempts >= 1, "genclient.retry.max_attempts", ">= 1");
  RequireRange(g.retry.base_delay_seconds >= 0 && g.retry.max_delay_seconds >= 0,
               "genclient.retry delays", ">= 0");
  RequireRange(g.budget.max_requests >= 0 && g.budget.max_tokens >= 0, "genclient.budget",
               ">= 0 (0 means unlimited)");

  const auto& inf = informalize;
  RequireExists(inf.examples, "informalize.examples");
  RequireRange(inf.examples_per_prompt >= 1, "informalize.examples_per_prompt", ">= 1");
  RequireRange(inf.key == "nl" || inf.key == "fl_statement", "informalize.key",
               "\"nl\" or \"fl_statement\"");
  RequireRange(inf.max_attempts >= 1, "informalize.max_attempts", ">= 1");
  RequireRange(inf.max_new_tokens >= 1, "informalize.max_new_tokens", ">= 1");
  try {
    inf.limits.Validate();
  } catch (const Error& e) {
    Invalid(std::string("informalize limits: ") + e.what());
  }

  RequireRange(bootstrap.max_attempts >= 1, "bootstrap.max_attempts", ">= 1");
  RequireRange(bootstrap.max_new_tokens >= 1, "bootstrap.max_new_tokens", ">= 1");

  RequireRange(trainprep.emit.pack.context_budget >= 1, "trainprep.context_budget", ">= 1");
  try {
    trainprep::MakeTokenizer(trainprep.tokenizer);
  } catch (const Error& e) {
    Invalid(std::string("config key 'trainprep.tokenizer': ") + e.what());
  }

  const auto& p = prover;
  RequireExists(p.problems, "prover.problems");
  RequireExists(p.seed_pool, "prover.seed_pool");
  try {
    p.harness.Validate();
  } catch (const Error& e) {
    Invalid(std::string("prover: ") + e.what());
  }
  RequireRange(p.verifier.kind == "mock" || p.verifier.kind == "command", "prover.verifier.kind",
               "\"mock\" or \"command\"");
  RequireExists(p.verifier.answer_key, "prover.verifier.answer_key");
  RequireRange(p.verifier.timeout_seconds > 0, "prover.verifier.timeout_seconds", "> 0");

  const bool generates = command == Command::kInformalize || command == Command::kProve ||
                         (command == Command::kBootstrap &&
                          bootstrap.mode == bootstrap::BootstrapMode::kInterleaved);
  if (generates) {
    if (g.backend.kind == "mock") {
      RequireSet(g.backend.script, "genclient.backend.script", "mock backend");
    } else {
      RequireRange(!g.backend.http.base_url.empty() && !g.backend.http.model.empty(),
                   "genclient.backend", "given base_url and model");
    }
  }
  switch (command) {
    case Command::kExtract:
      RequireSet(corpus.path, "corpus.path", "extract");
      RequireExists(corpus.path, "corpus.path");
      break;
    case Command::kInformalize:
      RequireSet(inf.examples, "informalize.examples", "informalize");
      break;
    case Command::kProve:
    case Command::kReport:
      RequireSet(p.problems, "prover.problems", "prove");
      if (p.verifier.kind == "mock") {
        RequireSet(p.verifier.answer_key, "prover.verifier.answer_key", "mock verifier");
      } else {
        RequireRange(!p.verifier.command.empty(), "prover.verifier.command", "nonempty");
      }
      if (command == Command::kProve) RequireSet(p.seed_pool, "prover.seed_pool", "prove");
      break;
    default:
      break;
  }
}

}  // namespace leanbridge::pipeline
