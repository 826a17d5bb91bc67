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

#include "leanbridge/retrieval/provider.h"

#include <string_view>

#include "httplib.h"
#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/common/random.h"

namespace leanbridge::retrieval {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

HashEmbedder::HashEmbedder(int dimension, int ngram)
    : dimension_(dimension), ngram_(ngram) {
  if (dimension <= 0 || ngram <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "hash embedder needs positive sizes");
  }
}

EmbeddingVector HashEmbedder::EmbedOne(const std::string& text) const {
  std::vector<std::string_view> tokens = SplitWhitespace(text);
  // The empty text still needs a nonzero vector so cosine stays defined.
  static constexpr std::string_view kEmptyToken = "\x01";
  if (tokens.empty()) tokens.push_back(kEmptyToken);
  std::vector<EmbeddingVector> token_vectors;
  token_vectors.reserve(tokens.size());
  for (std::string_view token : tokens) {
    const std::string padded = "\x02" + std::string(token) + "\x03";
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension_);
    const std::size_t n = static_cast<std::size_t>(ngram_);
    const std::size_t grams = padded.size() >= n ? padded.size() - n + 1 : 1;
    for (std::size_t i = 0; i < grams; ++i) {
      const std::uint64_t h = Fnv1a64(std::string_view(padded).substr(i, n));
      const auto bucket = static_cast<Eigen::Index>((h >> 1) % static_cast<std::uint64_t>(dimension_));
      v[bucket] += (h & 1) ? 1.0 : -1.0;
    }
    token_vectors.emplace_back(std::move(v));
  }
  return MeanPool(token_vectors);
}

std::vector<EmbeddingVector> HashEmbedder::Embed(
    const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EmbedOne(t));
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, int dimension,
                                             int timeout_seconds)
    : dimension_(dimension), timeout_seconds_(timeout_seconds) {
  const std::size_t scheme = url.find("://");
  const std::size_t path_start =
      url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (scheme == std::string::npos || dimension <= 0) {
    throw Error(ErrorCode::kConfigInvalid, "embedding endpoint must be an absolute URL: " + url);
  }
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::Embed(
    const std::vector<std::string>& texts) const {
  if (texts.empty()) return {};
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  const std::string body = Json{{"texts", texts}}.dump();
  auto res = client.Post(path_, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable,
                "embedding endpoint " + scheme_host_port_ + path_ +
                    " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                "embedding endpoint returned HTTP " + std::to_string(res->status));
  }
  std::vector<std::vector<double>> vectors;
  try {
    vectors = Json::parse(res->body).at("vectors").get<std::vector<std::vector<double>>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedBackendReply,
                std::string("embedding reply is not {vectors: [[...]]}: ") + e.what());
  }
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kMalformedBackendReply,
                "embedding reply has " + std::to_string(vectors.size()) +
                    " vectors for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding reply vector has dimension " + std::to_string(v.size()) +
                      ", configured " + std::to_string(dimension_));
    }
    out.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), dimension_));
  }
  return out;
}

}  // namespace leanbridge::retrieval
