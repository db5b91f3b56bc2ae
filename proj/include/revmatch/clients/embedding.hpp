// Copyright 2026 The revmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "revmatch/clients/transport.hpp"
#include "revmatch/error.hpp"
#include "revmatch/text.hpp"

namespace revmatch::clients {

/// Task instructions used when embedding query papers and reviewer profiles.
inline constexpr const char* kQueryInstruction =
    "Given a submission title and abstract, retrieve reviewers whose expertise profile matches and who are "
    "familiar with the work.";
inline constexpr const char* kReviewerInstruction =
    "Given a reviewer profile, retrieve papers that match the reviewer's expertise.";

struct EmbeddingRequest {
    std::vector<std::string> texts;
    std::string task_instruction;
};

struct EmbeddingResponse {
    std::vector<std::vector<double>> vectors;
    std::size_t dim = 0;
};

/// Throws ContractError unless the response matches the request: one finite
/// vector of length `dim` per text.
inline void validate(const EmbeddingRequest& req, const EmbeddingResponse& resp) {
    if (resp.dim == 0) throw ContractError("embedding response: dim must be positive");
    if (resp.vectors.size() != req.texts.size()) {
        throw ContractError("embedding response: " + std::to_string(resp.vectors.size()) + " vectors for " +
                            std::to_string(req.texts.size()) + " texts");
    }
    for (std::size_t i = 0; i < resp.vectors.size(); ++i) {
        if (resp.vectors[i].size() != resp.dim) {
            throw ContractError("embedding response: vector " + std::to_string(i) + " has length " +
                                std::to_string(resp.vectors[i].size()) + ", dim is " + std::to_string(resp.dim));
        }
        for (double x : resp.vectors[i]) {
            if (!std::isfinite(x)) throw ContractError("embedding response: non-finite value in vector " +
                                                       std::to_string(i));
        }
    }
}

class EmbeddingClient {
  public:
    virtual ~EmbeddingClient() = default;
    virtual EmbeddingResponse embed(const EmbeddingRequest& req) = 0;
    virtual std::size_t dim() const = 0;
};

/// Offline embedder: each token is hashed (FNV-1a 64) into one of `dim`
/// buckets with weight +1, and the bucket vector is L2-normalized. A text with
/// no tokens maps to the bucket of the empty string.
class StubEmbeddingClient : public EmbeddingClient {
  public:
    explicit StubEmbeddingClient(std::size_t dim = 64) : dim_(dim) {
        if (dim_ == 0) throw UsageError("stub embedding dim must be positive");
    }

    std::vector<double> embed_text(std::string_view s) const {
        std::vector<double> v(dim_, 0.0);
        const auto tokens = text::tokenize(s);
        if (tokens.empty()) {
            v[text::fnv1a64("") % dim_] = 1.0;
            return v;
        }
        for (const auto& t : tokens) v[text::fnv1a64(t) % dim_] += 1.0;
        double sq = 0.0;
        for (double x : v) sq += x * x;
        const double norm = std::sqrt(sq);
        for (double& x : v) x /= norm;
        return v;
    }

    EmbeddingResponse embed(const EmbeddingRequest& req) override {
        if (req.texts.empty()) throw ContractError("embedding request has no texts");
        EmbeddingResponse resp;
        resp.dim = dim_;
        resp.vectors.reserve(req.texts.size());
        for (const auto& t : req.texts) resp.vectors.push_back(embed_text(t));
        return resp;
    }

    std::size_t dim() const override { return dim_; }

  private:
    std::size_t dim_;
};

/// POSTs {"texts": [...], "task_instruction": "..."} and expects
/// {"vectors": [[...], ...], "dim": n}.
class HttpEmbeddingClient : public EmbeddingClient {
  public:
    HttpEmbeddingClient(std::shared_ptr<Transport> transport, ServiceConfig config, std::size_t dim)
        : poster_(std::move(transport), std::move(config)), dim_(dim) {}

    EmbeddingResponse embed(const EmbeddingRequest& req) override {
        if (req.texts.empty()) throw ContractError("embedding request has no texts");
        const json body = {{"texts", req.texts}, {"task_instruction", req.task_instruction}};
        const json reply = poster_.post(poster_.config().embedding_url, body);
        EmbeddingResponse resp;
        try {
            resp.dim = reply.at("dim").get<std::size_t>();
            resp.vectors = reply.at("vectors").get<std::vector<std::vector<double>>>();
        } catch (const json::exception& e) {
            throw ContractError(std::string("embedding response schema: ") + e.what());
        }
        validate(req, resp);
        if (dim_ != 0 && resp.dim != dim_) {
            throw ContractError("embedding response dim " + std::to_string(resp.dim) + " != configured " +
                                std::to_string(dim_));
        }
        return resp;
    }

    std::size_t dim() const override { return dim_; }

  private:
    JsonPoster poster_;
    std::size_t dim_;
};

}  // namespace revmatch::clients
