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

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <utility>

#include <json.hpp>

#include "revmatch/error.hpp"

namespace revmatch::clients {

using json = nlohmann::json;

/// Endpoint and transport settings shared by all HTTP-backed clients.
struct ServiceConfig {
    std::string embedding_url;
    std::string keyword_url;
    std::string verifier_url;
    std::string auth_token;
    int retries = 2;
    std::chrono::milliseconds timeout{30000};
    int max_in_flight = 4;

    /// Reads REVMATCH_EMBEDDING_URL, REVMATCH_KEYWORD_URL, REVMATCH_VERIFIER_URL,
    /// REVMATCH_AUTH_TOKEN, REVMATCH_RETRIES, REVMATCH_TIMEOUT_MS and
    /// REVMATCH_MAX_IN_FLIGHT, keeping defaults for unset variables.
    static ServiceConfig from_env() {
        ServiceConfig c;
        auto get = [](const char* key) -> std::optional<std::string> {
            const char* v = std::getenv(key);
            if (v == nullptr || *v == '\0') return std::nullopt;
            return std::string(v);
        };
        auto get_int = [&](const char* key, int fallback) {
            const auto v = get(key);
            if (!v) return fallback;
            try {
                return std::stoi(*v);
            } catch (const std::exception&) {
                throw UsageError(std::string("invalid integer in ") + key + ": " + *v);
            }
        };
        if (auto v = get("REVMATCH_EMBEDDING_URL")) c.embedding_url = *v;
        if (auto v = get("REVMATCH_KEYWORD_URL")) c.keyword_url = *v;
        if (auto v = get("REVMATCH_VERIFIER_URL")) c.verifier_url = *v;
        if (auto v = get("REVMATCH_AUTH_TOKEN")) c.auth_token = *v;
        c.retries = get_int("REVMATCH_RETRIES", c.retries);
        c.timeout = std::chrono::milliseconds(get_int("REVMATCH_TIMEOUT_MS", static_cast<int>(c.timeout.count())));
        c.max_in_flight = get_int("REVMATCH_MAX_IN_FLIGHT", c.max_in_flight);
        if (c.retries < 0 || c.timeout.count() <= 0 || c.max_in_flight <= 0) {
            throw UsageError("service config: retries >= 0, timeout > 0, max in flight > 0 required");
        }
        return c;
    }
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Minimal POST transport. Implementations throw TransportError when no
/// response could be obtained at all.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& body,
                              const std::map<std::string, std::string>& headers) = 0;
};

/// Serializes a JSON request, posts it with bounded retries and in-flight
/// limit, and hands the parsed JSON body to the caller.
///
/// Network failures, non-2xx statuses, and bodies that are not JSON are
/// retried `retries` times and then surface as TransportError. Contract
/// checks on the parsed body belong to the caller and are not retried.
class JsonPoster {
  public:
    JsonPoster(std::shared_ptr<Transport> transport, ServiceConfig config)
        : transport_(std::move(transport)),
          config_(std::move(config)),
          slots_(std::make_unique<std::counting_semaphore<>>(config_.max_in_flight)) {}

    json post(const std::string& url, const json& request) {
        if (url.empty()) throw UsageError("no endpoint configured for HTTP backend");
        std::map<std::string, std::string> headers{{"Content-Type", "application/json"}};
        if (!config_.auth_token.empty()) headers["Authorization"] = "Bearer " + config_.auth_token;
        const std::string body = request.dump();
        std::string last_error;
        for (int attempt = 0; attempt <= config_.retries; ++attempt) {
            slots_->acquire();
            struct Release {
                std::counting_semaphore<>* s;
                ~Release() { s->release(); }
            } release{slots_.get()};
            try {
                const auto resp = transport_->post(url, body, headers);
                if (resp.status < 200 || resp.status >= 300) {
                    last_error = "HTTP status " + std::to_string(resp.status);
                    continue;
                }
                try {
                    return json::parse(resp.body);
                } catch (const json::exception& e) {
                    last_error = std::string("malformed response body: ") + e.what();
                }
            } catch (const TransportError& e) {
                last_error = e.what();
            }
        }
        throw TransportError(url + ": giving up after " + std::to_string(config_.retries + 1) +
                             " attempt(s): " + last_error);
    }

    const ServiceConfig& config() const { return config_; }

  private:
    std::shared_ptr<Transport> transport_;
    ServiceConfig config_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace revmatch::clients
