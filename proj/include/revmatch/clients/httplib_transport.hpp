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
#include <map>
#include <string>

#include <httplib.h>

// <resolv.h> (via httplib) defines _res, which breaks Eigen headers included later.
#ifdef _res
#undef _res
#endif

#include "revmatch/clients/transport.hpp"

namespace revmatch::clients {

/// Transport backed by cpp-httplib. https URLs need the library built with
/// CPPHTTPLIB_OPENSSL_SUPPORT.
class HttplibTransport : public Transport {
  public:
    explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

    HttpResponse post(const std::string& url, const std::string& body,
                      const std::map<std::string, std::string>& headers) override {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw UsageError("endpoint URL needs a scheme: " + url);
        const auto path_begin = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_begin);
        const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

        httplib::Client client(origin);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);
        httplib::Headers h;
        std::string content_type = "application/json";
        for (const auto& [k, v] : headers) {
            if (k == "Content-Type") {
                content_type = v;
            } else {
                h.emplace(k, v);
            }
        }
        auto res = client.Post(path, h, body, content_type);
        if (!res) throw TransportError(url + ": " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

  private:
    std::chrono::milliseconds timeout_;
};

}  // namespace revmatch::clients
