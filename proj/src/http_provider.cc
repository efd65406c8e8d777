// Copyright 2026 The erkit Authors.
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>

#include "erkit/error.h"
#include "erkit/llm_refinement.h"

namespace erkit {

HttpProvider::HttpProvider(std::string url, std::string token, int timeout_seconds)
    : token_(std::move(token)), timeout_seconds_(timeout_seconds) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "provider URL needs a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

HttpProvider HttpProvider::FromEnvironment(int timeout_seconds) {
  const char* url = std::getenv("PROVIDER_URL");
  if (url == nullptr || *url == '\0') {
    throw Error(ErrorCode::kInvalidArgument, "PROVIDER_URL is not set");
  }
  const char* token = std::getenv("PROVIDER_TOKEN");
  return HttpProvider(url, token == nullptr ? "" : token, timeout_seconds);
}

ProviderResponse HttpProvider::Complete(const ProviderRequest& request) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  nlohmann::json body;
  body["prompt"] = request.prompt;
  body["image_ref"] = request.image_ref ? nlohmann::json(*request.image_ref) : nlohmann::json();

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderError,
                "request to " + base_ + path_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) return ProviderResponse{res->body, res->status};
  try {
    auto reply = nlohmann::json::parse(res->body);
    return ProviderResponse{reply.at("text").get<std::string>(), res->status};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProviderError, std::string("malformed provider reply: ") + e.what());
  }
}

}  // namespace erkit
