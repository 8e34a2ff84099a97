// Copyright 2026 The Hallspan Authors.
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

#include "http_util.h"

#include "hallspan/error.h"

namespace hallspan::internal {

SplitUrl ParseUrl(const std::string &url) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("endpoint URL needs a scheme: " + url);
  }
  size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::unique_ptr<httplib::Client> MakeClient(const std::string &origin,
                                            std::chrono::milliseconds timeout,
                                            const std::string &bearer_token) {
  auto client = std::make_unique<httplib::Client>(origin);
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  if (!bearer_token.empty()) client->set_bearer_token_auth(bearer_token);
  return client;
}

}  // namespace hallspan::internal
