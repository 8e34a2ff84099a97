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

#ifndef HALLSPAN_HTTP_UTIL_H_
#define HALLSPAN_HTTP_UTIL_H_

#include <chrono>
#include <memory>
#include <string>

#include "httplib.h"

namespace hallspan::internal {

// "http://host:8080/v1/x" -> origin "http://host:8080", path "/v1/x".
struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl ParseUrl(const std::string &url);

std::unique_ptr<httplib::Client> MakeClient(const std::string &origin,
                                            std::chrono::milliseconds timeout,
                                            const std::string &bearer_token);

}  // namespace hallspan::internal

#endif  // HALLSPAN_HTTP_UTIL_H_
