// Copyright 2026 The Retell Authors
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

#include "retell/prompts.h"

namespace retell::prompts {

std::string Render(std::string_view tmpl, const std::map<std::string, std::string> &slots) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = tmpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    auto it = slots.find(std::string(tmpl.substr(open + 1, close - open - 1)));
    if (it == slots.end()) {
      out.append(tmpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    out.append(tmpl.substr(pos, open - pos));
    out += it->second;
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  return out;
}

}  // namespace retell::prompts
