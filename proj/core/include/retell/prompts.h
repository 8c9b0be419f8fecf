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

#ifndef RETELL_PROMPTS_H_
#define RETELL_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>

namespace retell::prompts {

// Templates compiled in from core/assets/prompts. Slots are written
// {Topics}, {tree} and {Document}.
std::string_view TopicGenerationSingleTemplate();
std::string_view TopicGenerationMultiTemplate();
std::string_view TopicAssignmentTemplate();

// Replaces each "{name}" slot whose name is a key of `slots`. Substituted
// text is never rescanned, so a document containing "{Topics}" stays as is.
// Unknown braces are copied through.
std::string Render(std::string_view tmpl, const std::map<std::string, std::string> &slots);

}  // namespace retell::prompts

#endif  // RETELL_PROMPTS_H_
