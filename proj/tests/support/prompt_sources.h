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

#ifndef RETELL_TESTS_PROMPT_SOURCES_H_
#define RETELL_TESTS_PROMPT_SOURCES_H_

// Typeset (LaTeX) transcriptions of the TopicGPT-lite prompts. Lines end in
// "\\" and quotes use `` and '' pairs; ExpandTypeset() turns them into the
// plain text an LM receives.

#include <string>
#include <string_view>

namespace retell::testing {

inline constexpr std::string_view kGenerationSingleSource = R"SRC(You will receive a document and a set of topics. Your task is to identify a generalizable topic within the document. If this topic is missing from the provided set, please add it. Otherwise, output an existing topic as identified in the document. \\

[Topics] \\
{Topics} \\

[Examples] \\
Example 1: Adding "Religion" \\
Document:  \\
But a religion true to its nature must also be concerned about man’s social conditions... Such a religion is the kind the Marxists like to see—an opiate of the people.  \\

Your response:  \\
Religion: Describes purposes and roles of religion for people.  \\

Example 2: Respond with an existing topic, "Love"  \\
Document:  \\
``I have reason to think,” he replied, “that Harriet Smith ... is he sure that Harriet means to marry him?'' \\

Your response:  \\
Love: Discusses romantic relationships, such as marriage. \\

[Instructions] \\
Step 1: Determine the topic mentioned in the document.  \\
- The topic label must be as GENERALIZABLE as possible. It must not be document-specific. \\
- The topic must reflect a SINGLE topic instead of a combination of topics. \\
- A new topic must have a short general label and a topic description.   \\
Step 2: Perform ONE of the following operations:  \\
1. If there are already a duplicate or relevant topic in the provided set of topics, output that topic and stop here.  \\
2. If the document contains no topic, return "None".  \\
3. Otherwise, add a new topic to the set of topics.  \\

[Document] \\
{Document} \\

Your response should be one line and ONLY contain a topic, written in the format "[Topic label]: [your reasoning]".  \\
Your response: \\)SRC";

inline constexpr std::string_view kGenerationMultiSource = R"SRC(You will receive a document and a set of topics. Your task is to identify generalizable topics within the document. If any relevant topics are missing from the provided set, please add them. Otherwise, output any existing topics identified in the document. \\

[Topics] \\
{Topics} \\

[Examples] \\
Example 1: Adding "Religion" \\
Document:  \\
But a religion true to its nature must also be concerned about man’s social conditions... Such a religion is the kind the Marxists like to see—an opiate of the people.  \\

Your response:  \\
Religion: Describes purposes and roles of religion for people.  \\

Example 2: Respond with an existing topic, "Love"  \\
Document:  \\
``I have reason to think,” he replied, “that Harriet Smith ... is he sure that Harriet means to marry him?'' \\

Your response:  \\
Love: Discusses romantic relationships, such as marriage. \\

[Instructions] \\
Step 1: Determine topics mentioned in the document.  \\
- The topic labels must be as GENERALIZABLE as possible. They must not be document-specific. \\
- The topics must reflect a SINGLE topic instead of a combination of topics. \\
- Each new topic must have a short general label and a topic description.   \\
Step 2: Perform ONE of the following operations:  \\
1. If there are already duplicates or relevant topics in the provided set of topics, output those topics and stop here.  \\
2. If the document contains no topic, return "None".  \\
3. Otherwise, output new, additional topic(s). \\

[Document] \\
{Document} \\

Your response should ONLY contain topics, written in the format "[Topic label]: [your reasoning]".  \\
Your response: \\)SRC";

inline constexpr std::string_view kAssignmentSource = R"SRC(You will receive a document and a set of topics. Assign the document to the most relevant topics. Then, output the topic labels and assignment reasoning. DO NOT make up new topics. \\

[Topics] \\
{tree} \\

[Examples] \\
Example 1: Assign "Religion" to the document \\
Document:  \\
The second step for me to morph from animal to human was taking me to the church youth group ... pray in separate rooms so religions wouldn't collide. \\

Assignment: \\
Religion: Describes people's religious practices. \\

Example 2: Assign "Love" to the document \\
Document:  \\
``Good-bye, my love,'' answered the countess ... smile fluttering between her lips and her eyes, she gave her hand to Vronsky.  \\

Assignment:  \\
Love: Describes a scene where one person declares and shows affection for another. \\

[Instructions] \\
1. Topic labels must be present in the provided set of topics. You MUST NOT make up new topics.  \\
2. Output topic(s) you assign in order of their prominence in the document, with the most prominent topic first. \\
3. Each line of your response should contain a topic written in the format "[Topic label]: [your reasoning]".  \\

[Document] \\
{Document} \\

Your response should ONLY contain topics. Double check that your assignment exists in the provided set of topics! \\
Your response: \\)SRC";

// One output line per source line: the trailing "\\" and surrounding
// spaces are dropped, `` becomes U+201C and '' becomes U+201D.
inline std::string ExpandTypeset(std::string_view source) {
  std::string out;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string line(source.substr(start, end - start));
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.size() >= 2 && line.compare(line.size() - 2, 2, "\\\\") == 0) line.resize(line.size() - 2);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    for (std::size_t p; (p = line.find("``")) != std::string::npos;) line.replace(p, 2, "\u201C");
    for (std::size_t p; (p = line.find("''")) != std::string::npos;) line.replace(p, 2, "\u201D");
    out += line;
    if (end == source.size()) break;
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace retell::testing

#endif  // RETELL_TESTS_PROMPT_SOURCES_H_
