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

// Prompt templates. The wording is part of the method and is covered by
// golden-file tests; edit only together with tests/data/golden.

#include <string>

#include "erkit/llm_refinement.h"

namespace erkit {
namespace {

constexpr std::string_view kProxyPrefix = "Here are the visual attributes of the image: ";

// Template slots are followed by a literal '.', so one trailing period on the
// inserted text is dropped.
std::string WithoutFinalPeriod(std::string_view text) {
  if (!text.empty() && text.back() == '.') text.remove_suffix(1);
  return std::string(text);
}

void AppendProxy(std::string& out, std::optional<std::string_view> caption_proxy) {
  if (!caption_proxy) return;
  out += kProxyPrefix;
  out += *caption_proxy;
  out += '\n';
}

}  // namespace

std::string RenderVerificationPrompt(std::string_view candidate_name, std::string_view summary,
                                     std::string_view caption,
                                     std::optional<std::string_view> caption_proxy) {
  const std::string c(candidate_name);
  std::string out;
  AppendProxy(out, caption_proxy);
  out += "You are working on an entity recognition task.\n";
  out += "Is this an image of " + c + "?\n";
  out += "Your answer must be either 'YES' or 'NO'.\n";
  out += "Here is the definition of " + c + ": " + WithoutFinalPeriod(summary) + ".\n";
  out += "If your answer is 'YES', you must use the definition of " + c +
         " to answer whether this is an image of a " + c + ".\n";
  out += "If your answer is 'NO', you must use the caption of the image " +
         std::string(caption) +
         " to describe the main object in the image with the most specific English "
         "Wikipedia article title, where the response follows the format '@response@'. \"\n";
  out += "You must then explain your answer by describing the visual attributes of the image.\n";
  out += "If you answer is 'YES', your explanation MUST be based on the definition of " + c +
         ". If you answer is 'NO', your explanation MUST ONLY be based on the visual cues of "
         "the image, and it should NOT contain " + c + ".\n";
  out += "Your explanation must be concise.\n";
  out += "Your explanation MUST NOT exceed two sentences.";
  return out;
}

std::string RenderQaPrompt(std::string_view entity_name, std::string_view rationale,
                           std::optional<std::string_view> caption_proxy) {
  std::string out;
  AppendProxy(out, caption_proxy);
  out += "You are working on a visual question answering task.\n";
  out += "This is an image of " + std::string(entity_name) + ".\n";
  out += "Your rationale is the following: " + WithoutFinalPeriod(rationale) + ".\n";
  out += "Your task is to generate 3 question/answer pairs describing the visual attributes "
         "of this image.\n";
  out += "The questions MUST be diverse and cover several entities of the image, including "
         "the main object in the image or image itself.\n";
  out += "The answers MUST be specific English Wikipedia article titles.\n";
  out += "The answers MUST be based on the visual content of the image and the provided "
         "rationale.\n";
  out += "The format for the question/answer pairs is Q:<question> A:<answer>. The questions "
         "MUST NOT contain What is the main object in the image?.";
  return out;
}

std::string_view PromptStage(std::string_view prompt) {
  if (prompt.find("You are working on an entity recognition task.") != std::string_view::npos) {
    return "verify";
  }
  if (prompt.find("You are working on a visual question answering task.") !=
      std::string_view::npos) {
    return "qa";
  }
  return "";
}

}  // namespace erkit
