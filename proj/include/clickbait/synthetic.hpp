// Copyright 2026 The clickbait-hybrid Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>

#include "clickbait/corpus.hpp"

namespace clickbait {

// Seeded offline corpus: clickbait headlines from curiosity-gap templates and
// factual headlines from reporting templates, n / 2 of each (the odd one out
// is clickbait). Texts are unique after normalization; ids are "syn-<i>".
// Throws PreconditionError when n < 2 or the templates cannot supply n
// distinct headlines.
LabeledCorpus synthesize_corpus(std::size_t n, std::uint64_t seed);

}  // namespace clickbait
