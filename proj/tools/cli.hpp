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

#include <iosfwd>
#include <memory>

#include "CLI11.hpp"

namespace clickbait::cli {

struct Settings;

// Owns the option storage bound into the parser, so the App must not
// outlive it.
class Cli {
 public:
  Cli();
  ~Cli();

  CLI::App& app() { return *app_; }

  // Parses and runs one command. Returns the process exit status: 0 on
  // success, 2 for invalid input, 3 for a missing upstream artifact, 1 for
  // any other failure.
  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

 private:
  std::unique_ptr<Settings> s_;
  std::unique_ptr<CLI::App> app_;
};

}  // namespace clickbait::cli
