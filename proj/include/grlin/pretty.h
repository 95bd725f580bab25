// Copyright 2026 The grlin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRLIN_PRETTY_H_
#define GRLIN_PRETTY_H_

#include <string>

#include "grlin/parser.h"
#include "grlin/syntax.h"

namespace grlin {

// Output is accepted by the parser and parses back to an equal value
// (α-equivalent for terms). Use wrappers are printed transparently.
std::string pretty(const Type& t);
std::string pretty(const Term& t);
std::string pretty(const Pattern& p);
std::string pretty(const Program& p);

}  // namespace grlin

#endif  // GRLIN_PRETTY_H_
