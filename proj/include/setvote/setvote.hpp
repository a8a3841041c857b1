// Copyright 2026 The setvote Authors
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

#ifndef SETVOTE_SETVOTE_HPP
#define SETVOTE_SETVOTE_HPP

#include "setvote/derandomize.hpp"
#include "setvote/interval.hpp"
#include "setvote/merge.hpp"
#include "setvote/numeric.hpp"
#include "setvote/profile.hpp"
#include "setvote/pvalue.hpp"
#include "setvote/random.hpp"
#include "setvote/risk.hpp"
#include "setvote/sequential.hpp"
#include "setvote/simulate.hpp"

#endif  // SETVOTE_SETVOTE_HPP
