// Copyright 2026 The Expressibench Authors
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

#pragma once

#include "expressibench/bounds.hpp"
#include "expressibench/circuit_zoo.hpp"
#include "expressibench/config.hpp"
#include "expressibench/experiment.hpp"
#include "expressibench/expressivity.hpp"
#include "expressibench/haar_validate.hpp"
#include "expressibench/rng.hpp"
#include "expressibench/statevec.hpp"
