// Copyright 2026 The ghzbell Authors
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

#include "ghzbell/basis.hpp"
#include "ghzbell/estimate.hpp"
#include "ghzbell/experiment.hpp"
#include "ghzbell/inequalities.hpp"
#include "ghzbell/lhv.hpp"
#include "ghzbell/montecarlo.hpp"
#include "ghzbell/preparation.hpp"
#include "ghzbell/probability.hpp"
#include "ghzbell/quantum_state.hpp"
#include "ghzbell/rng.hpp"
