//
// Copyright 2026 The pfbandit Authors
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
//

#pragma once

#include "pfbandit/bench.hpp"
#include "pfbandit/frank_wolfe.hpp"
#include "pfbandit/geometry.hpp"
#include "pfbandit/loss.hpp"
#include "pfbandit/noisy_oco.hpp"
#include "pfbandit/privacy_audit.hpp"
#include "pfbandit/private_bandit.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/smoothing.hpp"
#include "pfbandit/tree_agg.hpp"
#include "pfbandit/vec.hpp"
