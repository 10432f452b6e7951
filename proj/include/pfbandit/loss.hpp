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

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

#include "pfbandit/vec.hpp"

namespace pfb {

// Value-only access to a convex L-Lipschitz loss with min 0 over the decision
// set (so |value| <= L*D there). Invocations are counted per logical oracle;
// copies share the counter, so wrappers compose with the oracle-complexity
// accounting intact.
class LossOracle {
 public:
  LossOracle(std::function<double(const Point&)> fn, double lipschitz, int dim)
      : fn_(std::move(fn)),
        lipschitz_(lipschitz),
        dim_(dim),
        calls_(std::make_shared<long long>(0)) {
    if (dim < 1) throw std::invalid_argument("LossOracle: dimension must be >= 1");
    if (!(lipschitz >= 0.0)) {
      throw std::invalid_argument("LossOracle: Lipschitz constant must be >= 0");
    }
  }

  double value(const Point& x) const {
    if (static_cast<int>(x.size()) != dim_) {
      throw std::invalid_argument("LossOracle: query dimension mismatch");
    }
    ++*calls_;
    return fn_(x);
  }

  double lipschitz() const { return lipschitz_; }
  int dimension() const { return dim_; }
  long long calls() const { return *calls_; }

 private:
  std::function<double(const Point&)> fn_;
  double lipschitz_;
  int dim_;
  std::shared_ptr<long long> calls_;
};

}  // namespace pfb
