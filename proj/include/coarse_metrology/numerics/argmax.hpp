// Copyright 2026 The coarse-metrology Authors
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

#include <cmath>
#include <cstdint>
#include <string>

#include "coarse_metrology/error.hpp"

namespace coarse_metrology::numerics {

struct IntegerArgmax {
    std::int64_t n = 1;
    double value = 0.0;
    /// The maximizer is n_max itself, so the true optimum may lie beyond the scan.
    bool at_boundary = false;
};

/// Exhaustive scan of f over 1..n_max. Ties resolve to the smallest n.
template <class F> IntegerArgmax integer_argmax(F &&f, std::int64_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("integer_argmax needs n_max >= 1");
    }
    IntegerArgmax best{1, f(std::int64_t{1}), false};
    if (std::isnan(best.value)) {
        throw InvalidArgument("integer_argmax: objective is NaN at n = 1");
    }
    for (std::int64_t n = 2; n <= n_max; ++n) {
        const double v = f(n);
        if (std::isnan(v)) {
            throw InvalidArgument("integer_argmax: objective is NaN at n = " + std::to_string(n));
        }
        if (v > best.value) {
            best.n = n;
            best.value = v;
        }
    }
    best.at_boundary = (best.n == n_max);
    return best;
}

} // namespace coarse_metrology::numerics
