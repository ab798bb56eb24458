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

#include <string>
#include <string_view>

#include "coarse_metrology/error.hpp"

namespace coarse_metrology {

enum class StateKind { GHZ, Product, Alternating };

enum class ReferenceKind { Perfect, Common, Independent };

/// Two-outcome parity readout. "Even" means (-1)^(sum of outcome bits) = +1.
struct ParityDistribution {
    double p_even = 0.5;
    double p_odd = 0.5;
};

inline constexpr std::string_view to_string(StateKind kind) noexcept {
    switch (kind) {
    case StateKind::GHZ:
        return "ghz";
    case StateKind::Product:
        return "product";
    case StateKind::Alternating:
        return "alternating";
    }
    return "?";
}

inline constexpr std::string_view to_string(ReferenceKind kind) noexcept {
    switch (kind) {
    case ReferenceKind::Perfect:
        return "perfect";
    case ReferenceKind::Common:
        return "common";
    case ReferenceKind::Independent:
        return "independent";
    }
    return "?";
}

inline StateKind parse_state_kind(std::string_view s) {
    if (s == "ghz") return StateKind::GHZ;
    if (s == "product") return StateKind::Product;
    if (s == "alternating") return StateKind::Alternating;
    throw InvalidArgument("unknown state kind '" + std::string(s) + "'");
}

inline ReferenceKind parse_reference_kind(std::string_view s) {
    if (s == "perfect") return ReferenceKind::Perfect;
    if (s == "common") return ReferenceKind::Common;
    if (s == "independent") return ReferenceKind::Independent;
    throw InvalidArgument("unknown reference kind '" + std::string(s) + "'");
}

} // namespace coarse_metrology
