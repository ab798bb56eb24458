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

// Scans the GHZ probe size for a few reference spreads and compares the
// phase resolution against a product probe of the same size.

#include <cmath>
#include <cstdio>
#include <string>

#include "coarse_metrology/phase_model.hpp"

int main() {
    namespace cm = coarse_metrology;
    constexpr std::int64_t experiments = 1000;

    for (const double delta : {0.05, 0.1, 0.3}) {
        for (const auto reference : {cm::ReferenceKind::Common, cm::ReferenceKind::Independent}) {
            const auto best = cm::phase::optimal_particles(reference, delta, 100'000);
            const cm::phase::PhaseScenario ghz{cm::StateKind::GHZ, static_cast<int>(best.n),
                                               reference, delta, experiments};
            const cm::phase::PhaseScenario product{cm::StateKind::Product, static_cast<int>(best.n),
                                                   reference, delta, experiments};
            std::printf("delta=%-5g %-11s n*=%-6lld (continuous %8.3f)  dphi ghz=%.4e  product=%.4e\n",
                        delta, std::string(cm::to_string(reference)).c_str(),
                        static_cast<long long>(best.n), best.continuous,
                        cm::phase::resolution_phase_optimal(ghz),
                        cm::phase::resolution_phase_optimal(product));
        }
    }
    return 0;
}
