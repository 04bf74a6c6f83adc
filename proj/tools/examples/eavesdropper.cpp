// Copyright 2026 The netcausal Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random non-signaling eavesdroppers on a 4-agent chain at v=0.85.

#include <cstdio>
#include <random>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

int main() {
  auto q = preset_network("chain:4", 0.85);
  auto cm = components_from_quantum(q);
  auto cx = prepare_security(cm, q.independent, singleton_groups(q.scenario.m));
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int s = 0; s < 50; ++s) {
    auto rep = simulate_eavesdropper(cx, random_eve(cm, rng));
    worst = std::max(worst, *rep.D_observed);
  }
  std::printf("R_%d=%.6f bound=%.6f worst D=%.6f\n", cx.independent.k(), cx.R, cx.bound, worst);
  auto copy = simulate_eavesdropper(cx, copy_eve(cm));
  std::printf("copying eve: D=%.6f\n", *copy.D_observed);
  return 0;
}
