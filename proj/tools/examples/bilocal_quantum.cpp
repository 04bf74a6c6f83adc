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

// Entanglement-swapping network with two EPR pairs: R_2 against the
// classical, quantum and non-signaling thresholds, then a visibility scan.

#include <cstdio>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

int main() {
  auto q = preset_bilocal_epr();
  auto P = network_correlations(q);
  auto b = eval_Rk(P, q.independent);
  std::printf("I=%.6f J=%.6f R_2=%.12f (%s)\n", b.I, b.J, b.R, b.bound_class.c_str());
  for (double v : {0.6, 0.7, 0.7071, 0.72, 0.8, 1.0}) {
    auto Pv = network_correlations(preset_bilocal_epr(v));
    std::printf("v=%.4f R_2=%.6f\n", v, eval_Rk(Pv, q.independent).R);
  }
  return 0;
}
