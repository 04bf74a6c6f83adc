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

// Mix the quantum bilocal box with white noise and locate the visibility
// where the alternating solver stops finding bilocal models.

#include <cstdio>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

int main() {
  auto P = network_correlations(preset_bilocal_epr());
  SolverConfig cfg;
  cfg.restarts = 4;
  auto v = network_feasibility(P, local_class(3), cfg);
  std::printf("t=1: %s via %s (%s)\n", status_name(v.status), certificate_name(v.certificate), v.detail.c_str());
  auto r = star_ray_membership(P, local_class(3), cfg, 10);
  std::printf("t*=%.4f t_hi=%.4f certified=%d unknown=%d evals=%d\n", r.t_star, r.t_hi, int(r.hi_certified),
              r.unknown, r.evaluations);
  return 0;
}
