// Copyright 2026 The wignersim Authors
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

// Test-only generators and brute-force oracles. Everything here stays
// independent of the library's strided kernels: indices are recomputed from
// scratch and density matrices are built by explicit double loops.

#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "wignersim/protocol.hpp"
#include "wignersim/statevec.hpp"

namespace wignersim::testing {

// All basis tuples of `dims` in ascending mixed-radix order, first digit
// most significant. Oracle for the index arithmetic.
inline std::vector<std::vector<int>> enumerate_tuples(const std::vector<int>& dims) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(dims.size(), 0);
  while (true) {
    out.push_back(tuple);
    int k = static_cast<int>(dims.size()) - 1;
    while (k >= 0) {
      if (++tuple[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      tuple[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

inline CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CMatrix ginibre(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      ginibre(r, c) = Complex{gauss(rng), gauss(rng)};
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    Complex diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

inline StateVector random_state(const RegisterLayout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  StateVector state{layout, CVector(layout.total_dim())};
  for (std::int64_t i = 0; i < layout.total_dim(); ++i) {
    state.amps[i] = Complex{gauss(rng), gauss(rng)};
  }
  state.amps /= state.amps.norm();
  return state;
}

inline RegisterLayout random_layout(std::mt19937_64& rng, std::int64_t max_total) {
  std::uniform_int_distribution<int> count_dist(1, 5);
  std::uniform_int_distribution<int> dim_dist(2, 16);
  while (true) {
    int count = count_dist(rng);
    std::vector<RegisterLayout::Register> regs;
    std::int64_t total = 1;
    for (int k = 0; k < count; ++k) {
      int dim = dim_dist(rng);
      total *= dim;
      regs.push_back({"r" + std::to_string(k), dim});
    }
    if (total <= max_total) return RegisterLayout::make(std::move(regs));
  }
}

// Brute-force purity oracle: assembles the reduced density matrix entry by
// entry over all joint-index pairs, then sums |rho|^2.
inline double purity_oracle(const StateVector& state, const std::vector<std::string>& part) {
  const RegisterLayout& layout = state.layout;
  std::vector<int> part_idx;
  for (const auto& name : part) part_idx.push_back(layout.require(name));

  std::int64_t part_dim = 1;
  for (int reg : part_idx) part_dim *= layout.dim(reg);

  auto part_value = [&](std::int64_t i) {
    std::int64_t p = 0;
    for (int reg : part_idx) {
      p = p * layout.dim(reg) + (i / layout.stride(reg)) % layout.dim(reg);
    }
    return p;
  };
  auto rest_matches = [&](std::int64_t i, std::int64_t j) {
    for (int reg = 0; reg < layout.register_count(); ++reg) {
      bool in_part = false;
      for (int pr : part_idx) {
        if (pr == reg) in_part = true;
      }
      if (in_part) continue;
      if ((i / layout.stride(reg)) % layout.dim(reg) !=
          (j / layout.stride(reg)) % layout.dim(reg)) {
        return false;
      }
    }
    return true;
  };

  const std::int64_t total = layout.total_dim();
  CMatrix rho = CMatrix::Zero(part_dim, part_dim);
  for (std::int64_t i = 0; i < total; ++i) {
    if (state.amps[i] == Complex{0.0, 0.0}) continue;
    for (std::int64_t j = 0; j < total; ++j) {
      if (!rest_matches(i, j)) continue;
      rho(part_value(i), part_value(j)) += state.amps[i] * std::conj(state.amps[j]);
    }
  }
  CMatrix rho_sq = rho * rho;
  double purity = 0.0;
  for (std::int64_t a = 0; a < part_dim; ++a) purity += std::real(rho_sq(a, a));
  return purity;
}

// A random valid protocol exercising the whole step vocabulary. Register
// names come from a fixed pool; reverse ranges avoid control steps; an
// optional trailing measure+expect pair is appended.
inline Protocol random_protocol(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> angle(-3.2, 3.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  static const std::vector<std::string> name_pool{"alpha", "q0",  "cat-2", "_tmp",
                                                  "zz9",   "m_x", "beta7", "probe"};
  std::uniform_int_distribution<int> reg_count_dist(1, 4);
  const int reg_count = reg_count_dist(rng);
  std::vector<RegisterLayout::Register> regs;
  std::uniform_int_distribution<int> dim_dist(2, 6);
  for (int k = 0; k < reg_count; ++k) {
    regs.push_back({name_pool[static_cast<std::size_t>(k) + (coin(rng) ? 4 : 0)], dim_dist(rng)});
  }

  Protocol p;
  p.name = "fuzz-" + std::to_string(rng() % 100000);
  p.layout = RegisterLayout::make(regs);
  for (const auto& reg : p.layout.registers()) {
    p.init[reg.name] = static_cast<int>(rng() % static_cast<std::uint64_t>(reg.dim));
  }

  auto random_register = [&]() -> int {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(reg_count));
  };

  std::uniform_int_distribution<int> step_count_dist(0, 10);
  const int step_count = step_count_dist(rng);
  for (int s = 0; s < step_count; ++s) {
    switch (rng() % 8) {
      case 0:
        p.steps.push_back(
            SuperposeStep{p.layout.reg(random_register()).name, angle(rng), angle(rng)});
        break;
      case 1: {
        if (reg_count < 2) break;
        int a = random_register(), b = random_register();
        if (a == b) break;
        p.steps.push_back(CoupleStep{p.layout.reg(a).name, p.layout.reg(b).name});
        break;
      }
      case 2: {
        if (reg_count < 2) break;
        int a = random_register(), b = random_register();
        if (a == b) break;
        CopyIntoStep step{p.layout.reg(a).name, p.layout.reg(b).name, {}};
        for (int v = 0; v < p.layout.dim(a); ++v) {
          std::vector<int> perm(static_cast<std::size_t>(p.layout.dim(b)));
          for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
          std::shuffle(perm.begin(), perm.end(), rng);
          step.perms.push_back(std::move(perm));
        }
        p.steps.push_back(std::move(step));
        break;
      }
      case 3:
        p.steps.push_back(RecordDefiniteStep{p.layout.reg(random_register()).name});
        break;
      case 4: {
        int src = -1, dst = -1;
        for (int k = 0; k < reg_count; ++k) {
          if (p.layout.dim(k) == 2 && src < 0) src = k;
          if (p.layout.dim(k) >= 4 && dst < 0) dst = k;
        }
        if (src < 0 || dst < 0 || src == dst) break;
        p.steps.push_back(RecordWhichStep{p.layout.reg(src).name, p.layout.reg(dst).name});
        break;
      }
      case 5: {
        int target = random_register();
        p.steps.push_back(UnitaryGateStep{{p.layout.reg(target).name},
                                          random_unitary(p.layout.dim(target), rng)});
        break;
      }
      case 6: {
        if (coin(rng)) {
          p.steps.push_back(CollapseSiteStep{{p.layout.reg(random_register()).name}});
        } else if (reg_count >= 2) {
          p.steps.push_back(
              CheckFactorizedStep{p.layout.reg(random_register()).name,
                                  std::pow(10.0, -(1 + static_cast<int>(rng() % 9)))});
        }
        break;
      }
      case 7: {
        int last_control = 0;
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
          if (std::holds_alternative<ReverseStep>(p.steps[i])) {
            last_control = static_cast<int>(i) + 1;
          }
        }
        int lo = last_control + 1;
        int hi = static_cast<int>(p.steps.size());
        if (lo > hi) break;
        int from = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
        int to = from + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - from + 1));
        p.steps.push_back(ReverseStep{from, to});
        break;
      }
    }
  }

  if (coin(rng)) {
    if (coin(rng)) {
      p.steps.push_back(MeasureStep{true, {}});
    } else {
      std::vector<std::string> measured;
      for (int k = 0; k < reg_count; ++k) {
        if (coin(rng)) measured.push_back(p.layout.reg(k).name);
      }
      if (measured.empty()) measured.push_back(p.layout.reg(0).name);
      p.steps.push_back(MeasureStep{false, std::move(measured)});
    }
    ExpectStep expect;
    int reg = random_register();
    expect.assignment[p.layout.reg(reg).name] =
        static_cast<int>(rng() % static_cast<std::uint64_t>(p.layout.dim(reg)));
    expect.prob = coin(rng) ? 1.0 : unit(rng);
    expect.tol = unit(rng) * 0.1;
    p.steps.push_back(std::move(expect));
  }
  return p;
}

// The two-branch laboratory state (|0,0,0,0,p0> + |1,1,1,1,p1>)/sqrt(2)
// over (atom, poison, cat, bob, paper:4).
inline StateVector two_branch_state(int paper0, int paper1) {
  RegisterLayout layout = RegisterLayout::make(
      {{"atom", 2}, {"poison", 2}, {"cat", 2}, {"bob", 2}, {"paper", 4}});
  StateVector state{layout, CVector::Zero(layout.total_dim())};
  const double amp = 1.0 / std::sqrt(2.0);
  std::vector<int> alive{0, 0, 0, 0, paper0};
  std::vector<int> dead{1, 1, 1, 1, paper1};
  state.amps[mixed_radix_index(layout, alive)] = amp;
  state.amps[mixed_radix_index(layout, dead)] = amp;
  return state;
}

}  // namespace wignersim::testing
