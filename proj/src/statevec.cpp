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

#include "wignersim/statevec.hpp"

#include <algorithm>
#include <cmath>

namespace wignersim {

namespace {

// Resolved target set of a local operator: block size m, the m scatter
// offsets inside one block, and the remaining registers in layout order.
struct TargetPlan {
  std::vector<int> targets;
  std::vector<int> rest;
  std::int64_t block = 1;
  std::vector<std::int64_t> offsets;
};

TargetPlan plan_targets(const RegisterLayout& layout, std::span<const std::string> names) {
  if (names.empty()) {
    throw SimError(ErrorCode::DimensionMismatch, "operator has no target registers");
  }
  TargetPlan plan;
  plan.targets.reserve(names.size());
  for (const auto& name : names) {
    int idx = layout.require(name);
    if (std::find(plan.targets.begin(), plan.targets.end(), idx) != plan.targets.end()) {
      throw SimError(ErrorCode::DimensionMismatch, "duplicate target register '" + name + "'");
    }
    plan.targets.push_back(idx);
    plan.block *= layout.dim(idx);
  }
  plan.offsets.assign(static_cast<std::size_t>(plan.block), 0);
  for (std::int64_t j = 0; j < plan.block; ++j) {
    std::int64_t rem = j;
    std::int64_t off = 0;
    for (int k = static_cast<int>(plan.targets.size()) - 1; k >= 0; --k) {
      int reg = plan.targets[static_cast<std::size_t>(k)];
      off += (rem % layout.dim(reg)) * layout.stride(reg);
      rem /= layout.dim(reg);
    }
    plan.offsets[static_cast<std::size_t>(j)] = off;
  }
  for (int k = 0; k < layout.register_count(); ++k) {
    if (std::find(plan.targets.begin(), plan.targets.end(), k) == plan.targets.end()) {
      plan.rest.push_back(k);
    }
  }
  return plan;
}

void check_matrix_shape(const CMatrix& matrix, std::int64_t block) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != block) {
    throw SimError(ErrorCode::DimensionMismatch,
                   "matrix is " + std::to_string(matrix.rows()) + "x" +
                       std::to_string(matrix.cols()) + ", targets span dim " +
                       std::to_string(block));
  }
}

// Walks every configuration of `rest`, invoking fn with the base joint index.
template <typename Fn>
void for_each_rest_config(const RegisterLayout& layout, const std::vector<int>& rest, Fn&& fn) {
  std::vector<int> digits(rest.size(), 0);
  std::int64_t count = 1;
  for (int reg : rest) count *= layout.dim(reg);
  std::int64_t base = 0;
  for (std::int64_t r = 0; r < count; ++r) {
    fn(base);
    for (int k = static_cast<int>(rest.size()) - 1; k >= 0; --k) {
      int reg = rest[static_cast<std::size_t>(k)];
      base += layout.stride(reg);
      if (++digits[static_cast<std::size_t>(k)] < layout.dim(reg)) break;
      base -= layout.stride(reg) * layout.dim(reg);
      digits[static_cast<std::size_t>(k)] = 0;
    }
  }
}

std::vector<int> resolve_registers(const RegisterLayout& layout,
                                   std::span<const std::string> names, ErrorCode dup_code,
                                   const char* what) {
  if (names.empty()) {
    throw SimError(dup_code, std::string(what) + " needs at least one register");
  }
  std::vector<int> idx;
  idx.reserve(names.size());
  for (const auto& name : names) {
    int k = layout.require(name);
    if (std::find(idx.begin(), idx.end(), k) != idx.end()) {
      throw SimError(dup_code, std::string(what) + " lists register '" + name + "' twice");
    }
    idx.push_back(k);
  }
  return idx;
}

}  // namespace

std::int64_t basis_index(const RegisterLayout& layout, const std::map<std::string, int>& assignment) {
  for (const auto& [name, value] : assignment) {
    layout.require(name);
    (void)value;
  }
  std::vector<int> values(static_cast<std::size_t>(layout.register_count()));
  for (int k = 0; k < layout.register_count(); ++k) {
    auto it = assignment.find(layout.reg(k).name);
    if (it == assignment.end()) {
      throw SimError(ErrorCode::MissingRegister,
                     "assignment misses register '" + layout.reg(k).name + "'");
    }
    values[static_cast<std::size_t>(k)] = it->second;
  }
  return mixed_radix_index(layout, values);
}

StateVector basis_state(const RegisterLayout& layout, const std::map<std::string, int>& assignment) {
  std::int64_t index = basis_index(layout, assignment);
  StateVector state{layout, CVector::Zero(layout.total_dim())};
  state.amps[index] = Complex{1.0, 0.0};
  return state;
}

double norm_sq(const StateVector& state) { return state.amps.squaredNorm(); }

double unitarity_error(const CMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) return 1.0;
  CMatrix gram = matrix.adjoint() * matrix;
  gram -= CMatrix::Identity(matrix.rows(), matrix.cols());
  return gram.cwiseAbs().maxCoeff();
}

void apply_local_in_place(StateVector& state, const LocalOperator& op) {
  TargetPlan plan = plan_targets(state.layout, op.targets);
  check_matrix_shape(op.matrix, plan.block);
  if (op.unitary) {
    double err = unitarity_error(op.matrix);
    if (!(err <= kUnitaryTol)) {
      throw SimError(ErrorCode::NonUnitaryMatrix,
                     "operator marked unitary deviates from unitarity by " + std::to_string(err));
    }
  }
  const std::int64_t m = plan.block;
  CVector scratch(m), image(m);
  for_each_rest_config(state.layout, plan.rest, [&](std::int64_t base) {
    for (std::int64_t j = 0; j < m; ++j) {
      scratch[j] = state.amps[base + plan.offsets[static_cast<std::size_t>(j)]];
    }
    image.noalias() = op.matrix * scratch;
    for (std::int64_t j = 0; j < m; ++j) {
      state.amps[base + plan.offsets[static_cast<std::size_t>(j)]] = image[j];
    }
  });
}

StateVector apply_local(StateVector state, const LocalOperator& op) {
  apply_local_in_place(state, op);
  return state;
}

CMatrix dense_embed(const LocalOperator& op, const RegisterLayout& layout) {
  std::int64_t total = layout.total_dim();
  if (total > kMaxOracleDim) {
    throw SimError(ErrorCode::SystemTooLargeForOracle,
                   "dense embedding capped at joint dim " + std::to_string(kMaxOracleDim) +
                       ", layout has " + std::to_string(total));
  }
  std::vector<int> targets =
      resolve_registers(layout, op.targets, ErrorCode::DimensionMismatch, "operator");
  std::int64_t block = 1;
  for (int reg : targets) block *= layout.dim(reg);
  check_matrix_shape(op.matrix, block);

  // Independent route: every entry goes through decode/encode digit
  // arithmetic rather than the kernel's offset table, so the two paths
  // share no index computation.
  CMatrix embedded = CMatrix::Zero(total, total);
  for (std::int64_t col = 0; col < total; ++col) {
    std::vector<int> digits = decode_index(layout, col);
    std::int64_t tcol = 0;
    for (int reg : targets) {
      tcol = tcol * layout.dim(reg) + digits[static_cast<std::size_t>(reg)];
    }
    std::vector<int> row_digits = digits;
    for (std::int64_t trow = 0; trow < block; ++trow) {
      std::int64_t rem = trow;
      for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
        int reg = targets[static_cast<std::size_t>(k)];
        row_digits[static_cast<std::size_t>(reg)] = static_cast<int>(rem % layout.dim(reg));
        rem /= layout.dim(reg);
      }
      embedded(mixed_radix_index(layout, row_digits), col) = op.matrix(trow, tcol);
    }
  }
  return embedded;
}

MeasurementOutcome measure_in_place(StateVector& state, std::span<const std::string> registers,
                                    double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw SimError(ErrorCode::ValueOutOfRange, "measurement uniform must lie in [0,1)");
  }
  std::vector<int> idx =
      resolve_registers(state.layout, registers, ErrorCode::DimensionMismatch, "measure");

  std::int64_t joint_dim = 1;
  for (int reg : idx) joint_dim *= state.layout.dim(reg);

  // joint value of index i, first listed register most significant
  auto joint_of = [&](std::int64_t i) {
    std::int64_t joint = 0;
    for (int reg : idx) {
      joint = joint * state.layout.dim(reg) +
              (i / state.layout.stride(reg)) % state.layout.dim(reg);
    }
    return joint;
  };

  const std::int64_t total_dim = state.layout.total_dim();
  std::vector<double> buckets(static_cast<std::size_t>(joint_dim), 0.0);
  for (std::int64_t i = 0; i < total_dim; ++i) {
    buckets[static_cast<std::size_t>(joint_of(i))] += std::norm(state.amps[i]);
  }

  double total = 0.0;
  for (double p : buckets) total += p;
  if (total < kDegenerateTol) {
    throw SimError(ErrorCode::DegenerateState,
                   "total measured probability " + std::to_string(total) +
                       " is degenerate; upstream norm bug");
  }

  // Inverse CDF over joint values in ascending order. Scaling u by the raw
  // total keeps selection exact under tiny norm drift.
  const double needle = u * total;
  std::int64_t chosen = -1;
  double cumulative = 0.0;
  for (std::int64_t j = 0; j < joint_dim; ++j) {
    cumulative += buckets[static_cast<std::size_t>(j)];
    if (needle < cumulative) {
      chosen = j;
      break;
    }
  }
  if (chosen < 0) {
    for (std::int64_t j = joint_dim - 1; j >= 0; --j) {
      if (buckets[static_cast<std::size_t>(j)] > 0.0) {
        chosen = j;
        break;
      }
    }
  }

  const double prob = buckets[static_cast<std::size_t>(chosen)];
  const double scale = 1.0 / std::sqrt(prob);
  for (std::int64_t i = 0; i < total_dim; ++i) {
    if (joint_of(i) == chosen) {
      state.amps[i] *= scale;
    } else {
      state.amps[i] = Complex{0.0, 0.0};
    }
  }

  MeasurementOutcome outcome;
  outcome.registers.assign(registers.begin(), registers.end());
  outcome.values.resize(idx.size());
  std::int64_t rem = chosen;
  for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
    int reg = idx[static_cast<std::size_t>(k)];
    outcome.values[static_cast<std::size_t>(k)] = static_cast<int>(rem % state.layout.dim(reg));
    rem /= state.layout.dim(reg);
  }
  outcome.probability = prob;
  return outcome;
}

std::pair<MeasurementOutcome, StateVector> measure(StateVector state,
                                                   std::span<const std::string> registers,
                                                   double u) {
  MeasurementOutcome outcome = measure_in_place(state, registers, u);
  return {std::move(outcome), std::move(state)};
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.layout == b.layout)) {
    throw SimError(ErrorCode::LayoutMismatch, "fidelity of states over different layouts");
  }
  return std::norm(a.amps.dot(b.amps));
}

double reduced_purity(const StateVector& state, std::span<const std::string> part) {
  std::vector<int> idx =
      resolve_registers(state.layout, part, ErrorCode::InvalidPartition, "partition");
  if (static_cast<int>(idx.size()) >= state.layout.register_count()) {
    throw SimError(ErrorCode::InvalidPartition, "partition must be a proper subset of registers");
  }

  std::int64_t part_dim = 1;
  for (int reg : idx) part_dim *= state.layout.dim(reg);
  const std::int64_t total_dim = state.layout.total_dim();
  const std::int64_t rest_dim = total_dim / part_dim;

  std::vector<int> rest;
  for (int k = 0; k < state.layout.register_count(); ++k) {
    if (std::find(idx.begin(), idx.end(), k) == idx.end()) rest.push_back(k);
  }

  // Reshape amps into a part_dim x rest_dim matrix and take the Frobenius
  // norm of the smaller Gram matrix: Tr((MM^dagger)^2) = Tr((M^dagger M)^2).
  CMatrix reshaped(part_dim, rest_dim);
  for (std::int64_t i = 0; i < total_dim; ++i) {
    std::int64_t p = 0;
    for (int reg : idx) {
      p = p * state.layout.dim(reg) + (i / state.layout.stride(reg)) % state.layout.dim(reg);
    }
    std::int64_t r = 0;
    for (int reg : rest) {
      r = r * state.layout.dim(reg) + (i / state.layout.stride(reg)) % state.layout.dim(reg);
    }
    reshaped(p, r) = state.amps[i];
  }

  double purity;
  if (part_dim <= rest_dim) {
    purity = (reshaped * reshaped.adjoint()).squaredNorm();
  } else {
    purity = (reshaped.adjoint() * reshaped).squaredNorm();
  }
  if (purity > 1.0 && purity < 1.0 + kNormTol) purity = 1.0;
  if (purity < 0.0 && purity > -kNormTol) purity = 0.0;
  return purity;
}

double marginal_probability(const StateVector& state, const std::map<std::string, int>& assignment) {
  std::vector<std::pair<int, int>> constraints;
  constraints.reserve(assignment.size());
  for (const auto& [name, value] : assignment) {
    int reg = state.layout.require(name);
    if (value < 0 || value >= state.layout.dim(reg)) {
      throw SimError(ErrorCode::ValueOutOfRange,
                     "value " + std::to_string(value) + " out of range for register '" + name + "'");
    }
    constraints.emplace_back(reg, value);
  }
  const std::int64_t total_dim = state.layout.total_dim();
  double prob = 0.0;
  for (std::int64_t i = 0; i < total_dim; ++i) {
    bool match = true;
    for (const auto& [reg, value] : constraints) {
      if ((i / state.layout.stride(reg)) % state.layout.dim(reg) != value) {
        match = false;
        break;
      }
    }
    if (match) prob += std::norm(state.amps[i]);
  }
  return prob;
}

}  // namespace wignersim
