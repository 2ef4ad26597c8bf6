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

#include "wignersim/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace wignersim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw SimError(ErrorCode::ValueOutOfRange, std::string(what) + " must be finite");
  }
}

bool is_permutation_of_levels(const std::vector<int>& perm, int dim) {
  if (static_cast<int>(perm.size()) != dim) return false;
  std::vector<bool> seen(static_cast<std::size_t>(dim), false);
  for (int image : perm) {
    if (image < 0 || image >= dim || seen[static_cast<std::size_t>(image)]) return false;
    seen[static_cast<std::size_t>(image)] = true;
  }
  return true;
}

std::vector<int> identity_perm(int dim) {
  std::vector<int> perm(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) perm[static_cast<std::size_t>(k)] = k;
  return perm;
}

void check_copy_perms(const CopyIntoStep& step, int src_dim, int dst_dim) {
  if (static_cast<int>(step.perms.size()) != src_dim) {
    throw SimError(ErrorCode::NonPermutation,
                   "copy-into needs one destination permutation per source level (" +
                       std::to_string(src_dim) + "), got " + std::to_string(step.perms.size()));
  }
  for (const auto& perm : step.perms) {
    if (!is_permutation_of_levels(perm, dst_dim)) {
      throw SimError(ErrorCode::NonPermutation,
                     "copy-into level map is not a permutation of 0.." +
                         std::to_string(dst_dim - 1));
    }
  }
}

void check_distinct_known(const RegisterLayout& layout, const std::vector<std::string>& names,
                          const char* what) {
  if (names.empty()) {
    throw SimError(ErrorCode::DimensionMismatch,
                   std::string(what) + " needs at least one register");
  }
  std::set<int> seen;
  for (const auto& name : names) {
    if (!seen.insert(layout.require(name)).second) {
      throw SimError(ErrorCode::DimensionMismatch,
                     std::string(what) + " lists register '" + name + "' twice");
    }
  }
}

}  // namespace

bool UnitaryGateStep::operator==(const UnitaryGateStep& other) const {
  if (targets != other.targets) return false;
  if (matrix.rows() != other.matrix.rows() || matrix.cols() != other.matrix.cols()) return false;
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
      if (matrix(r, c) != other.matrix(r, c)) return false;
    }
  }
  return true;
}

const char* step_kind_name(const Step& step) {
  return std::visit(
      overloaded{
          [](const SuperposeStep&) { return "superpose"; },
          [](const CoupleStep&) { return "couple"; },
          [](const CopyIntoStep&) { return "copy-into"; },
          [](const RecordDefiniteStep&) { return "record-definite"; },
          [](const RecordWhichStep&) { return "record-which"; },
          [](const UnitaryGateStep&) { return "unitary"; },
          [](const CollapseSiteStep&) { return "collapse-site"; },
          [](const CheckFactorizedStep&) { return "check-factorized"; },
          [](const ReverseStep&) { return "reverse"; },
          [](const MeasureStep&) { return "measure"; },
          [](const ExpectStep&) { return "expect"; },
      },
      step);
}

bool is_matrix_bearing(const Step& step) {
  return std::holds_alternative<SuperposeStep>(step) || std::holds_alternative<CoupleStep>(step) ||
         std::holds_alternative<CopyIntoStep>(step) ||
         std::holds_alternative<RecordDefiniteStep>(step) ||
         std::holds_alternative<RecordWhichStep>(step) ||
         std::holds_alternative<UnitaryGateStep>(step);
}

bool is_marker(const Step& step) {
  return std::holds_alternative<CollapseSiteStep>(step) ||
         std::holds_alternative<CheckFactorizedStep>(step);
}

LocalOperator lower_step(const Step& step, const RegisterLayout& layout) {
  return std::visit(
      overloaded{
          [&](const SuperposeStep& s) -> LocalOperator {
            int d = layout.dim(layout.require(s.target));
            CMatrix m = CMatrix::Identity(d, d);
            const double c = std::cos(s.theta);
            const double sn = std::sin(s.theta);
            const Complex phase = std::polar(1.0, s.phi);
            m(0, 0) = c;
            m(0, 1) = -std::conj(phase) * sn;
            m(1, 0) = phase * sn;
            m(1, 1) = c;
            return {{s.target}, std::move(m), true};
          },
          [&](const CoupleStep& s) -> LocalOperator {
            int dc = layout.dim(layout.require(s.control));
            int dt = layout.dim(layout.require(s.target));
            CMatrix m = CMatrix::Zero(dc * dt, dc * dt);
            for (int a = 0; a < dc; ++a) {
              for (int b = 0; b < dt; ++b) {
                int image = (a == 1) ? (b + 1) % dt : b;
                m(a * dt + image, a * dt + b) = 1.0;
              }
            }
            return {{s.control, s.target}, std::move(m), true};
          },
          [&](const CopyIntoStep& s) -> LocalOperator {
            int ds = layout.dim(layout.require(s.src));
            int dd = layout.dim(layout.require(s.dst));
            check_copy_perms(s, ds, dd);
            CMatrix m = CMatrix::Zero(ds * dd, ds * dd);
            for (int a = 0; a < ds; ++a) {
              const auto& perm = s.perms[static_cast<std::size_t>(a)];
              for (int b = 0; b < dd; ++b) {
                m(a * dd + perm[static_cast<std::size_t>(b)], a * dd + b) = 1.0;
              }
            }
            return {{s.src, s.dst}, std::move(m), true};
          },
          [&](const RecordDefiniteStep& s) -> LocalOperator {
            int d = layout.dim(layout.require(s.dst));
            CMatrix m = CMatrix::Identity(d, d);
            m(0, 0) = 0.0;
            m(1, 1) = 0.0;
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            return {{s.dst}, std::move(m), true};
          },
          [&](const RecordWhichStep& s) -> LocalOperator {
            int ds = layout.dim(layout.require(s.src));
            int dd = layout.dim(layout.require(s.dst));
            if (ds != 2 || dd < 4) {
              throw SimError(ErrorCode::DimensionMismatch,
                             "record-which needs a 2-level source and a >=4-level destination");
            }
            CMatrix m = CMatrix::Zero(ds * dd, ds * dd);
            for (int a = 0; a < ds; ++a) {
              int swapped = (a == 0) ? 2 : 3;
              for (int b = 0; b < dd; ++b) {
                int image = b;
                if (b == 0) image = swapped;
                if (b == swapped) image = 0;
                m(a * dd + image, a * dd + b) = 1.0;
              }
            }
            return {{s.src, s.dst}, std::move(m), true};
          },
          [&](const UnitaryGateStep& s) -> LocalOperator {
            return {s.targets, s.matrix, true};
          },
          [&](const auto& s) -> LocalOperator {
            throw SimError(ErrorCode::NotInvertible,
                           std::string(step_kind_name(Step{s})) + " has no matrix");
          },
      },
      step);
}

std::vector<Step> invert_step(const Step& step, const RegisterLayout& layout) {
  return std::visit(
      overloaded{
          [&](const SuperposeStep& s) -> std::vector<Step> {
            return {SuperposeStep{s.target, -s.theta, s.phi}};
          },
          [&](const CoupleStep& s) -> std::vector<Step> {
            int dc = layout.dim(layout.require(s.control));
            int dt = layout.dim(layout.require(s.target));
            if (dt == 2) return {s};  // conditional swap is an involution
            CopyIntoStep dec{s.control, s.target, {}};
            dec.perms.assign(static_cast<std::size_t>(dc), identity_perm(dt));
            for (int b = 0; b < dt; ++b) {
              dec.perms[1][static_cast<std::size_t>(b)] = (b + dt - 1) % dt;
            }
            return {std::move(dec)};
          },
          [&](const CopyIntoStep& s) -> std::vector<Step> {
            check_copy_perms(s, layout.dim(layout.require(s.src)),
                             layout.dim(layout.require(s.dst)));
            CopyIntoStep inv{s.src, s.dst, s.perms};
            for (std::size_t a = 0; a < s.perms.size(); ++a) {
              for (std::size_t b = 0; b < s.perms[a].size(); ++b) {
                inv.perms[a][static_cast<std::size_t>(s.perms[a][b])] = static_cast<int>(b);
              }
            }
            return {std::move(inv)};
          },
          [&](const RecordDefiniteStep& s) -> std::vector<Step> { return {s}; },
          [&](const RecordWhichStep& s) -> std::vector<Step> { return {s}; },
          [&](const UnitaryGateStep& s) -> std::vector<Step> {
            return {UnitaryGateStep{s.targets, s.matrix.adjoint()}};
          },
          [&](const CollapseSiteStep&) -> std::vector<Step> { return {}; },
          [&](const CheckFactorizedStep&) -> std::vector<Step> { return {}; },
          [&](const auto& s) -> std::vector<Step> {
            throw SimError(ErrorCode::NotInvertible,
                           std::string(step_kind_name(Step{s})) + " steps are not invertible");
          },
      },
      step);
}

std::vector<Step> compile_reverse(const Protocol& protocol, int from, int to) {
  if (from > to) return {};
  if (from < 1 || to > static_cast<int>(protocol.steps.size())) {
    throw SimError(ErrorCode::ReverseOutOfRange,
                   "reverse range " + std::to_string(from) + ".." + std::to_string(to) +
                       " outside step list");
  }
  std::vector<Step> out;
  for (int i = to; i >= from; --i) {
    auto inverse = invert_step(protocol.steps[static_cast<std::size_t>(i - 1)], protocol.layout);
    out.insert(out.end(), inverse.begin(), inverse.end());
  }
  return out;
}

namespace {

// Per-step invariant checks. Throws SimError; validate() converts to issues.
void check_step(const Step& step, const RegisterLayout& layout,
                const std::vector<Step>& steps, int index) {
  std::visit(
      overloaded{
          [&](const SuperposeStep& s) {
            layout.require(s.target);
            require_finite(s.theta, "theta");
            require_finite(s.phi, "phi");
          },
          [&](const CoupleStep& s) {
            check_distinct_known(layout, {s.control, s.target}, "couple");
          },
          [&](const CopyIntoStep& s) {
            check_distinct_known(layout, {s.src, s.dst}, "copy-into");
            check_copy_perms(s, layout.dim(layout.require(s.src)),
                             layout.dim(layout.require(s.dst)));
          },
          [&](const RecordDefiniteStep& s) { layout.require(s.dst); },
          [&](const RecordWhichStep& s) {
            check_distinct_known(layout, {s.src, s.dst}, "record-which");
            if (layout.dim(layout.require(s.src)) != 2) {
              throw SimError(ErrorCode::DimensionMismatch,
                             "record-which source '" + s.src + "' must be 2-level");
            }
            if (layout.dim(layout.require(s.dst)) < 4) {
              throw SimError(ErrorCode::DimensionMismatch,
                             "record-which destination '" + s.dst + "' needs at least 4 levels");
            }
          },
          [&](const UnitaryGateStep& s) {
            check_distinct_known(layout, s.targets, "unitary");
            std::int64_t block = 1;
            for (const auto& name : s.targets) block *= layout.dim(layout.require(name));
            if (block > kMaxInlineMatrixDim) {
              throw SimError(ErrorCode::DimensionMismatch,
                             "inline unitary spans dim " + std::to_string(block) +
                                 ", cap is " + std::to_string(kMaxInlineMatrixDim));
            }
            if (s.matrix.rows() != s.matrix.cols() || s.matrix.rows() != block) {
              throw SimError(ErrorCode::DimensionMismatch,
                             "unitary matrix is " + std::to_string(s.matrix.rows()) + "x" +
                                 std::to_string(s.matrix.cols()) + ", targets span dim " +
                                 std::to_string(block));
            }
          },
          [&](const CollapseSiteStep& s) {
            check_distinct_known(layout, s.registers, "collapse-site");
          },
          [&](const CheckFactorizedStep& s) {
            layout.require(s.target);
            require_finite(s.tol, "tol");
            if (s.tol <= 0.0) {
              throw SimError(ErrorCode::ValueOutOfRange, "check-factorized tol must be positive");
            }
            if (layout.register_count() < 2) {
              throw SimError(ErrorCode::InvalidPartition,
                             "check-factorized needs a layout with at least two registers");
            }
          },
          [&](const ReverseStep& s) {
            if (s.from < 1 || s.to < s.from) {
              throw SimError(ErrorCode::ReverseOutOfRange,
                             "reverse range " + std::to_string(s.from) + ".." +
                                 std::to_string(s.to) + " is malformed");
            }
            if (s.to >= index) {
              throw SimError(ErrorCode::SelfReferentialReverse,
                             "reverse range must reference strictly earlier steps");
            }
            for (int j = s.from; j <= s.to; ++j) {
              const Step& covered = steps[static_cast<std::size_t>(j - 1)];
              if (std::holds_alternative<ReverseStep>(covered)) {
                throw SimError(ErrorCode::ReverseContainsReverse,
                               "reverse range covers the reverse step at " + std::to_string(j));
              }
              if (std::holds_alternative<MeasureStep>(covered)) {
                throw SimError(ErrorCode::ReverseContainsMeasure,
                               "reverse range covers the measure step at " + std::to_string(j));
              }
              if (std::holds_alternative<ExpectStep>(covered)) {
                throw SimError(ErrorCode::ReverseContainsExpect,
                               "reverse range covers the expect step at " + std::to_string(j));
              }
            }
          },
          [&](const MeasureStep& s) {
            if (!s.all) check_distinct_known(layout, s.registers, "measure");
          },
          [&](const ExpectStep& s) {
            if (s.assignment.empty()) {
              throw SimError(ErrorCode::DimensionMismatch, "expect needs at least one assignment");
            }
            for (const auto& [name, value] : s.assignment) {
              int reg = layout.require(name);
              if (value < 0 || value >= layout.dim(reg)) {
                throw SimError(ErrorCode::ValueOutOfRange,
                               "expect value " + std::to_string(value) +
                                   " out of range for register '" + name + "'");
              }
            }
            require_finite(s.prob, "prob");
            if (s.prob < 0.0 || s.prob > 1.0) {
              throw SimError(ErrorCode::ValueOutOfRange, "expect prob must lie in [0,1]");
            }
            require_finite(s.tol, "tol");
            if (s.tol < 0.0) {
              throw SimError(ErrorCode::ValueOutOfRange, "expect tol must be nonnegative");
            }
          },
      },
      step);
}

}  // namespace

ValidatedProtocol validate(Protocol protocol, std::int64_t max_dim) {
  std::vector<ValidationIssue> issues;
  auto span_of = [&](std::size_t i) -> std::optional<SourceSpan> {
    if (i < protocol.step_spans.size()) return protocol.step_spans[i];
    return std::nullopt;
  };
  auto report = [&](int step_index, ErrorCode code, std::string message,
                    std::optional<SourceSpan> span) {
    issues.push_back({step_index, code, std::move(message), span});
  };

  // Protocol-level: name, layout cap, full init coverage.
  if (!valid_register_name(protocol.name)) {
    report(0, ErrorCode::InvalidName, "protocol name '" + protocol.name + "' is not an identifier",
           std::nullopt);
  }
  if (!protocol.layout.total_dim_exact() || protocol.layout.total_dim() > max_dim) {
    report(0, ErrorCode::SystemTooLarge,
           "joint dimension exceeds the cap of " + std::to_string(max_dim), std::nullopt);
  }
  try {
    basis_index(protocol.layout, protocol.init);
  } catch (const SimError& e) {
    report(0, e.code(), std::string("init: ") + e.what(), std::nullopt);
  }

  ValidatedProtocol out;
  out.max_dim = max_dim;
  out.lowered.assign(protocol.steps.size(), std::nullopt);
  out.reverse_steps.assign(protocol.steps.size(), {});
  out.reverse_lowered.assign(protocol.steps.size(), {});

  bool seen_expect = false;
  for (std::size_t i = 0; i < protocol.steps.size(); ++i) {
    const Step& step = protocol.steps[i];
    const int index = static_cast<int>(i) + 1;

    // Placement: at most one measure, trailing; expects only after it or at the end.
    if (out.measure_index && !std::holds_alternative<ExpectStep>(step)) {
      if (std::holds_alternative<MeasureStep>(step)) {
        report(index, ErrorCode::MultipleMeasure, "only one measure step is allowed", span_of(i));
      } else {
        report(index, ErrorCode::StepAfterMeasure,
               std::string(step_kind_name(step)) + " step after measure; only expect may follow",
               span_of(i));
      }
    } else if (seen_expect && !std::holds_alternative<ExpectStep>(step)) {
      report(index, ErrorCode::ExpectNotTrailing,
             std::string(step_kind_name(step)) + " step after expect; expect steps must trail",
             span_of(i));
    }
    if (std::holds_alternative<MeasureStep>(step) && !out.measure_index) {
      out.measure_index = i;
    }
    if (std::holds_alternative<ExpectStep>(step)) {
      seen_expect = true;
      out.expect_indices.push_back(i);
    }

    try {
      check_step(step, protocol.layout, protocol.steps, index);
      if (is_matrix_bearing(step)) {
        LocalOperator op = lower_step(step, protocol.layout);
        double err = unitarity_error(op.matrix);
        if (!(err <= kUnitaryTol)) {
          throw SimError(ErrorCode::NonUnitaryMatrix,
                         "lowered matrix deviates from unitarity by " + std::to_string(err));
        }
        out.lowered[i] = std::move(op);
      } else if (const auto* rev = std::get_if<ReverseStep>(&step)) {
        auto expansion = compile_reverse(protocol, rev->from, rev->to);
        for (const Step& inv : expansion) {
          out.reverse_lowered[i].push_back(lower_step(inv, protocol.layout));
        }
        out.reverse_steps[i] = std::move(expansion);
      }
    } catch (const SimError& e) {
      report(index, e.code(), e.what(), span_of(i));
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));

  if (out.measure_index) {
    const auto& m = std::get<MeasureStep>(protocol.steps[*out.measure_index]);
    if (m.all) {
      for (const auto& reg : protocol.layout.registers()) {
        out.measured_registers.push_back(reg.name);
      }
    } else {
      out.measured_registers = m.registers;
    }
  }

  out.return_reference = protocol.init;
  for (std::size_t i : out.expect_indices) {
    const auto& expect = std::get<ExpectStep>(protocol.steps[i]);
    if (expect.prob == 1.0) {
      for (const auto& [name, value] : expect.assignment) {
        out.return_reference[name] = value;
      }
    }
  }

  out.protocol = std::move(protocol);
  return out;
}

Protocol expand_reverses(const Protocol& protocol) {
  Protocol out;
  out.name = protocol.name;
  out.layout = protocol.layout;
  out.init = protocol.init;
  for (const Step& step : protocol.steps) {
    if (const auto* rev = std::get_if<ReverseStep>(&step)) {
      auto expansion = compile_reverse(protocol, rev->from, rev->to);
      out.steps.insert(out.steps.end(), expansion.begin(), expansion.end());
    } else {
      out.steps.push_back(step);
    }
  }
  return out;
}

namespace {

Protocol make_lab_protocol(bool which_outcome) {
  Protocol p;
  p.name = which_outcome ? "which-outcome" : "deutsch-wigner";
  p.layout = RegisterLayout::make({{"atom", 2}, {"poison", 2}, {"cat", 2}, {"bob", 2}, {"paper", 4}});
  p.init = {{"atom", 0}, {"poison", 0}, {"cat", 0}, {"bob", 0}, {"paper", 0}};
  p.steps.push_back(SuperposeStep{"atom", std::numbers::pi / 4.0, 0.0});
  p.steps.push_back(CoupleStep{"atom", "poison"});
  p.steps.push_back(CoupleStep{"poison", "cat"});
  p.steps.push_back(CoupleStep{"cat", "bob"});
  p.steps.push_back(CollapseSiteStep{{"bob"}});
  if (which_outcome) {
    p.steps.push_back(RecordWhichStep{"bob", "paper"});
  } else {
    p.steps.push_back(RecordDefiniteStep{"paper"});
    p.steps.push_back(CheckFactorizedStep{"paper", 1e-10});
  }
  p.steps.push_back(ReverseStep{1, 4});
  p.steps.push_back(MeasureStep{true, {}});
  if (which_outcome) {
    p.steps.push_back(ExpectStep{{{"atom", 0}, {"poison", 0}, {"cat", 0}, {"bob", 0}}, 0.5, 0.01});
  } else {
    p.steps.push_back(ExpectStep{
        {{"atom", 0}, {"poison", 0}, {"cat", 0}, {"bob", 0}, {"paper", 1}}, 1.0, 1e-9});
  }
  return p;
}

Protocol make_photon_mirror() {
  Protocol p;
  p.name = "photon-mirror";
  p.layout = RegisterLayout::make({{"photon", 2}, {"mirror", 2}});
  p.init = {{"photon", 0}, {"mirror", 0}};
  p.steps.push_back(SuperposeStep{"photon", std::numbers::pi / 4.0, 0.0});
  p.steps.push_back(CoupleStep{"photon", "mirror"});
  p.steps.push_back(CollapseSiteStep{{"mirror"}});
  p.steps.push_back(ReverseStep{1, 2});
  p.steps.push_back(MeasureStep{true, {}});
  p.steps.push_back(ExpectStep{{{"photon", 0}, {"mirror", 0}}, 1.0, 1e-9});
  return p;
}

Protocol make_chain(int n) {
  Protocol p;
  p.name = "chain-" + std::to_string(n);
  std::vector<RegisterLayout::Register> regs;
  std::map<std::string, int> init;
  ExpectStep expect;
  for (int k = 0; k < n; ++k) {
    std::string name = "q" + std::to_string(k);
    regs.push_back({name, 2});
    init[name] = 0;
    expect.assignment[name] = 0;
  }
  expect.prob = 1.0;
  expect.tol = 1e-9;
  p.layout = RegisterLayout::make(std::move(regs));
  p.init = std::move(init);
  p.steps.push_back(SuperposeStep{"q0", std::numbers::pi / 4.0, 0.0});
  for (int k = 0; k + 1 < n; ++k) {
    p.steps.push_back(CoupleStep{"q" + std::to_string(k), "q" + std::to_string(k + 1)});
  }
  p.steps.push_back(ReverseStep{1, n});
  p.steps.push_back(MeasureStep{true, {}});
  p.steps.push_back(std::move(expect));
  return p;
}

}  // namespace

Protocol builtin(std::string_view name) {
  if (name == "deutsch-wigner") return make_lab_protocol(false);
  if (name == "which-outcome") return make_lab_protocol(true);
  if (name == "photon-mirror") return make_photon_mirror();
  constexpr std::string_view prefix = "chain-";
  if (name.starts_with(prefix)) {
    std::string_view digits = name.substr(prefix.size());
    int n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && n >= 2 && n <= 9999) {
      return make_chain(n);
    }
  }
  throw SimError(ErrorCode::UnknownBuiltin,
                 "unknown builtin protocol '" + std::string(name) +
                     "'; available: deutsch-wigner, which-outcome, photon-mirror, chain-N (N>=2)");
}

}  // namespace wignersim
