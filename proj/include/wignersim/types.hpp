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

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace wignersim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Numerical contract, shared by every operation:
//   component comparisons   kCompareTol
//   unitarity of operators  kUnitaryTol
//   norm drift of states    kNormTol
inline constexpr double kCompareTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-9;

// A trial counts as "returned" when the final fidelity clears this bound.
inline constexpr double kReturnTol = 1e-10;

// Total measured probability below this signals an upstream norm bug.
inline constexpr double kDegenerateTol = 1e-12;

inline constexpr int kMinRegisterDim = 2;
inline constexpr int kMaxRegisterDim = 16;

// Joint-space caps. kDefaultMaxDim rejects runaway layouts at validation;
// the oracle and trace caps bound the memory-heavy diagnostic paths.
inline constexpr std::int64_t kDefaultMaxDim = std::int64_t{1} << 24;
inline constexpr std::int64_t kMaxOracleDim = std::int64_t{1} << 12;
inline constexpr std::int64_t kMaxTraceDim = std::int64_t{1} << 16;

// Inline matrices in protocol files are capped at 16x16.
inline constexpr int kMaxInlineMatrixDim = 16;

}  // namespace wignersim
