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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wignersim/errors.hpp"
#include "wignersim/types.hpp"

namespace wignersim {

/// Ordered, named qudit registers. The first declared register is the most
/// significant digit of the joint basis index: stride(last) = 1 and
/// stride(k) = dim(k+1) * stride(k+1).
///
/// Register names match [A-Za-z_][A-Za-z0-9_-]* and must not collide with
/// the protocol-file keywords "all", "prob" and "tol". Dims are 2..16.
/// The joint dimension itself is not capped here; policy caps are applied
/// at protocol validation so oversized layouts can still be described.
class RegisterLayout {
 public:
  struct Register {
    std::string name;
    int dim = 0;
    bool operator==(const Register&) const = default;
  };

  RegisterLayout() = default;

  /// Builds a layout, checking names, dims and uniqueness.
  static RegisterLayout make(std::vector<Register> registers);

  int register_count() const { return static_cast<int>(regs_.size()); }
  const std::vector<Register>& registers() const { return regs_; }
  const Register& reg(int k) const { return regs_[static_cast<std::size_t>(k)]; }
  int dim(int k) const { return regs_[static_cast<std::size_t>(k)].dim; }

  /// Stride of register k in the joint index. Throws SystemTooLarge when the
  /// joint dimension does not fit in 63 bits.
  std::int64_t stride(int k) const;

  /// Product of all dims. Throws SystemTooLarge when it does not fit.
  std::int64_t total_dim() const;

  /// False when the joint dimension overflowed 63-bit arithmetic.
  bool total_dim_exact() const { return exact_; }

  std::optional<int> find(std::string_view name) const;

  /// Index of a register, or throws UnknownRegister.
  int require(std::string_view name) const;

  bool operator==(const RegisterLayout& other) const { return regs_ == other.regs_; }

 private:
  std::vector<Register> regs_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_dim_ = 1;
  bool exact_ = true;
};

/// True for names matching [A-Za-z_][A-Za-z0-9_-]*.
bool valid_register_name(std::string_view name);

/// Joint index of one basis tuple: sum of values[k] * stride(k).
std::int64_t mixed_radix_index(const RegisterLayout& layout, std::span<const int> values);

/// Inverse of mixed_radix_index.
std::vector<int> decode_index(const RegisterLayout& layout, std::int64_t index);

}  // namespace wignersim
