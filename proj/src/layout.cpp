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

#include "wignersim/layout.hpp"

#include <algorithm>
#include <limits>

namespace wignersim {

namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ident_cont(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

bool reserved_register_name(std::string_view name) {
  return name == "all" || name == "prob" || name == "tol";
}

// Saturating product in 63-bit range.
std::int64_t checked_mul(std::int64_t a, std::int64_t b, bool& exact) {
  if (a == kSaturated || b == kSaturated) {
    exact = false;
    return kSaturated;
  }
  unsigned __int128 wide = static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  if (wide > static_cast<unsigned __int128>(kSaturated)) {
    exact = false;
    return kSaturated;
  }
  return static_cast<std::int64_t>(wide);
}

}  // namespace

bool valid_register_name(std::string_view name) {
  if (name.empty() || !ident_start(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), ident_cont);
}

RegisterLayout RegisterLayout::make(std::vector<Register> registers) {
  if (registers.empty()) {
    throw SimError(ErrorCode::EmptyLayout, "layout needs at least one register");
  }
  for (const auto& r : registers) {
    if (!valid_register_name(r.name)) {
      throw SimError(ErrorCode::InvalidName, "invalid register name '" + r.name + "'");
    }
    if (reserved_register_name(r.name)) {
      throw SimError(ErrorCode::InvalidName,
                     "register name '" + r.name + "' is a reserved word");
    }
    if (r.dim < kMinRegisterDim || r.dim > kMaxRegisterDim) {
      throw SimError(ErrorCode::ValueOutOfRange,
                     "register '" + r.name + "' has dim " + std::to_string(r.dim) +
                         ", allowed range is " + std::to_string(kMinRegisterDim) + ".." +
                         std::to_string(kMaxRegisterDim));
    }
    for (const auto& other : registers) {
      if (&other != &r && other.name == r.name) {
        throw SimError(ErrorCode::DuplicateRegister,
                       "duplicate register '" + r.name + "'");
      }
    }
  }

  RegisterLayout out;
  out.regs_ = std::move(registers);
  out.strides_.assign(out.regs_.size(), 1);
  for (int k = static_cast<int>(out.regs_.size()) - 2; k >= 0; --k) {
    out.strides_[k] = checked_mul(out.strides_[k + 1], out.regs_[k + 1].dim, out.exact_);
  }
  out.total_dim_ = checked_mul(out.strides_[0], out.regs_[0].dim, out.exact_);
  return out;
}

std::int64_t RegisterLayout::stride(int k) const {
  if (!exact_) {
    throw SimError(ErrorCode::SystemTooLarge, "joint dimension overflows 63-bit index space");
  }
  return strides_[static_cast<std::size_t>(k)];
}

std::int64_t RegisterLayout::total_dim() const {
  if (!exact_) {
    throw SimError(ErrorCode::SystemTooLarge, "joint dimension overflows 63-bit index space");
  }
  return total_dim_;
}

std::optional<int> RegisterLayout::find(std::string_view name) const {
  for (std::size_t k = 0; k < regs_.size(); ++k) {
    if (regs_[k].name == name) return static_cast<int>(k);
  }
  return std::nullopt;
}

int RegisterLayout::require(std::string_view name) const {
  if (auto k = find(name)) return *k;
  throw SimError(ErrorCode::UnknownRegister, "unknown register '" + std::string(name) + "'");
}

std::int64_t mixed_radix_index(const RegisterLayout& layout, std::span<const int> values) {
  if (static_cast<int>(values.size()) != layout.register_count()) {
    throw SimError(ErrorCode::DimensionMismatch,
                   "expected " + std::to_string(layout.register_count()) + " values, got " +
                       std::to_string(values.size()));
  }
  std::int64_t index = 0;
  for (int k = 0; k < layout.register_count(); ++k) {
    int v = values[static_cast<std::size_t>(k)];
    if (v < 0 || v >= layout.dim(k)) {
      throw SimError(ErrorCode::ValueOutOfRange,
                     "value " + std::to_string(v) + " out of range for register '" +
                         layout.reg(k).name + "' of dim " + std::to_string(layout.dim(k)));
    }
    index += v * layout.stride(k);
  }
  return index;
}

std::vector<int> decode_index(const RegisterLayout& layout, std::int64_t index) {
  if (index < 0 || index >= layout.total_dim()) {
    throw SimError(ErrorCode::ValueOutOfRange,
                   "index " + std::to_string(index) + " outside joint dimension " +
                       std::to_string(layout.total_dim()));
  }
  std::vector<int> values(static_cast<std::size_t>(layout.register_count()));
  for (int k = 0; k < layout.register_count(); ++k) {
    values[static_cast<std::size_t>(k)] =
        static_cast<int>((index / layout.stride(k)) % layout.dim(k));
  }
  return values;
}

}  // namespace wignersim
