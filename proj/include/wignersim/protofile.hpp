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

#include <string>
#include <string_view>

#include "wignersim/protocol.hpp"

namespace wignersim {

// The .wproto line-oriented protocol format:
//
//   protocol NAME
//   registers
//     NAME DIM            (one per line, two-space indent)
//   init NAME=INT ...     (every register)
//   step superpose NAME theta=FLOAT phi=FLOAT
//   step couple CONTROL TARGET
//   step copy-into SRC DST perms=[0,1;1,0]
//   step record-definite NAME
//   step record-which SRC DST
//   step unitary NAME... [1+0i,0+0i;0+0i,1+0i]
//   collapse-site NAME...
//   check-factorized NAME tol=FLOAT
//   reverse FROM..TO
//   measure all | NAME...
//   expect NAME=INT ... prob=FLOAT tol=FLOAT
//
// '#' starts a comment to end of line. Matrix rows are ';'-separated,
// entries ','-separated complex literals RE+IMi / RE-IMi. perms rows list
// the destination-level images per source level.

/// Parses UTF-8 text into a Protocol, recording a SourceSpan per step.
/// Register references, init coverage and register dims are checked here;
/// the remaining invariants are checked by validate(). Throws ParseError
/// with the span of the offending token.
Protocol parse(std::string_view text);

/// Canonical text form: two-space indent, lowercase keywords, shortest
/// round-trip decimal floats, init and expect assignments in layout order.
/// parse(serialize(p)) is structurally equal to p, and serialize is a fixed
/// point over parse.
std::string serialize(const Protocol& protocol);

/// Shortest decimal form of a double that parses back to the same value.
std::string format_double(double value);

}  // namespace wignersim
