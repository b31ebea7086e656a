// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace prox {

inline constexpr const char* library_version = "1.0.0";

/// Bumped whenever a change can alter numerical output; part of every cache key.
inline constexpr int solver_revision = 1;

} // namespace prox
