// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace acra {

/// Register values, offsets and bounds. Pumped cycles grow values without
/// limit, so everything is arbitrary precision.
using Int = boost::multiprecision::cpp_int;

inline std::string to_string(const Int& v) { return v.str(); }

/// True if `v` fits in a signed 64-bit integer.
inline bool fits_int64(const Int& v) {
    return v >= Int(std::numeric_limits<std::int64_t>::min()) && v <= Int(std::numeric_limits<std::int64_t>::max());
}

inline std::size_t hash_int(const Int& v) {
    // Low limb is enough to spread small values; sign folds in separately.
    const auto& backend = v.backend();
    std::size_t h = backend.size() ? static_cast<std::size_t>(backend.limbs()[0]) : 0;
    h ^= static_cast<std::size_t>(backend.size()) * 0x9e3779b97f4a7c15ULL;
    if (v.sign() < 0) {
        h = ~h;
    }
    return h;
}

} // namespace acra
