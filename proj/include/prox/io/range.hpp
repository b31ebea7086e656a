// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"

/// Parameter values given as a scalar, a comma list, or `lo:hi:log|lin:n`.
namespace prox::io {

inline double parse_number(std::string_view text, const std::string& what)
{
    const std::string s(text);
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    double v = 0.0;
    const auto r = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw PreconditionError(what + ": '" + s + "' is not a number");
    }
    if (!std::isfinite(v)) throw PreconditionError(what + ": '" + s + "' is not finite");
    return v;
}

inline std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline bool is_range(std::string_view text)
{
    return text.find(':') != std::string_view::npos || text.find(',') != std::string_view::npos;
}

/// Expands a parameter value. Log ranges need lo, hi > 0; n >= 2 unless lo == hi.
inline std::vector<double> parse_range(std::string_view text, const std::string& what = "range")
{
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 4) throw PreconditionError(what + ": expected lo:hi:log|lin:n, got '" + std::string(text) + "'");
        const double lo = parse_number(parts[0], what);
        const double hi = parse_number(parts[1], what);
        const double nd = parse_number(parts[3], what);
        if (nd < 1.0 || nd != std::floor(nd) || nd > 1e6) throw PreconditionError(what + ": n must be a positive integer");
        const auto n = static_cast<std::size_t>(nd);
        if (n == 1) {
            if (lo != hi) throw PreconditionError(what + ": n = 1 needs lo == hi");
            return {lo};
        }
        if (parts[2] == "lin") return numeric::linspace(lo, hi, n);
        if (parts[2] == "log") {
            if (!(lo > 0.0) || !(hi > 0.0)) throw PreconditionError(what + ": log range needs lo, hi > 0");
            return numeric::logspace(lo, hi, n);
        }
        throw PreconditionError(what + ": spacing must be 'log' or 'lin', got '" + parts[2] + "'");
    }
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_number(item, what));
    return out;
}

} // namespace prox::io
