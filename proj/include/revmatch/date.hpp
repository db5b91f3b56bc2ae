// Copyright 2026 The revmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace revmatch {

/// Calendar date parsed from the leading YYYY-MM-DD of an ISO-8601 string.
struct Date {
    std::chrono::year_month_day ymd{};

    static std::optional<Date> parse(std::string_view iso) {
        if (iso.size() < 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
        auto digits = [&](std::size_t from, std::size_t n) -> std::optional<int> {
            int v = 0;
            for (std::size_t i = from; i < from + n; ++i) {
                if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
                v = v * 10 + (iso[i] - '0');
            }
            return v;
        };
        const auto y = digits(0, 4);
        const auto m = digits(5, 2);
        const auto d = digits(8, 2);
        if (!y || !m || !d) return std::nullopt;
        if (iso.size() > 10 && iso[10] != 'T' && iso[10] != ' ') return std::nullopt;
        const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                              std::chrono::day{static_cast<unsigned>(*d)}};
        if (!ymd.ok()) return std::nullopt;
        return Date{ymd};
    }

    /// Same month/day `years` earlier; Feb 29 clamps to Feb 28.
    Date minus_years(int years) const {
        auto shifted = ymd - std::chrono::years{years};
        if (!shifted.ok()) {
            shifted = std::chrono::year_month_day{shifted.year(), shifted.month(), std::chrono::day{28}};
        }
        return Date{shifted};
    }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    friend auto operator<=>(const Date&, const Date&) = default;
    friend bool operator==(const Date&, const Date&) = default;
};

/// Inclusive date range.
struct DateWindow {
    Date start;
    Date end;

    bool contains(const Date& d) const { return start <= d && d <= end; }

    /// The two-year window ending at `reference`.
    static DateWindow two_years_ending(const Date& reference) { return {reference.minus_years(2), reference}; }
};

}  // namespace revmatch
