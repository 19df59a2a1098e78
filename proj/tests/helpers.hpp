#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "dislofix/core_metric.hpp"
#include "dislofix/hausdorff.hpp"

namespace testutil {

using dislofix::ArithmeticMode;
using dislofix::DislocatedSpace;
using dislofix::MetricKind;
using dislofix::PointId;
using dislofix::Rat;

inline std::vector<PointId> valued_points(const std::vector<Rat>& values) {
    std::vector<PointId> points;
    points.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        points.push_back(PointId{i, std::nullopt, values[i]});
    }
    return points;
}

// |x - y| on the given values, as a table. A usual (non-dislocated) metric.
inline DislocatedSpace usual_space(const std::vector<Rat>& values,
                                   ArithmeticMode mode = ArithmeticMode::Exact) {
    const std::size_t n = values.size();
    std::vector<std::vector<Rat>> table(n, std::vector<Rat>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            Rat d = values[r] - values[s];
            table[r][s] = d < 0 ? Rat(-d) : d;
        }
    }
    return DislocatedSpace::from_table(valued_points(values), std::move(table), mode);
}

inline DislocatedSpace max_space(const std::vector<Rat>& values,
                                 ArithmeticMode mode = ArithmeticMode::Exact) {
    return DislocatedSpace::from_formula(valued_points(values), MetricKind::Max, mode);
}

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

}  // namespace testutil
