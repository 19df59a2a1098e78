#include "dislofix/core_metric.hpp"

#include <atomic>
#include <cctype>
#include <sstream>

namespace dislofix {

namespace {

std::atomic<std::uint64_t> g_next_space_id{1};

}  // namespace

std::optional<Rat> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    const std::size_t num_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == num_start) return std::nullopt;
    std::string num = text.substr(num_start, pos - num_start);
    std::string denom = "1";
    if (pos < text.size()) {
        if (text[pos] != '/') return std::nullopt;
        ++pos;
        const std::size_t den_start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size() || pos == den_start) return std::nullopt;
        denom = text.substr(den_start);
    }
    mpz_class q(denom);
    if (q == 0) return std::nullopt;
    mpz_class p(num);
    if (negative) p = -p;
    Rat value(p, q);
    value.canonicalize();
    return value;
}

std::string rational_to_string(const Rat& value) { return value.get_str(); }

Rat DislocatedSpace::default_epsilon() { return Rat(1, 1000000000); }

DislocatedSpace DislocatedSpace::from_table(std::vector<PointId> points,
                                            std::vector<std::vector<Rat>> table,
                                            ArithmeticMode mode, Rat epsilon) {
    const std::size_t n = points.size();
    if (n == 0) throw MalformedTable("space has no points");
    if (table.size() != n) throw MalformedTable("table has wrong row count");
    for (std::size_t r = 0; r < n; ++r) {
        if (table[r].size() != n) {
            throw MalformedTable("table row " + std::to_string(r) + " has wrong length");
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (table[r][s] < 0) {
                throw MalformedTable("negative entry at (" + std::to_string(r) + "," +
                                     std::to_string(s) + ")");
            }
        }
    }
    if (epsilon <= 0) throw MalformedTable("epsilon must be positive");
    DislocatedSpace space;
    space.points_ = std::move(points);
    space.kind_ = MetricKind::Table;
    space.table_ = std::move(table);
    space.mode_ = mode;
    space.epsilon_ = std::move(epsilon);
    space.id_ = g_next_space_id.fetch_add(1);
    for (std::size_t i = 0; i < space.points_.size(); ++i) space.points_[i].index = i;
    return space;
}

DislocatedSpace DislocatedSpace::from_formula(std::vector<PointId> points, MetricKind kind,
                                              ArithmeticMode mode, Rat epsilon) {
    if (kind == MetricKind::Table) throw MalformedTable("formula constructor given a table kind");
    const std::size_t n = points.size();
    if (n == 0) throw MalformedTable("space has no points");
    for (std::size_t i = 0; i < n; ++i) {
        if (!points[i].value) {
            throw MalformedTable("point " + std::to_string(i) +
                                 " has no value but a formula metric is selected");
        }
        if (*points[i].value < 0) {
            throw MalformedTable("point " + std::to_string(i) + " has a negative value");
        }
    }
    std::vector<std::vector<Rat>> table(n, std::vector<Rat>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            const Rat& a = *points[r].value;
            const Rat& b = *points[s].value;
            Rat d = a > b ? a : b;
            if (kind == MetricKind::MaxPlusDiscrete && a != b) d += 1;
            table[r][s] = std::move(d);
        }
    }
    DislocatedSpace space = from_table(std::move(points), std::move(table), mode, std::move(epsilon));
    space.kind_ = kind;
    return space;
}

const Rat& DislocatedSpace::distance(std::size_t r, std::size_t s) const {
    if (r >= size() || s >= size()) {
        throw UnknownPoint("point index out of range: (" + std::to_string(r) + "," +
                           std::to_string(s) + ") in a space of " + std::to_string(size()));
    }
    return table_[r][s];
}

bool DislocatedSpace::is_zero(const Rat& x) const {
    if (mode_ == ArithmeticMode::Exact) return x == 0;
    return rat_abs(x) <= epsilon_;
}

bool DislocatedSpace::equal(const Rat& a, const Rat& b) const { return is_zero(Rat(a - b)); }

bool DislocatedSpace::leq(const Rat& a, const Rat& b) const {
    if (mode_ == ArithmeticMode::Exact) return a <= b;
    return a <= b + epsilon_;
}

AxiomReport check_axioms(const DislocatedSpace& space) {
    const std::size_t n = space.size();
    AxiomReport report;

    // (i) contrapositive: r != s implies xi(r,s) > 0.
    for (std::size_t r = 0; r < n && report.identity.passed; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            if (r != s && space.is_zero(space.distance(r, s))) {
                report.identity.passed = false;
                report.identity.witness = {r, s};
                break;
            }
        }
    }

    // (ii) symmetry over all ordered pairs.
    for (std::size_t r = 0; r < n && report.symmetry.passed; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            if (!space.equal(space.distance(r, s), space.distance(s, r))) {
                report.symmetry.passed = false;
                report.symmetry.witness = {r, s};
                break;
            }
        }
    }

    // (iii) triangle over all ordered triples.
    for (std::size_t r = 0; r < n && report.triangle.passed; ++r) {
        for (std::size_t s = 0; s < n && report.triangle.passed; ++s) {
            for (std::size_t t = 0; t < n; ++t) {
                if (!space.leq(space.distance(r, t),
                               Rat(space.distance(r, s) + space.distance(s, t)))) {
                    report.triangle.passed = false;
                    report.triangle.witness = {r, s, t};
                    break;
                }
            }
        }
    }

    // Distinct points with identical distance rows are legal (their mutual
    // distance is still positive) but usually indicate a duplicated input row.
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            bool same = true;
            for (std::size_t t = 0; t < n; ++t) {
                if (space.distance(r, t) != space.distance(s, t)) {
                    same = false;
                    break;
                }
            }
            if (same) {
                report.warnings.push_back("points " + std::to_string(r) + " and " +
                                          std::to_string(s) + " have identical distance rows");
            }
        }
    }
    return report;
}

const Rat& eval_metric(const DislocatedSpace& space, std::size_t r, std::size_t s) {
    return space.distance(r, s);
}

Ball open_ball(const DislocatedSpace& space, std::size_t center, const Rat& radius) {
    if (center >= space.size()) throw UnknownPoint("ball center out of range");
    if (radius <= 0) throw Error("open_ball requires a strictly positive radius");
    Ball ball;
    ball.center = center;
    ball.radius = radius;
    const Rat& self = space.distance(center, center);
    for (std::size_t t = 0; t < space.size(); ++t) {
        if (rat_abs(Rat(space.distance(center, t) - self)) < radius) ball.members.push_back(t);
    }
    return ball;
}

std::size_t tail_window_length(std::size_t sequence_length) {
    std::size_t half = sequence_length / 2;
    if (half == 0) half = 1;
    return half < 10 ? half : 10;
}

ConvergenceReport sequence_diagnostics(const DislocatedSpace& space,
                                       const std::vector<std::size_t>& seq,
                                       std::size_t candidate_limit) {
    if (seq.empty()) throw Error("sequence_diagnostics requires a nonempty sequence");
    if (candidate_limit >= space.size()) throw UnknownPoint("candidate limit out of range");

    ConvergenceReport report;
    report.limit_self_distance = space.distance(candidate_limit, candidate_limit);
    report.window = tail_window_length(seq.size());

    const std::size_t start = seq.size() - report.window;
    report.converged = true;
    for (std::size_t n = start; n < seq.size(); ++n) {
        if (seq[n] >= space.size()) throw UnknownPoint("sequence element out of range");
        report.tail_values.push_back(space.distance(seq[n], candidate_limit));
        if (!space.equal(report.tail_values.back(), report.limit_self_distance)) {
            report.converged = false;
        }
    }

    // Finite Cauchy diagnostic: all pairwise tail distances agree with each
    // other (mode-aware), i.e. the double tail has stabilized.
    report.cauchy_stable = true;
    for (std::size_t n = start; n < seq.size() && report.cauchy_stable; ++n) {
        for (std::size_t m = start; m < seq.size(); ++m) {
            if (!space.equal(space.distance(seq[n], seq[m]), space.distance(seq[start], seq[start]))) {
                report.cauchy_stable = false;
                break;
            }
        }
    }
    return report;
}

}  // namespace dislofix
