#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dislofix/errors.hpp"
#include "dislofix/rational.hpp"

namespace dislofix {

// Ground-set element. `value` carries the nonnegative rational a formula
// metric evaluates on; table metrics may leave it empty.
struct PointId {
    std::size_t index = 0;
    std::optional<std::string> label;
    std::optional<Rat> value;
};

enum class ArithmeticMode { Exact, Float };

enum class MetricKind { Table, Max, MaxPlusDiscrete };

// A finite set Y with a symmetric, nonnegative distance xi where the
// triangle inequality holds and xi(r,s) = 0 forces r = s, but xi(r,r) may
// be positive. The full distance table is materialized at construction for
// both table and formula metrics; axiom checking is a separate report so a
// violating table can still be loaded and diagnosed.
class DislocatedSpace {
  public:
    static DislocatedSpace from_table(std::vector<PointId> points,
                                      std::vector<std::vector<Rat>> table,
                                      ArithmeticMode mode = ArithmeticMode::Exact,
                                      Rat epsilon = default_epsilon());
    static DislocatedSpace from_formula(std::vector<PointId> points, MetricKind kind,
                                        ArithmeticMode mode = ArithmeticMode::Exact,
                                        Rat epsilon = default_epsilon());

    static Rat default_epsilon();  // 1e-9 as an exact rational

    std::size_t size() const { return points_.size(); }
    const std::vector<PointId>& points() const { return points_; }
    MetricKind metric_kind() const { return kind_; }
    ArithmeticMode mode() const { return mode_; }
    const Rat& epsilon() const { return epsilon_; }
    std::uint64_t id() const { return id_; }

    const Rat& distance(std::size_t r, std::size_t s) const;

    // Mode-aware comparisons. Exact mode is literal; Float mode treats
    // |x| <= epsilon as zero and allows epsilon slack in inequalities.
    bool is_zero(const Rat& x) const;
    bool equal(const Rat& a, const Rat& b) const;
    bool leq(const Rat& a, const Rat& b) const;

  private:
    DislocatedSpace() = default;

    std::vector<PointId> points_;
    MetricKind kind_ = MetricKind::Table;
    std::vector<std::vector<Rat>> table_;
    ArithmeticMode mode_ = ArithmeticMode::Exact;
    Rat epsilon_;
    std::uint64_t id_ = 0;
};

struct Ball {
    std::size_t center = 0;
    Rat radius;
    std::vector<std::size_t> members;  // sorted
};

// Axiom identifiers follow the usual (i) identity-of-indiscernibles
// direction, (ii) symmetry, (iii) triangle.
struct AxiomStatus {
    bool passed = true;
    std::vector<std::size_t> witness;  // first violating tuple, empty if passed
};

struct AxiomReport {
    AxiomStatus identity;   // no off-diagonal zeros
    AxiomStatus symmetry;   // xi(r,s) = xi(s,r)
    AxiomStatus triangle;   // xi(r,t) <= xi(r,s) + xi(s,t)
    std::vector<std::string> warnings;
    bool all_passed() const { return identity.passed && symmetry.passed && triangle.passed; }
};

struct ConvergenceReport {
    std::vector<Rat> tail_values;  // xi(y_n, y) over the final window
    Rat limit_self_distance;       // xi(y, y)
    std::size_t window = 0;
    bool converged = false;      // tail values all equal xi(y,y), mode-aware
    bool cauchy_stable = false;  // pairwise tail values agree, mode-aware
};

// Checks the three axioms exhaustively. Witnesses are the lexicographically
// first violating tuples; axiom (i) is checked as its contrapositive.
AxiomReport check_axioms(const DislocatedSpace& space);

// xi(r, s). Throws UnknownPoint for out-of-range indices.
const Rat& eval_metric(const DislocatedSpace& space, std::size_t r, std::size_t s);

// B_radius(center) = { t : |xi(c,t) - xi(c,c)| < radius }, strict inequality.
Ball open_ball(const DislocatedSpace& space, std::size_t center, const Rat& radius);

// Finite-trajectory convergence diagnostic over the tail window
// min(10, max(1, len/2)). Never claims infinite-limit facts.
ConvergenceReport sequence_diagnostics(const DislocatedSpace& space,
                                       const std::vector<std::size_t>& seq,
                                       std::size_t candidate_limit);

std::size_t tail_window_length(std::size_t sequence_length);

}  // namespace dislofix
