#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dislofix/graph_layer.hpp"
#include "dislofix/hausdorff.hpp"
#include "dislofix/rational.hpp"

namespace dislofix {

enum class PhiKind { Linear, RationalShrink, UserTable };

// Comparison function phi: nonnegative, nondecreasing, phi(t) < t for t > 0,
// phi(0) = 0. Linear is t -> lambda*t with lambda in [0,1). RationalShrink
// is t -> t/(1+t). UserTable interpolates linearly between breakpoints,
// with an implicit breakpoint (0,0) and constant extension past the last
// breakpoint; both keep a structurally valid table a valid comparison
// function on the whole half-line.
class ComparisonFunction {
  public:
    static ComparisonFunction linear(Rat lambda);
    static ComparisonFunction rational_shrink();
    static ComparisonFunction user_table(std::vector<std::pair<Rat, Rat>> breakpoints);

    PhiKind kind() const { return kind_; }
    bool declared_nondecreasing() const { return declared_nondecreasing_; }
    const Rat& lambda() const { return lambda_; }
    const std::vector<std::pair<Rat, Rat>>& breakpoints() const { return breakpoints_; }

    Rat apply(const Rat& t) const;

    // Sampled falsification over a 1000-point grid on [0, max_value]:
    // monotonicity between consecutive grid points and phi(t) < t at every
    // grid t > 0. Throws InvalidPhi with the first offending t. Passing is
    // evidence, not proof; the exact checks at values the certifier
    // actually evaluates happen inside certify.
    void validate_on_grid(const Rat& max_value) const;

  private:
    ComparisonFunction() = default;

    PhiKind kind_ = PhiKind::Linear;
    bool declared_nondecreasing_ = true;
    Rat lambda_;
    std::vector<std::pair<Rat, Rat>> breakpoints_;
};

enum class Functional { MT, NS };

// Seven-term maximum controlling the first contraction: with W=t(U), X=t(V),
// and W2=t(W), the value is
//   max{ H(U,V), H(U,W), H(V,X), H(W,X), H(W2,V), H(W2,X), [H(V,W)+H(U,X)]/3 }.
Rat eval_MT(const FamilyMetrics& m, const SetMap& t, std::size_t U, std::size_t V);
Rat eval_MT(const DislocatedSpace& space, const SetFamily& family, const SetMap& t,
            std::size_t U, std::size_t V);

// Three-term rational maximum for the second contraction: with W=s(U),
// X=s(V), the value is
//   max{ H(U,X)[1+H(U,W)] / (2[1+H(U,V)]),
//        H(V,X)[1+H(U,W)] / (1+H(U,V)),
//        H(V,W)[1+H(U,W)] / (1+H(U,V)) }.
// The shared factor [1+H(U,W)] is kept in all three terms; callers wanting
// the reduced textbook variant can compare externally.
Rat eval_NS(const FamilyMetrics& m, const SetMap& s, std::size_t U, std::size_t V);
Rat eval_NS(const DislocatedSpace& space, const SetFamily& family, const SetMap& s,
            std::size_t U, std::size_t V);

struct ContractionViolation {
    std::size_t from = 0;
    std::size_t to = 0;
    Rat lhs;               // H(images)
    Rat functional_value;  // M_T or N_S at the edge
    Rat phi_value;         // phi(functional_value)
};

enum class Verdict { Certified, Refuted };

struct ContractionCertificate {
    Functional functional = Functional::MT;
    PreservationMode preservation_mode = PreservationMode::Edge;
    PreservationReport preservation;
    std::size_t edges_checked = 0;
    std::vector<ContractionViolation> violations;  // in edge-set order
    Verdict verdict = Verdict::Refuted;

    bool certified() const { return verdict == Verdict::Certified; }
};

// Decides whether the map is a graph set-contraction for the chosen
// functional: edge preservation in the requested mode, then the inequality
// H(map(U), map(V)) <= phi(functional(U,V)) on every edge. Certified only
// when both hold everywhere. phi is grid-validated against the family's
// value range first, and phi(t) < t is additionally checked exactly at
// every functional value evaluated; failures throw InvalidPhi.
ContractionCertificate certify(const FamilyMetrics& metrics, const SetMap& map,
                               const SetGraph& g, const ComparisonFunction& phi,
                               Functional functional, PreservationMode mode);
ContractionCertificate certify(const DislocatedSpace& space, const SetFamily& family,
                               const SetMap& map, const SetGraph& g,
                               const ComparisonFunction& phi, Functional functional,
                               PreservationMode mode);

}  // namespace dislofix
