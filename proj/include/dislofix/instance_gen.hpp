#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dislofix/contraction.hpp"
#include "dislofix/fixed_point.hpp"
#include "dislofix/graph_layer.hpp"

namespace dislofix {

struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;  // inclusive
};

enum class DiagonalMode { ZeroDiag, RandomDiag };
enum class MapMode { Random, ContractionBiased };

struct GenConfig {
    std::uint64_t rng_seed = 1;
    IndexRange n_points{2, 8};
    IndexRange family_size{2, 12};
    Rat value_scale = Rat(8);
    DiagonalMode diagonal_mode = DiagonalMode::RandomDiag;
    MapMode map_mode = MapMode::ContractionBiased;
    // Slope of the linear comparison function used on biased trials.
    Rat bias_lambda = Rat(1, 2);
    std::size_t trials = 1;
};

void validate_config(const GenConfig& cfg);

// Per-trial deterministic stream. The engine is the standard 64-bit
// Mersenne twister, whose output sequence is pinned by the standard; the
// bounded draw uses plain modulo so results never depend on library
// distribution internals. The modulo bias is irrelevant at the tiny bounds
// used here.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index) : engine_(seed ^ trial_index) {}

    std::uint64_t next() { return engine_(); }
    std::size_t bounded(std::size_t n);            // uniform-ish over [0, n)
    std::size_t in_range(const IndexRange& r);     // inclusive endpoints
    bool coin() { return bounded(2) == 1; }

  private:
    std::mt19937_64 engine_;
};

// Random dislocated space as a table metric: symmetric grid-valued draw,
// positive floor value_scale/1000 on off-diagonal zeros, then min-plus
// closure run to fixpoint so the triangle axiom holds by construction.
// The result is checked against all axioms; a failed attempt is redrawn,
// at most 100 times.
DislocatedSpace random_space(const GenConfig& cfg, std::uint64_t trial_index);
DislocatedSpace random_space(TrialRng& rng, const GenConfig& cfg);

// One full draw: space, family, map, graph, comparison function, and the
// functional this trial targets (alternating by trial parity).
struct GeneratedInstance {
    DislocatedSpace space;
    SetFamily family;
    SetMap map;
    SetGraph graph;
    ComparisonFunction phi;
    Functional functional = Functional::MT;
};

GeneratedInstance draw_instance(const GenConfig& cfg, std::uint64_t trial_index);

// Draws and certifies; empty when the draw is refuted.
std::optional<GeneratedInstance> random_certified_instance(const GenConfig& cfg,
                                                           std::uint64_t trial_index);

struct ConclusionTally {
    std::size_t checked = 0;
    std::size_t failed = 0;
};

struct CampaignTallies {
    ConclusionTally adjacent_pair_weights_zero;
    ConclusionTally fixed_points_imply_starts;
    ConclusionTally orbits_reach_fixed_points;
    ConclusionTally singleton_on_complete_graph;
    std::size_t traces_run = 0;
    std::size_t trace_bound_failures = 0;
    std::size_t wellposed_checked = 0;
    std::size_t wellposed_flagged = 0;
};

enum class CounterexampleKind { Conclusion, TraceBound, Wellposedness };

// A certified instance that broke a checked conclusion. Carries everything
// needed to replay: the full instance, the orbits, and the verdict.
struct Counterexample {
    std::uint64_t trial_index = 0;
    CounterexampleKind kind = CounterexampleKind::Conclusion;
    std::string detail;
    GeneratedInstance instance;
    std::vector<IterationTrace> traces;
};

struct CampaignReport {
    GenConfig config;
    std::size_t trials_run = 0;
    std::size_t certified_count = 0;
    std::size_t refuted_count = 0;
    CampaignTallies mt;
    CampaignTallies ns;
    std::vector<Counterexample> counterexamples;
    // Reported in text output only; serialized reports omit it so equal
    // inputs give byte-equal files.
    std::uint64_t wall_time_ms = 0;
};

// Runs cfg.trials independent trials: draw, certify, and on certification
// iterate from every admissible start and check the theorem conclusions,
// the per-step decay bounds, and the wellposedness probe. Deterministic
// for a fixed config. DISLOFIX_THREADS > 1 splits trials across threads;
// aggregation stays in trial order.
CampaignReport run_campaign(const GenConfig& cfg);

std::size_t campaign_max_iters(std::size_t family_size);

}  // namespace dislofix
