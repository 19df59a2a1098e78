#include "dislofix/instance_gen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "dislofix/errors.hpp"

namespace dislofix {

namespace {

constexpr std::size_t kMaxSpaceAttempts = 100;

Rat grid_value(TrialRng& rng, const Rat& scale) {
    return Rat(Rat(rng.bounded(9)) * scale / 8);
}

// Relax xi(r,t) <= xi(r,s) + xi(s,t) to fixpoint, diagonal included. With
// nonnegative entries this converges to the shortest-walk closure of the
// drawn matrix; symmetric input yields a symmetric fixpoint.
void min_plus_closure(std::vector<std::vector<Rat>>& m) {
    const std::size_t n = m.size();
    for (std::size_t sweep = 0; sweep <= 2 * n + 4; ++sweep) {
        bool changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t t = 0; t < n; ++t) {
                    Rat cand(m[r][s] + m[s][t]);
                    if (cand < m[r][t]) {
                        m[r][t] = std::move(cand);
                        changed = true;
                    }
                }
            }
        }
        if (!changed) return;
    }
    throw Error("metric closure failed to converge");
}

std::size_t min_diagonal_point(const DislocatedSpace& space) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < space.size(); ++p) {
        if (space.distance(p, p) < space.distance(best, best)) best = p;
    }
    return best;
}

std::size_t thread_count_from_env(std::size_t trials) {
    const char* raw = std::getenv("DISLOFIX_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    char* end = nullptr;
    unsigned long parsed = std::strtoul(raw, &end, 10);
    if (end == raw || parsed == 0) return 1;
    return std::min<std::size_t>(parsed, trials == 0 ? 1 : trials);
}

struct TrialResult {
    bool certified = false;
    Functional functional = Functional::MT;
    CampaignTallies tally;
    std::vector<Counterexample> counterexamples;
};

void record_conclusion(const ConclusionCheck& check, ConclusionTally& tally, const char* name,
                       std::uint64_t trial_index, const GeneratedInstance& inst,
                       const std::vector<IterationTrace>& traces, TrialResult& out) {
    if (!check.checked) return;
    ++tally.checked;
    if (check.holds) return;
    ++tally.failed;
    out.counterexamples.push_back({trial_index, CounterexampleKind::Conclusion,
                                   std::string(name) + ": " + check.detail, inst, traces});
}

TrialResult run_trial(const GenConfig& cfg, std::uint64_t trial_index) {
    GeneratedInstance inst = draw_instance(cfg, trial_index);
    FamilyMetrics metrics(inst.space, inst.family);
    ContractionCertificate cert = certify(metrics, inst.map, inst.graph, inst.phi,
                                          inst.functional, PreservationMode::Edge);
    TrialResult result;
    result.functional = inst.functional;
    result.certified = cert.certified();
    if (!result.certified) return result;

    const std::size_t cap = campaign_max_iters(inst.family.size());
    std::vector<IterationTrace> traces;
    for (std::size_t start : compute_YT(inst.graph, inst.map)) {
        IterationTrace trace = iterate(metrics, inst.map, inst.phi, start, cap);
        ++result.tally.traces_run;
        if (!trace_bounds_hold(inst.space, trace)) {
            ++result.tally.trace_bound_failures;
            result.counterexamples.push_back(
                {trial_index, CounterexampleKind::TraceBound,
                 "step weight exceeded its decay bound from start " + std::to_string(start), inst,
                 {trace}});
        }
        traces.push_back(std::move(trace));
    }

    FixedPointReport report = fixed_point_report(metrics, inst.map);
    ConclusionVerdict verdict =
        check_theorem_conclusions(cert, report, traces, inst.graph, inst.map, metrics);
    record_conclusion(verdict.adjacent_pair_weights_zero, result.tally.adjacent_pair_weights_zero,
                      "adjacent fixed-point weights", trial_index, inst, traces, result);
    record_conclusion(verdict.fixed_points_imply_starts, result.tally.fixed_points_imply_starts,
                      "nonempty start set", trial_index, inst, traces, result);
    record_conclusion(verdict.orbits_reach_fixed_points, result.tally.orbits_reach_fixed_points,
                      "orbit convergence", trial_index, inst, traces, result);
    record_conclusion(verdict.singleton_on_complete_graph,
                      result.tally.singleton_on_complete_graph, "singleton on complete graph",
                      trial_index, inst, traces, result);

    if (report.wellposed.has_value()) {
        ++result.tally.wellposed_checked;
        if (!report.wellposed->all_within()) {
            ++result.tally.wellposed_flagged;
            result.counterexamples.push_back({trial_index, CounterexampleKind::Wellposedness,
                                              "approximate fixed point outside the stability bound",
                                              inst, traces});
        }
    }
    return result;
}

void merge_tallies(CampaignTallies& dst, const CampaignTallies& src) {
    auto add = [](ConclusionTally& a, const ConclusionTally& b) {
        a.checked += b.checked;
        a.failed += b.failed;
    };
    add(dst.adjacent_pair_weights_zero, src.adjacent_pair_weights_zero);
    add(dst.fixed_points_imply_starts, src.fixed_points_imply_starts);
    add(dst.orbits_reach_fixed_points, src.orbits_reach_fixed_points);
    add(dst.singleton_on_complete_graph, src.singleton_on_complete_graph);
    dst.traces_run += src.traces_run;
    dst.trace_bound_failures += src.trace_bound_failures;
    dst.wellposed_checked += src.wellposed_checked;
    dst.wellposed_flagged += src.wellposed_flagged;
}

}  // namespace

void validate_config(const GenConfig& cfg) {
    if (cfg.n_points.lo < 1 || cfg.n_points.lo > cfg.n_points.hi) {
        throw Error("point-count range is empty");
    }
    if (cfg.family_size.lo < 1 || cfg.family_size.lo > cfg.family_size.hi) {
        throw Error("family-size range is empty");
    }
    if (cfg.value_scale <= 0) throw Error("value scale must be positive");
    if (cfg.bias_lambda < 0 || cfg.bias_lambda >= 1) {
        throw Error("bias slope must lie in [0, 1)");
    }
    if (cfg.trials == 0) throw Error("campaign needs at least one trial");
}

std::size_t TrialRng::bounded(std::size_t n) {
    if (n == 0) throw Error("bounded draw over an empty range");
    return static_cast<std::size_t>(engine_() % n);
}

std::size_t TrialRng::in_range(const IndexRange& r) {
    if (r.lo > r.hi) throw Error("draw over an empty range");
    return r.lo + bounded(r.hi - r.lo + 1);
}

DislocatedSpace random_space(const GenConfig& cfg, std::uint64_t trial_index) {
    TrialRng rng(cfg.rng_seed, trial_index);
    return random_space(rng, cfg);
}

DislocatedSpace random_space(TrialRng& rng, const GenConfig& cfg) {
    const Rat floor_value(cfg.value_scale / 1000);
    for (std::size_t attempt = 0; attempt < kMaxSpaceAttempts; ++attempt) {
        const std::size_t n = rng.in_range(cfg.n_points);
        std::vector<std::vector<Rat>> table(n, std::vector<Rat>(n, Rat(0)));
        for (std::size_t r = 0; r < n; ++r) {
            if (cfg.diagonal_mode == DiagonalMode::RandomDiag && rng.coin()) {
                table[r][r] = grid_value(rng, cfg.value_scale);
            }
            for (std::size_t s = r + 1; s < n; ++s) {
                Rat v = grid_value(rng, cfg.value_scale);
                if (v == 0) v = floor_value;
                table[r][s] = v;
                table[s][r] = std::move(v);
            }
        }
        min_plus_closure(table);

        // Closure caps xi(r,r) only by twice the row minimum. Pull each self
        // distance under its row's off-diagonal minimum so xi(u,u) <= xi(u,v)
        // holds pointwise; the set-metric law H(U,U) <= H(U,V) needs exactly
        // that and raw axiom-valid tables can break it (xi(a,a)=3, xi(a,b)=2,
        // xi(b,b)=0 passes all three axioms yet H({a},{a}) > H({a},{b})).
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t s = 0; s < n; ++s) {
                if (s != r && table[r][s] < table[r][r]) table[r][r] = table[r][s];
            }
        }

        bool off_diagonal_zero = false;
        for (std::size_t r = 0; r < n && !off_diagonal_zero; ++r) {
            for (std::size_t s = 0; s < n; ++s) {
                if (r != s && table[r][s] == 0) {
                    off_diagonal_zero = true;
                    break;
                }
            }
        }
        if (off_diagonal_zero) continue;

        std::vector<PointId> points(n);
        for (std::size_t p = 0; p < n; ++p) points[p].index = p;
        DislocatedSpace space = DislocatedSpace::from_table(std::move(points), std::move(table));
        if (check_axioms(space).all_passed()) return space;
    }
    throw Error("random space generation kept failing its own axioms");
}

GeneratedInstance draw_instance(const GenConfig& cfg, std::uint64_t trial_index) {
    validate_config(cfg);
    TrialRng rng(cfg.rng_seed, trial_index);
    DislocatedSpace space = random_space(rng, cfg);
    const std::size_t n = space.size();

    const std::size_t all_subsets = (std::size_t(1) << n) - 1;
    std::size_t want = rng.in_range(cfg.family_size);
    if (want > all_subsets) want = all_subsets;
    std::vector<std::size_t> masks(all_subsets);
    for (std::size_t m = 0; m < all_subsets; ++m) masks[m] = m + 1;
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + rng.bounded(masks.size() - i);
        std::swap(masks[i], masks[j]);
    }
    masks.resize(want);

    if (cfg.map_mode == MapMode::ContractionBiased) {
        // Guarantee a low self-weight landing spot: the singleton of the
        // smallest-diagonal point. Constant-like maps into it certify
        // whenever that diagonal closed to zero.
        const std::size_t star = std::size_t(1) << min_diagonal_point(space);
        if (std::find(masks.begin(), masks.end(), star) == masks.end()) {
            masks.back() = star;
        }
    }

    std::vector<std::vector<std::size_t>> subsets;
    subsets.reserve(masks.size());
    for (std::size_t mask : masks) {
        std::vector<std::size_t> members;
        for (std::size_t p = 0; p < n; ++p) {
            if (mask & (std::size_t(1) << p)) members.push_back(p);
        }
        subsets.push_back(std::move(members));
    }
    SetFamily family(space, std::move(subsets));
    const std::size_t fsize = family.size();

    // Edge density for this trial: none, quarter, half, or full, with the
    // diagonal always enforced on top.
    static constexpr std::size_t kDensityThreshold[4] = {0, 1, 2, 4};
    const std::size_t threshold = kDensityThreshold[rng.bounded(4)];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < fsize; ++i) {
        for (std::size_t j = 0; j < fsize; ++j) {
            if (i == j) continue;
            if (rng.bounded(4) < threshold) edges.push_back({i, j});
        }
    }
    SetGraph graph(family, std::move(edges), true);

    std::size_t target = 0;
    if (cfg.map_mode == MapMode::ContractionBiased) {
        const std::size_t star = std::size_t(1) << min_diagonal_point(space);
        for (std::size_t i = 0; i < masks.size(); ++i) {
            if (masks[i] == star) {
                target = i;
                break;
            }
        }
    }
    std::vector<std::size_t> image(fsize);
    for (std::size_t i = 0; i < fsize; ++i) {
        if (cfg.map_mode == MapMode::ContractionBiased) {
            image[i] = rng.bounded(4) < 3 ? target : rng.bounded(fsize);
        } else {
            image[i] = rng.bounded(fsize);
        }
    }
    SetMap map(family, std::move(image));

    ComparisonFunction phi = ComparisonFunction::linear(cfg.bias_lambda);
    if (cfg.map_mode == MapMode::Random) {
        const std::size_t kind = rng.bounded(8);
        if (kind <= 5) {
            phi = ComparisonFunction::linear(Rat(rng.bounded(8), 8));
        } else if (kind == 6) {
            phi = ComparisonFunction::rational_shrink();
        } else {
            phi = ComparisonFunction::user_table({{Rat(cfg.value_scale / 4), Rat(cfg.value_scale / 8)},
                                                  {cfg.value_scale, Rat(cfg.value_scale / 2)}});
        }
    }

    const Functional functional = trial_index % 2 == 0 ? Functional::MT : Functional::NS;
    return GeneratedInstance{std::move(space), std::move(family), std::move(map),
                             std::move(graph), std::move(phi), functional};
}

std::optional<GeneratedInstance> random_certified_instance(const GenConfig& cfg,
                                                           std::uint64_t trial_index) {
    GeneratedInstance inst = draw_instance(cfg, trial_index);
    FamilyMetrics metrics(inst.space, inst.family);
    ContractionCertificate cert = certify(metrics, inst.map, inst.graph, inst.phi,
                                          inst.functional, PreservationMode::Edge);
    if (!cert.certified()) return std::nullopt;
    return inst;
}

std::size_t campaign_max_iters(std::size_t family_size) { return 4 * family_size + 8; }

CampaignReport run_campaign(const GenConfig& cfg) {
    validate_config(cfg);
    const auto started = std::chrono::steady_clock::now();

    std::vector<TrialResult> results(cfg.trials);
    const std::size_t threads = thread_count_from_env(cfg.trials);
    if (threads <= 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < cfg.trials; t += threads) {
                    results[t] = run_trial(cfg, t);
                }
            });
        }
        for (std::thread& worker : pool) worker.join();
    }

    CampaignReport report;
    report.config = cfg;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        TrialResult& r = results[t];
        ++report.trials_run;
        if (r.certified) {
            ++report.certified_count;
        } else {
            ++report.refuted_count;
        }
        merge_tallies(r.functional == Functional::MT ? report.mt : report.ns, r.tally);
        for (Counterexample& c : r.counterexamples) {
            report.counterexamples.push_back(std::move(c));
        }
    }
    report.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              started)
            .count());
    return report;
}

}  // namespace dislofix
