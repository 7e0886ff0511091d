#pragma once

#include "netsight/diffusion.hpp"
#include "netsight/graph.hpp"
#include "netsight/layout.hpp"
#include "netsight/render.hpp"
#include "netsight/selection.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsight {

// ---------------------------------------------------------------------------
// Local search

struct LocalSearchOptions {
    std::size_t max_iter = 5;
    std::size_t trials = 5000;
    std::uint64_t rng_seed = 0;
    unsigned workers = 0;
};

struct LocalSearchResult {
    std::vector<NodeId> seeds;
    /// Spread of the initial set followed by the spread after each accepted swap.
    std::vector<double> accepted_spreads;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
};

/// Seed-swap refinement. Each seed scan flips a coin between degree and
/// betweenness ranking of the seed's neighbours; the top neighbour outside S
/// replaces the seed when the estimated spread strictly increases, and the
/// scan restarts. Every evaluation uses the same rng_seed.
LocalSearchResult local_search(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                               const LocalSearchOptions& options = {});

// ---------------------------------------------------------------------------
// Influence maximization pipeline

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ImOptions {
    std::string network_id;
    std::size_t k = 10;
    std::size_t attempts = 10;  // per agent
    DiffusionModel model = DiffusionModel::ic(0.1);
    std::size_t validation_trials = 100000;
    std::uint64_t rng_seed = 0;
    bool local_search = true;
    LocalSearchOptions ls;
    std::string model_name = "gpt-4o-2024-08-06";
    double temperature = 1.0;
    std::size_t requery_budget = 0;  // extra queries after an invalid reply
    unsigned workers = 0;
};

struct AttemptRecord {
    std::uint32_t agent_id = 0;
    std::string agent_name;
    std::uint32_t attempt = 0;
    std::string request_id;
    std::string raw_text;
    bool cached = false;
    std::optional<std::vector<OriginalId>> parsed;
    ValidationReport validation;
    std::vector<NodeId> seeds;              // internal ids, valid attempts only
    std::optional<SpreadEstimate> spread;  // valid attempts only
    std::string error;                      // backend failure message, if any
    bool valid() const noexcept { return spread.has_value(); }
};

/// Counts over all attempts. Unparseable replies and backend failures fail
/// all three checks.
struct ValidationSummary {
    std::size_t total = 0;
    std::size_t size_ok = 0;
    std::size_t all_exist = 0;
    std::size_t no_duplicates = 0;
    std::size_t valid = 0;
    std::size_t unparseable = 0;
    std::size_t backend_errors = 0;

    double size_ratio() const noexcept { return total ? double(size_ok) / double(total) : 0.0; }
    double existence_ratio() const noexcept { return total ? double(all_exist) / double(total) : 0.0; }
    double distinct_ratio() const noexcept { return total ? double(no_duplicates) / double(total) : 0.0; }
};

ValidationSummary summarize_validation(std::span<const AttemptRecord> attempts);

struct ImRun {
    std::string network_id;
    DiffusionModel model;
    std::size_t k = 0;
    LabelMode label_mode = LabelMode::full;
    std::string image_hash;
    std::vector<AttemptRecord> attempts;
    ValidationSummary validation;
    std::vector<NodeId> best_seeds;
    SpreadEstimate best_spread;
    std::optional<std::vector<NodeId>> best_seeds_ls;
    std::optional<SpreadEstimate> best_spread_ls;
    std::optional<LocalSearchResult> ls_trace;
    bool ls_reverted = false;  // search result scored below best_seeds at full trial count
};

/// Queries every agent `attempts` times, validates and scores each reply,
/// keeps the best valid seed set and optionally refines it. Queries run in
/// order so scripted replies are consumed deterministically.
ImRun run_im(const Graph& g, std::span<const AgentProfile> agents, std::shared_ptr<const ImageArtifact> image,
             SelectorBackend& backend, const ImOptions& options);

// ---------------------------------------------------------------------------
// Dismantling

struct DismantleTrace {
    std::vector<OriginalId> removal_sequence;
    std::vector<std::size_t> lcc_curve;  // s(Q), Q = 0..removals
    std::size_t N = 0;
    double stop_fraction = 0.25;
    std::vector<char> fallback;  // per removal: reply was unusable, highest degree taken
    std::vector<std::string> raw_replies;
    std::vector<std::string> image_hashes;
};

class DismantleError : public std::runtime_error {
public:
    DismantleError(const std::string& what, DismantleTrace partial)
        : std::runtime_error(what), trace(std::move(partial)) {}
    DismantleTrace trace;
};

struct DismantleOptions {
    double stop_fraction = 0.25;
    bool relayout_each_step = true;
    LayoutKind layout = LayoutKind::fruchterman_reingold;
    std::size_t fr_iterations = 500;
    std::uint64_t rng_seed = 0;
    RenderSpec render = RenderSpec::full_label();
    std::string model_name = "gpt-4o-2024-08-06";
    double temperature = 1.0;
    std::uint32_t attempt = 0;
    std::size_t requery_budget = 2;
    /// Called with (step, image) whenever a residual graph is rendered.
    std::function<void(std::size_t, const ImageArtifact&)> on_image;
};

std::size_t stop_count(double stop_fraction, std::size_t n);

DismantleTrace dismantle(const Graph& g, SelectorBackend& backend, const DismantleOptions& options = {});

/// Highest degree in the residual graph, ties to the lowest id.
NodeId hd_step(const Graph& residual);
/// Highest collective influence at radius l, ties to the lowest id.
NodeId hci_step(const Graph& residual, std::size_t l = 2);

/// (1/N) * sum of s(Q) for Q = 1..removals.
double robustness_R(const DismantleTrace& trace);

enum class AucRule { trapezoid, step_sum };
/// Area under s(Q)/N over Q = 0..stop.
double auc(const DismantleTrace& trace, AucRule rule = AucRule::trapezoid);

}  // namespace netsight
