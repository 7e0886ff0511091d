#pragma once

#include "netsight/graph.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace netsight {

enum class ModelKind { independent_cascade, linear_threshold };

struct DiffusionModel {
    ModelKind kind = ModelKind::independent_cascade;
    double p = 0.1;  // independent cascade only

    static DiffusionModel ic(double p) { return {ModelKind::independent_cascade, p}; }
    static DiffusionModel lt() { return {ModelKind::linear_threshold, 0.0}; }
    void validate() const;
    std::string name() const;  // "ic" or "lt"
};

DiffusionModel model_from_string(std::string_view name, double p);

struct SpreadEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    std::uint64_t rng_seed = 0;
};

/// Engine for one trial. Every trial gets its own engine derived from
/// (rng_seed, trial index), so estimates do not depend on how trials are
/// split across threads.
std::mt19937_64 trial_engine(std::uint64_t rng_seed, std::uint64_t trial);

/// One independent-cascade run; returns the number of active nodes,
/// seeds included.
std::size_t simulate_ic(const Graph& g, std::span<const NodeId> seeds, double p, std::mt19937_64& rng);

/// One linear-threshold run with in-weights 1/deg(v) and thresholds drawn
/// uniformly from [0, 1); v activates once its active weight reaches the
/// threshold.
std::size_t simulate_lt(const Graph& g, std::span<const NodeId> seeds, std::mt19937_64& rng);

std::size_t simulate(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                     std::mt19937_64& rng);

/// Monte Carlo mean and standard error over `trials` runs. `workers` = 0
/// uses the hardware concurrency.
SpreadEstimate expected_spread(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                               std::size_t trials, std::uint64_t rng_seed, unsigned workers = 0);

}  // namespace netsight
