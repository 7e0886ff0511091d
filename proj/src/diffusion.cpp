#include "netsight/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace netsight {

void DiffusionModel::validate() const {
    if (kind == ModelKind::independent_cascade && !(p >= 0.0 && p <= 1.0))
        throw DomainError("ic probability must lie in [0, 1]");
}

std::string DiffusionModel::name() const { return kind == ModelKind::independent_cascade ? "ic" : "lt"; }

DiffusionModel model_from_string(std::string_view name, double p) {
    if (name == "ic") return DiffusionModel::ic(p);
    if (name == "lt") return DiffusionModel::lt();
    throw DomainError("unknown diffusion model '" + std::string(name) + "'");
}

std::mt19937_64 trial_engine(std::uint64_t rng_seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

namespace {

void check_seeds(const Graph& g, std::span<const NodeId> seeds) {
    if (seeds.empty()) throw DomainError("seed set is empty");
    for (NodeId s : seeds)
        if (!g.contains(s)) throw DomainError("unknown seed node " + std::to_string(s));
}

}  // namespace

std::size_t simulate_ic(const Graph& g, std::span<const NodeId> seeds, double p, std::mt19937_64& rng) {
    check_seeds(g, seeds);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<char> active(g.node_count(), 0);
    std::vector<NodeId> frontier;
    for (NodeId s : seeds)
        if (!active[s]) {
            active[s] = 1;
            frontier.push_back(s);
        }
    std::size_t count = frontier.size();
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        NodeId v = frontier[head];
        for (NodeId w : g.neighbors(v)) {
            if (active[w]) continue;
            if (coin(rng) < p) {
                active[w] = 1;
                frontier.push_back(w);
                ++count;
            }
        }
    }
    return count;
}

std::size_t simulate_lt(const Graph& g, std::span<const NodeId> seeds, std::mt19937_64& rng) {
    check_seeds(g, seeds);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = g.node_count();
    std::vector<double> threshold(n), weight(n, 0.0);
    for (auto& t : threshold) t = unit(rng);

    std::vector<char> active(n, 0);
    std::vector<NodeId> frontier;
    for (NodeId s : seeds)
        if (!active[s]) {
            active[s] = 1;
            frontier.push_back(s);
        }
    std::size_t count = frontier.size();
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        NodeId u = frontier[head];
        for (NodeId v : g.neighbors(u)) {
            if (active[v]) continue;
            weight[v] += 1.0 / static_cast<double>(g.degree(v));
            // Guard against the last 1/deg sum landing a hair below 1.0.
            if (weight[v] + 1e-12 >= threshold[v]) {
                active[v] = 1;
                frontier.push_back(v);
                ++count;
            }
        }
    }
    return count;
}

std::size_t simulate(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                     std::mt19937_64& rng) {
    return model.kind == ModelKind::independent_cascade ? simulate_ic(g, seeds, model.p, rng)
                                                        : simulate_lt(g, seeds, rng);
}

SpreadEstimate expected_spread(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                               std::size_t trials, std::uint64_t rng_seed, unsigned workers) {
    model.validate();
    check_seeds(g, seeds);
    if (trials < 1) throw DomainError("trials must be >= 1");

    std::vector<std::uint32_t> counts(trials);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            auto rng = trial_engine(rng_seed, t);
            counts[t] = static_cast<std::uint32_t>(simulate(g, seeds, model, rng));
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, (trials + 255) / 256));
    if (workers <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk, end = std::min(trials, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
    }

    // Summed in trial order so the result is independent of the split.
    double sum = 0.0, sum_sq = 0.0;
    for (auto c : counts) {
        sum += c;
        sum_sq += static_cast<double>(c) * c;
    }
    const double nt = static_cast<double>(trials);
    SpreadEstimate est{sum / nt, 0.0, trials, rng_seed};
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / nt) / (nt - 1.0));
        est.std_error = std::sqrt(var / nt);
    }
    return est;
}

}  // namespace netsight
