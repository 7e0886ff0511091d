#include "netsight/optimize.hpp"

#include "netsight/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace netsight {

namespace {

// Non-owning handle for RequestContext; the caller's graph outlives the call.
std::shared_ptr<const Graph> borrow(const Graph& g) { return std::shared_ptr<const Graph>(std::shared_ptr<void>{}, &g); }

void check_seed_set(const Graph& g, std::span<const NodeId> seeds) {
    if (seeds.empty()) throw DomainError("seed set is empty");
    std::set<NodeId> seen;
    for (NodeId s : seeds) {
        if (!g.contains(s)) throw DomainError("unknown seed node " + std::to_string(s));
        if (!seen.insert(s).second) throw DomainError("duplicate seed node " + std::to_string(s));
    }
}

}  // namespace

LocalSearchResult local_search(const Graph& g, std::span<const NodeId> seeds, const DiffusionModel& model,
                               const LocalSearchOptions& options) {
    check_seed_set(g, seeds);
    if (options.max_iter < 1) throw DomainError("max_iter must be >= 1");

    const auto deg = degree_scores(g).values;
    const auto btw = betweenness(g).values;
    std::mt19937_64 coin_rng(options.rng_seed);
    std::bernoulli_distribution coin(0.5);

    LocalSearchResult out;
    out.seeds.assign(seeds.begin(), seeds.end());
    auto evaluate = [&](const std::vector<NodeId>& s) {
        ++out.evaluations;
        return expected_spread(g, s, model, options.trials, options.rng_seed, options.workers).mean;
    };
    double best = evaluate(out.seeds);
    out.accepted_spreads.push_back(best);

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        ++out.iterations;
        bool improved = false;
        for (std::size_t i = 0; i < out.seeds.size(); ++i) {
            const NodeId v = out.seeds[i];
            const auto& score = coin(coin_rng) ? deg : btw;
            std::vector<NodeId> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
            std::stable_sort(nbrs.begin(), nbrs.end(), [&](NodeId a, NodeId b) { return score[a] > score[b]; });
            auto it = std::find_if(nbrs.begin(), nbrs.end(), [&](NodeId u) {
                return std::find(out.seeds.begin(), out.seeds.end(), u) == out.seeds.end();
            });
            if (it == nbrs.end()) continue;

            auto candidate = out.seeds;
            candidate[i] = *it;
            const double spread = evaluate(candidate);
            if (spread > best) {
                out.seeds = std::move(candidate);
                best = spread;
                out.accepted_spreads.push_back(best);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return out;
}

ValidationSummary summarize_validation(std::span<const AttemptRecord> attempts) {
    ValidationSummary s;
    for (const auto& a : attempts) {
        ++s.total;
        if (!a.error.empty()) {
            ++s.backend_errors;
            continue;
        }
        if (!a.parsed) {
            ++s.unparseable;
            continue;
        }
        s.size_ok += a.validation.size_ok;
        s.all_exist += a.validation.all_exist;
        s.no_duplicates += a.validation.no_duplicates;
        s.valid += a.validation.valid();
    }
    return s;
}

ImRun run_im(const Graph& g, std::span<const AgentProfile> agents, std::shared_ptr<const ImageArtifact> image,
             SelectorBackend& backend, const ImOptions& options) {
    if (options.k < 1 || options.k > g.node_count()) throw DomainError("k must lie in [1, node count]");
    if (agents.empty()) throw DomainError("no agents configured");
    if (options.attempts < 1) throw DomainError("attempts must be >= 1");
    options.model.validate();
    if (backend.consumes_image() && !image) throw DomainError("backend needs a rendered image");

    ImRun run;
    run.network_id = options.network_id;
    run.model = options.model;
    run.k = options.k;
    run.label_mode = agents.front().label_mode;
    if (image) run.image_hash = image->content_hash;

    const auto graph = borrow(g);
    std::vector<Attempt> scored;
    std::vector<std::size_t> scored_index;
    for (const auto& agent : agents) {
        const std::string prompt = build_im_prompt(agent, options.k);
        for (std::uint32_t a = 0; a < options.attempts; ++a) {
            AttemptRecord rec;
            rec.agent_id = agent.agent_id;
            rec.agent_name = agent.name;
            rec.attempt = a;
            for (std::size_t q = 0; q <= options.requery_budget; ++q) {
                SelectorRequest req;
                req.image = image;
                req.prompt = prompt;
                req.model_name = options.model_name;
                req.temperature = options.temperature;
                req.attempt = static_cast<std::uint32_t>(a * (options.requery_budget + 1) + q);
                req.context = {graph, "im", options.k, {}};
                rec.request_id = req.request_id();
                rec.error.clear();
                try {
                    auto resp = backend.query(req);
                    rec.raw_text = resp.raw_text;
                    rec.cached = resp.cached;
                } catch (const DomainError&) {
                    throw;
                } catch (const std::exception& e) {
                    rec.error = e.what();
                    rec.raw_text.clear();
                    break;
                }
                rec.parsed = try_parse_node_list(rec.raw_text);
                rec.validation = rec.parsed ? validate_seed_set(g, *rec.parsed, options.k) : ValidationReport{};
                if (rec.validation.valid()) break;
            }
            if (rec.validation.valid() && rec.error.empty()) {
                for (OriginalId id : *rec.parsed) rec.seeds.push_back(*g.find_original(id));
                rec.spread = expected_spread(g, rec.seeds, options.model, options.validation_trials, options.rng_seed,
                                             options.workers);
                scored.push_back({rec.seeds, *rec.spread});
                scored_index.push_back(run.attempts.size());
            }
            run.attempts.push_back(std::move(rec));
        }
    }

    run.validation = summarize_validation(run.attempts);
    if (scored.empty()) {
        const auto& v = run.validation;
        std::ostringstream msg;
        msg << "no valid attempts out of " << v.total << ": " << v.backend_errors << " backend errors, "
            << v.unparseable << " unparseable, " << (v.total - v.size_ok - v.unparseable - v.backend_errors)
            << " wrong size, " << (v.total - v.all_exist - v.unparseable - v.backend_errors)
            << " with unknown nodes, " << (v.total - v.no_duplicates - v.unparseable - v.backend_errors)
            << " with duplicates";
        throw PipelineError(msg.str());
    }

    const std::size_t best = best_attempt(scored);
    run.best_seeds = scored[best].seeds;
    run.best_spread = scored[best].spread;

    if (options.local_search) {
        auto ls_opts = options.ls;
        if (ls_opts.workers == 0) ls_opts.workers = options.workers;
        auto ls = local_search(g, run.best_seeds, options.model, ls_opts);
        auto ls_spread = expected_spread(g, ls.seeds, options.model, options.validation_trials, options.rng_seed,
                                         options.workers);
        if (ls_spread.mean < run.best_spread.mean) {
            run.ls_reverted = true;
            run.best_seeds_ls = run.best_seeds;
            run.best_spread_ls = run.best_spread;
        } else {
            run.best_seeds_ls = ls.seeds;
            run.best_spread_ls = ls_spread;
        }
        run.ls_trace = std::move(ls);
    }
    return run;
}

std::size_t stop_count(double stop_fraction, std::size_t n) {
    if (!(stop_fraction > 0.0 && stop_fraction <= 1.0)) throw DomainError("stop_fraction must lie in (0, 1]");
    return std::min(n, static_cast<std::size_t>(std::floor(stop_fraction * static_cast<double>(n) + 1e-9)));
}

NodeId hd_step(const Graph& residual) {
    if (residual.empty()) throw DomainError("residual graph is empty");
    NodeId best = 0;
    for (NodeId v = 1; v < residual.node_count(); ++v)
        if (residual.degree(v) > residual.degree(best)) best = v;
    return best;
}

NodeId hci_step(const Graph& residual, std::size_t l) {
    if (residual.empty()) throw DomainError("residual graph is empty");
    const auto ci = collective_influence_scores(residual, l).values;
    return static_cast<NodeId>(std::max_element(ci.begin(), ci.end()) - ci.begin());
}

DismantleTrace dismantle(const Graph& g, SelectorBackend& backend, const DismantleOptions& options) {
    DismantleTrace trace;
    trace.N = g.node_count();
    trace.stop_fraction = options.stop_fraction;
    const std::size_t stop = stop_count(options.stop_fraction, trace.N);
    const bool draw = backend.consumes_image() || static_cast<bool>(options.on_image);
    if (draw) options.render.validate();

    // Positions keyed by original-graph node id, used when the layout is frozen.
    std::optional<LayoutResult> frozen;
    if (draw && !options.relayout_each_step)
        frozen = compute_layout(g, options.layout, options.rng_seed, options.fr_iterations);

    std::vector<NodeId> removed;
    std::set<OriginalId> removed_ids;
    Graph residual = g;
    trace.lcc_curve.push_back(residual.empty() ? 0 : largest_component_size(residual));
    const std::string prompt = build_dismantle_prompt();

    for (std::size_t step = 0; step < stop; ++step) {
        std::shared_ptr<const ImageArtifact> image;
        if (draw) {
            LayoutResult layout;
            if (frozen) {
                layout.kind = frozen->kind;
                layout.rng_seed = frozen->rng_seed;
                for (OriginalId id : residual.original_ids())
                    layout.positions.push_back(frozen->positions[*g.find_original(id)]);
            } else {
                layout = compute_layout(residual, options.layout, options.rng_seed, options.fr_iterations);
            }
            image = std::make_shared<const ImageArtifact>(render(residual, layout, nullptr, options.render));
            trace.image_hashes.push_back(image->content_hash);
            if (options.on_image) options.on_image(step, *image);
        }

        const auto graph = std::make_shared<const Graph>(residual);
        std::optional<NodeId> choice;
        std::string raw;
        for (std::size_t q = 0; q <= options.requery_budget && !choice; ++q) {
            SelectorRequest req;
            req.image = image;
            req.prompt = prompt;
            req.model_name = options.model_name;
            req.temperature = options.temperature;
            req.attempt = static_cast<std::uint32_t>(options.attempt * (options.requery_budget + 1) + q);
            req.context = {graph, "dismantle", 1, {}};
            try {
                raw = backend.query(req).raw_text;
            } catch (const std::exception& e) {
                throw DismantleError(std::string("selector failed at step ") + std::to_string(step) + ": " + e.what(),
                                     trace);
            }
            try {
                const OriginalId id = parse_single_node(raw);
                if (!removed_ids.contains(id)) choice = residual.find_original(id);
            } catch (const ReplyParseError&) {
            }
        }
        trace.raw_replies.push_back(raw);
        trace.fallback.push_back(!choice);
        const NodeId pick = choice ? *choice : hd_step(residual);
        const OriginalId pick_id = residual.original_id(pick);

        trace.removal_sequence.push_back(pick_id);
        removed_ids.insert(pick_id);
        const NodeId drop[] = {pick};
        residual = residual.without_nodes(drop);
        trace.lcc_curve.push_back(residual.empty() ? 0 : largest_component_size(residual));
    }
    return trace;
}

double robustness_R(const DismantleTrace& trace) {
    if (trace.N == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t q = 1; q < trace.lcc_curve.size(); ++q) sum += static_cast<double>(trace.lcc_curve[q]);
    return sum / static_cast<double>(trace.N);
}

double auc(const DismantleTrace& trace, AucRule rule) {
    if (trace.N == 0 || trace.lcc_curve.size() < 2) return 0.0;
    const double n = static_cast<double>(trace.N);
    double sum = 0.0;
    for (std::size_t q = 1; q < trace.lcc_curve.size(); ++q) {
        const double right = static_cast<double>(trace.lcc_curve[q]) / n;
        const double left = static_cast<double>(trace.lcc_curve[q - 1]) / n;
        sum += rule == AucRule::trapezoid ? 0.5 * (left + right) : right;
    }
    return sum;
}

}  // namespace netsight
