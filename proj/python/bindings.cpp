// Python bindings. Node ids crossing the boundary are original ids.
#include "netsight/benchtasks.hpp"
#include "netsight/community.hpp"
#include "netsight/diffusion.hpp"
#include "netsight/layout.hpp"
#include "netsight/metrics.hpp"
#include "netsight/optimize.hpp"
#include "netsight/results.hpp"
#include "netsight/viz.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace netsight;

namespace {

std::vector<NodeId> to_internal(const Graph& g, const std::vector<OriginalId>& ids) {
    std::vector<NodeId> out;
    out.reserve(ids.size());
    for (auto id : ids) {
        auto v = g.find_original(id);
        if (!v) throw DomainError("unknown node " + std::to_string(id));
        out.push_back(*v);
    }
    return out;
}

std::vector<OriginalId> to_original(const Graph& g, std::span<const NodeId> vs) {
    std::vector<OriginalId> out;
    out.reserve(vs.size());
    for (auto v : vs) out.push_back(g.original_id(v));
    return out;
}

template <class T>
std::map<OriginalId, T> by_original(const Graph& g, const std::vector<T>& values) {
    std::map<OriginalId, T> out;
    for (NodeId v = 0; v < values.size(); ++v) out.emplace(g.original_id(v), values[v]);
    return out;
}

Graph graph_from_pairs(const std::vector<std::pair<OriginalId, OriginalId>>& pairs, bool keep_lcc) {
    std::string text;
    for (auto [u, v] : pairs) text += std::to_string(u) + " " + std::to_string(v) + "\n";
    return parse_edge_list(text, {keep_lcc});
}

DiffusionModel make_model(const std::string& name, double p) { return model_from_string(name, p); }

py::dict spread_dict(const SpreadEstimate& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["std_error"] = s.std_error;
    d["trials"] = s.trials;
    d["rng_seed"] = s.rng_seed;
    return d;
}

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

std::function<NodeId(const Graph&)> heuristic_step(const std::string& method, std::size_t radius) {
    if (method == "hd") return [](const Graph& r) { return hd_step(r); };
    if (method == "hci") return [radius](const Graph& r) { return hci_step(r, radius); };
    throw DomainError("unknown adaptive heuristic '" + method + "' (expected hd or hci)");
}

}  // namespace

PYBIND11_MODULE(_netsight, m) {
    m.doc() = "netsight core";
    m.attr("__version__") = NETSIGHT_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<RenderError>(m, "RenderError", PyExc_RuntimeError);
    py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);
    py::register_exception<ScriptExhausted>(m, "ScriptExhausted", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def_static("from_edges", &graph_from_pairs, py::arg("edges"), py::arg("keep_lcc") = false,
                    "Build a graph from (u, v) pairs of original ids.")
        .def_static(
            "load", [](const std::filesystem::path& p, bool keep_lcc) { return load_edge_list_file(p, {keep_lcc}); },
            py::arg("path"), py::arg("keep_lcc") = true, "Read a whitespace-separated edge list.")
        .def_static(
            "parse", [](const std::string& text, bool keep_lcc) { return parse_edge_list(text, {keep_lcc}); },
            py::arg("text"), py::arg("keep_lcc") = true)
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("nodes", [](const Graph& g) { return g.original_ids(); })
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::pair<OriginalId, OriginalId>> out;
                 for (auto [u, v] : g.edges()) out.emplace_back(g.original_id(u), g.original_id(v));
                 return out;
             })
        .def("degree", [](const Graph& g, OriginalId v) { return g.degree(to_internal(g, {v})[0]); })
        .def("neighbors",
             [](const Graph& g, OriginalId v) { return to_original(g, g.neighbors(to_internal(g, {v})[0])); })
        .def("without_nodes",
             [](const Graph& g, const std::vector<OriginalId>& ids) {
                 const auto vs = to_internal(g, ids);
                 return g.without_nodes(vs);
             })
        .def("__len__", &Graph::node_count)
        .def("__repr__", [](const Graph& g) {
            return "<Graph nodes=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) +
                   ">";
        });

    m.def(
        "centrality",
        [](const Graph& g, const std::string& method, std::size_t ci_radius, double alpha) {
            ScoreParams params;
            params.ci_radius = ci_radius;
            params.pagerank.alpha = alpha;
            return by_original(g, compute_scores(g, centrality_from_string(method), params).values);
        },
        py::arg("graph"), py::arg("method"), py::arg("ci_radius") = 2, py::arg("alpha") = 0.85,
        "Scores keyed by node for degree, betweenness, closeness, pagerank or collective_influence.");
    m.def("connected_components", [](const Graph& g) { return by_original(g, connected_components(g).label); });
    m.def("largest_component_size", &largest_component_size);
    m.def(
        "shortest_distance",
        [](const Graph& g, OriginalId u, OriginalId v) {
            const auto ids = to_internal(g, {u, v});
            return shortest_distance(g, ids[0], ids[1]);
        },
        "Hop count, or None if unreachable.");
    m.def("has_cycle", &has_cycle);

    m.def(
        "detect_communities",
        [](const Graph& g, std::uint64_t seed) { return by_original(g, detect_communities(g, seed).membership); },
        py::arg("graph"), py::arg("seed") = 0);
    m.def(
        "merge_communities",
        [](const Graph& g, const std::map<OriginalId, std::uint32_t>& labels, std::size_t target) {
            std::vector<std::uint32_t> dense(g.node_count());
            for (NodeId v = 0; v < g.node_count(); ++v) dense[v] = labels.at(g.original_id(v));
            return by_original(g, merge_communities(g, CommunityAssignment::from_labels(dense), target).membership);
        },
        py::arg("graph"), py::arg("labels"), py::arg("target"));
    m.def("modularity", [](const Graph& g, const std::map<OriginalId, std::uint32_t>& labels) {
        std::vector<std::uint32_t> dense(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) dense[v] = labels.at(g.original_id(v));
        return modularity(g, CommunityAssignment::from_labels(dense));
    });

    m.def(
        "layout",
        [](const Graph& g, const std::string& kind, std::uint64_t seed, std::size_t iterations) {
            const auto l = compute_layout(g, layout_from_string(kind), seed, iterations);
            std::vector<std::pair<double, double>> xy;
            for (auto p : l.positions) xy.emplace_back(p.x, p.y);
            return by_original(g, xy);
        },
        py::arg("graph"), py::arg("kind") = "fr", py::arg("seed") = 0, py::arg("iterations") = 500);

    m.def(
        "visualize",
        [](const Graph& g, std::size_t target, double d, std::size_t top_n, bool adjust, const std::string& labels,
           int size, std::uint64_t seed, std::size_t iterations, bool png) {
            VizOptions o;
            o.target_communities = target;
            o.adjustment = {d, top_n};
            o.adjust = adjust;
            o.render = labels == "partial" ? RenderSpec::partial_label() : RenderSpec::full_label();
            o.render.width = o.render.height = size;
            o.rng_seed = seed;
            o.fr_iterations = iterations;
            auto r = visualize(g, o);
            if (png) r.image = rasterize(r.image);
            py::dict out;
            out["communities"] = by_original(g, r.communities.membership);
            out["detected_count"] = r.detected.community_count;
            out["svg"] = r.image.svg;
            out["png"] = py::bytes(reinterpret_cast<const char*>(r.image.png.data()), r.image.png.size());
            out["content_hash"] = r.image.content_hash;
            out["labeled_nodes"] = to_original(g, r.image.labeled_nodes);
            out["warnings"] = r.image.warnings;
            return out;
        },
        py::arg("graph"), py::arg("target_communities") = 0, py::arg("d") = 0.7, py::arg("top_n") = 5,
        py::arg("adjust") = true, py::arg("labels") = "full", py::arg("size") = 2048, py::arg("seed") = 0,
        py::arg("iterations") = 500, py::arg("png") = false,
        "Detect and merge communities, lay out and render to SVG (and PNG when png=True).");

    m.def(
        "expected_spread",
        [](const Graph& g, const std::vector<OriginalId>& seeds, const std::string& model, double p,
           std::size_t trials, std::uint64_t seed, unsigned workers) {
            const auto vs = to_internal(g, seeds);
            py::gil_scoped_release release;
            auto s = expected_spread(g, vs, make_model(model, p), trials, seed, workers);
            py::gil_scoped_acquire acquire;
            return spread_dict(s);
        },
        py::arg("graph"), py::arg("seeds"), py::arg("model") = "ic", py::arg("p") = 0.1,
        py::arg("trials") = 10000, py::arg("seed") = 0, py::arg("workers") = 0);

    m.def(
        "heuristic_seeds",
        [](const Graph& g, const std::string& method, std::size_t k, std::size_t ci_radius) {
            ScoreParams params;
            params.ci_radius = ci_radius;
            return to_original(g, heuristic_select(g, centrality_from_string(method), k, params));
        },
        py::arg("graph"), py::arg("method"), py::arg("k"), py::arg("ci_radius") = 2);

    m.def(
        "local_search",
        [](const Graph& g, const std::vector<OriginalId>& seeds, const std::string& model, double p,
           std::size_t max_iter, std::size_t trials, std::uint64_t seed) {
            const auto vs = to_internal(g, seeds);
            LocalSearchOptions o;
            o.max_iter = max_iter;
            o.trials = trials;
            o.rng_seed = seed;
            LocalSearchResult r;
            {
                py::gil_scoped_release release;
                r = local_search(g, vs, make_model(model, p), o);
            }
            py::dict out;
            out["seeds"] = to_original(g, r.seeds);
            out["accepted_spreads"] = r.accepted_spreads;
            out["evaluations"] = r.evaluations;
            out["iterations"] = r.iterations;
            return out;
        },
        py::arg("graph"), py::arg("seeds"), py::arg("model") = "ic", py::arg("p") = 0.1, py::arg("max_iter") = 5,
        py::arg("trials") = 5000, py::arg("seed") = 0);

    m.def(
        "run_im",
        [](const Graph& g, const std::vector<std::string>& replies, std::size_t k, std::size_t attempts,
           const std::string& model, double p, std::size_t trials, bool use_local_search, std::size_t ls_trials,
           std::uint64_t seed, const std::string& network_id) {
            ScriptedBackend backend(replies);
            ImOptions o;
            o.network_id = network_id;
            o.k = k;
            o.attempts = attempts;
            o.model = make_model(model, p);
            o.validation_trials = trials;
            o.local_search = use_local_search;
            o.ls.trials = ls_trials;
            o.rng_seed = seed;
            const auto agents = default_agents(LabelMode::full);
            const std::size_t n_agents = std::max<std::size_t>(1, std::min(agents.size(), replies.size() / attempts));
            const std::span<const AgentProfile> used(agents.data(), n_agents);
            return json_to_py(im_result_json(g, run_im(g, used, nullptr, backend, o), nlohmann::json::object()));
        },
        py::arg("graph"), py::arg("replies"), py::arg("k") = 10, py::arg("attempts") = 10, py::arg("model") = "ic",
        py::arg("p") = 0.1, py::arg("trials") = 100000, py::arg("local_search") = true, py::arg("ls_trials") = 5000,
        py::arg("seed") = 0, py::arg("network_id") = "network",
        "Influence maximization over recorded selector replies; returns the result document.");

    m.def(
        "dismantle",
        [](const Graph& g, const std::string& method, double stop_fraction, std::size_t ci_radius,
           const std::string& network_id) {
            DismantleTrace t;
            if (method == "hd" || method == "hci") {
                const auto step = heuristic_step(method, ci_radius);
                t.N = g.node_count();
                t.stop_fraction = stop_fraction;
                Graph residual = g;
                t.lcc_curve.push_back(largest_component_size(residual));
                for (std::size_t q = 0; q < stop_count(stop_fraction, t.N) && !residual.empty(); ++q) {
                    const NodeId drop[] = {step(residual)};
                    t.removal_sequence.push_back(residual.original_id(drop[0]));
                    t.fallback.push_back(0);
                    t.raw_replies.push_back(std::to_string(t.removal_sequence.back()));
                    residual = residual.without_nodes(drop);
                    t.lcc_curve.push_back(residual.empty() ? 0 : largest_component_size(residual));
                }
            } else {
                ScoreParams params;
                params.ci_radius = ci_radius;
                HeuristicBackend backend(centrality_from_string(method), params);
                DismantleOptions o;
                o.stop_fraction = stop_fraction;
                t = dismantle(g, backend, o);
            }
            return json_to_py(dismantle_result_json(t, network_id, nlohmann::json::object()));
        },
        py::arg("graph"), py::arg("method") = "hd", py::arg("stop_fraction") = 0.25, py::arg("ci_radius") = 2,
        py::arg("network_id") = "network",
        "Remove nodes one at a time. hd and hci score the residual graph directly; other centrality names "
        "run through the selector pipeline with a heuristic backend.");

    m.def(
        "generate",
        [](const std::string& family, const std::string& difficulty, std::uint64_t seed) {
            return generate(GenSpec::preset(family_from_string(family), difficulty_from_string(difficulty)), seed);
        },
        py::arg("family"), py::arg("difficulty") = "easy", py::arg("seed") = 0);

    m.def(
        "solve_task",
        [](const Graph& g, const std::string& task, const std::vector<OriginalId>& nodes) {
            const auto vs = to_internal(g, nodes);
            auto [truth, admissible] = solve_task(g, task_from_string(task), vs);
            return py::make_tuple(truth, admissible);
        },
        py::arg("graph"), py::arg("task"), py::arg("nodes") = std::vector<OriginalId>{});
    m.def("encode_text", [](const Graph& g, const std::string& style) {
        return encode_text(g, text_style_from_string(style));
    });
    m.def(
        "benchmark_oracle",
        [](const std::string& family, const std::string& difficulty, std::size_t n_instances,
           const std::string& presentation, std::uint64_t seed) {
            BenchOptions o;
            o.gen = GenSpec::preset(family_from_string(family), difficulty_from_string(difficulty));
            o.n_instances = n_instances;
            o.presentation.kind = presentation == "image" ? Presentation::Kind::image : Presentation::Kind::text;
            o.rng_seed = seed;
            OracleBackend backend;
            return json_to_py(bench_result_json(run_benchmark(o, backend), nlohmann::json::object()));
        },
        py::arg("family") = "ba", py::arg("difficulty") = "easy", py::arg("n_instances") = 10,
        py::arg("presentation") = "text", py::arg("seed") = 0,
        "Run the graph-task benchmark against the exact-answer backend.");

    m.def(
        "auc",
        [](const std::vector<std::size_t>& lcc_curve, std::size_t n, const std::string& rule) {
            DismantleTrace t;
            t.lcc_curve = lcc_curve;
            t.N = n;
            if (rule != "trapezoid" && rule != "step_sum") throw DomainError("rule must be trapezoid or step_sum");
            return auc(t, rule == "trapezoid" ? AucRule::trapezoid : AucRule::step_sum);
        },
        py::arg("lcc_curve"), py::arg("n"), py::arg("rule") = "trapezoid");
    m.def("robustness_R", [](const std::vector<std::size_t>& lcc_curve, std::size_t n) {
        DismantleTrace t;
        t.lcc_curve = lcc_curve;
        t.N = n;
        return robustness_R(t);
    });
    m.def("check_result_schema", [](const py::object& doc) {
        const auto text = py::module_::import("json").attr("dumps")(doc).cast<std::string>();
        return check_result_schema(nlohmann::json::parse(text));
    });
}
