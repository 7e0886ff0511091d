#include "netsight/benchtasks.hpp"

#include "netsight/metrics.hpp"
#include "netsight/render.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

namespace netsight {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::ba: return "ba";
        case Family::er: return "er";
        case Family::ws: return "ws";
    }
    return "unknown";
}

std::string_view to_string(Difficulty d) { return d == Difficulty::easy ? "easy" : "hard"; }

Family family_from_string(std::string_view name) {
    if (name == "ba") return Family::ba;
    if (name == "er") return Family::er;
    if (name == "ws") return Family::ws;
    throw DomainError("unknown graph family '" + std::string(name) + "'");
}

Difficulty difficulty_from_string(std::string_view name) {
    if (name == "easy") return Difficulty::easy;
    if (name == "hard") return Difficulty::hard;
    throw DomainError("unknown difficulty '" + std::string(name) + "'");
}

GenSpec GenSpec::preset(Family family, Difficulty difficulty) {
    GenSpec s;
    s.family = family;
    s.difficulty = difficulty;
    const bool easy = difficulty == Difficulty::easy;
    switch (family) {
        case Family::ba:
        case Family::ws:
            s.n_low = easy ? 5 : 15;
            s.n_high = easy ? 10 : 20;
            break;
        case Family::er:
            s.er_p = easy ? 0.2 : 0.1;
            s.n_low = easy ? 10 : 15;
            s.n_high = easy ? 15 : 20;
            break;
    }
    return s;
}

void GenSpec::validate() const {
    if (n_low < 1 || n_low > n_high) throw DomainError("node range must satisfy 1 <= low <= high");
    if (ba_m < 1) throw DomainError("ba m must be >= 1");
    if (!(er_p >= 0.0 && er_p <= 1.0)) throw DomainError("er p must lie in [0, 1]");
    if (!(ws_rewire >= 0.0 && ws_rewire <= 1.0)) throw DomainError("ws rewire must lie in [0, 1]");
    if (ws_k < 1) throw DomainError("ws k must be >= 1");
}

namespace {

using EdgeSet = std::set<Edge>;

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Graph finish(std::size_t n, const EdgeSet& edges) {
    std::vector<Edge> list(edges.begin(), edges.end());
    return Graph::from_edges(n, list);
}

Graph gen_ba(std::size_t n, std::size_t m, std::mt19937_64& rng) {
    EdgeSet edges;
    std::vector<std::size_t> deg(n, 0);
    for (NodeId v = 1; v < n; ++v) {
        const std::size_t want = std::min<std::size_t>(m, v);
        std::set<NodeId> targets;
        while (targets.size() < want) {
            double total = 0.0;
            for (NodeId u = 0; u < v; ++u)
                if (!targets.contains(u)) total += static_cast<double>(deg[u] + 1);
            double r = std::uniform_real_distribution<double>(0.0, total)(rng);
            NodeId pick = v;
            for (NodeId u = 0; u < v; ++u) {
                if (targets.contains(u)) continue;
                r -= static_cast<double>(deg[u] + 1);
                pick = u;
                if (r < 0.0) break;
            }
            targets.insert(pick);
        }
        for (NodeId u : targets) {
            edges.insert(ordered(u, v));
            ++deg[u];
            ++deg[v];
        }
    }
    return finish(n, edges);
}

Graph gen_er(std::size_t n, double p, std::mt19937_64& rng) {
    EdgeSet edges;
    std::bernoulli_distribution coin(p);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.insert({u, v});
    return finish(n, edges);
}

Graph gen_ws(std::size_t n, std::size_t k, double rewire, std::mt19937_64& rng) {
    std::vector<Edge> ring;
    EdgeSet edges;
    for (NodeId u = 0; u < n; ++u)
        for (std::size_t j = 1; j <= k; ++j) {
            const auto v = static_cast<NodeId>((u + j) % n);
            if (v == u) continue;
            if (edges.insert(ordered(u, v)).second) ring.push_back({u, v});
        }
    std::bernoulli_distribution coin(rewire);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    for (auto [u, v] : ring) {
        if (!coin(rng)) continue;
        // Skip when u is already adjacent to every other node.
        std::size_t deg_u = 0;
        for (const auto& e : edges) deg_u += (e.first == u || e.second == u);
        if (deg_u >= n - 1) continue;
        NodeId w;
        do {
            w = node(rng);
        } while (w == u || edges.contains(ordered(u, w)));
        edges.erase(ordered(u, v));
        edges.insert(ordered(u, w));
    }
    return finish(n, edges);
}

}  // namespace

Graph generate(const GenSpec& spec, std::uint64_t rng_seed) {
    spec.validate();
    std::mt19937_64 rng(rng_seed);
    const auto n = std::uniform_int_distribution<std::size_t>(spec.n_low, spec.n_high)(rng);
    switch (spec.family) {
        case Family::ba: return gen_ba(n, spec.ba_m, rng);
        case Family::er: return gen_er(n, spec.er_p, rng);
        case Family::ws: return gen_ws(n, spec.ws_k, spec.ws_rewire, rng);
    }
    throw DomainError("unknown graph family");
}

std::string_view to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::node_degree: return "node_degree";
        case TaskKind::highest_degree: return "highest_degree";
        case TaskKind::highest_betweenness: return "highest_betweenness";
        case TaskKind::shortest_distance: return "shortest_distance";
        case TaskKind::cycle_detection: return "cycle_detection";
        case TaskKind::connected_components: return "connected_components";
    }
    return "unknown";
}

const std::vector<TaskKind>& all_tasks() {
    static const std::vector<TaskKind> tasks{TaskKind::node_degree,       TaskKind::highest_degree,
                                             TaskKind::highest_betweenness, TaskKind::shortest_distance,
                                             TaskKind::cycle_detection,   TaskKind::connected_components};
    return tasks;
}

TaskKind task_from_string(std::string_view name) {
    for (TaskKind k : all_tasks())
        if (to_string(k) == name) return k;
    throw DomainError("unknown task '" + std::string(name) + "'");
}

std::string question_text(TaskKind kind, std::span<const OriginalId> nodes) {
    const std::string head = "Given the network G provided, please answer the following question: ";
    const std::string number = " The answer is a number, denoted as A1.";
    const std::string tail = " Your output should be a list as [A1] without any text and explanation.";
    auto node = [&](std::size_t i) {
        if (nodes.size() <= i) throw DomainError("question needs " + std::to_string(i + 1) + " node ids");
        return "node " + std::to_string(nodes[i]);
    };
    switch (kind) {
        case TaskKind::node_degree:
            return head + "How many connections does " + node(0) + " have?" + number + tail;
        case TaskKind::highest_degree:
            return head + "Which node has the highest degree value?" + number + tail;
        case TaskKind::highest_betweenness:
            return head + "Which node has the highest betweenness value?" + number + tail;
        case TaskKind::shortest_distance:
            return head + "What is the shortest distance between " + node(0) + " and " + node(1) +
                   "? The answer is a number or False if they cannot reach each other, denoted as A1." + tail;
        case TaskKind::cycle_detection:
            return head + "Does the network contain a cycle? The answer is either True or False, denoted as A1." +
                   tail;
        case TaskKind::connected_components:
            return head + "How many connected components does the network have?" + number + tail;
    }
    throw DomainError("unknown task");
}

namespace {

std::set<std::string> argmax_ids(const Graph& g, const std::vector<double>& values) {
    const double top = *std::max_element(values.begin(), values.end());
    std::set<std::string> out;
    for (NodeId v = 0; v < values.size(); ++v)
        if (std::abs(values[v] - top) <= 1e-9 * std::max(1.0, std::abs(top))) out.insert(std::to_string(g.original_id(v)));
    return out;
}

std::size_t params_needed(TaskKind kind) {
    return kind == TaskKind::node_degree ? 1 : kind == TaskKind::shortest_distance ? 2 : 0;
}

}  // namespace

std::pair<std::string, std::set<std::string>> solve_task(const Graph& g, TaskKind kind,
                                                         std::span<const NodeId> params) {
    if (g.empty()) throw DomainError("task graph is empty");
    if (params.size() < params_needed(kind)) throw DomainError("task is missing node parameters");
    for (NodeId v : params)
        if (!g.contains(v)) throw DomainError("task names an unknown node");
    std::string truth;
    switch (kind) {
        case TaskKind::node_degree: truth = std::to_string(g.degree(params[0])); break;
        case TaskKind::highest_degree: {
            auto adm = argmax_ids(g, degree_scores(g).values);
            return {*adm.begin(), adm};
        }
        case TaskKind::highest_betweenness: {
            auto adm = argmax_ids(g, betweenness(g).values);
            return {*adm.begin(), adm};
        }
        case TaskKind::shortest_distance: {
            const auto d = shortest_distance(g, params[0], params[1]);
            truth = d ? std::to_string(*d) : "False";
            break;
        }
        case TaskKind::cycle_detection: truth = has_cycle(g) ? "True" : "False"; break;
        case TaskKind::connected_components: truth = std::to_string(connected_components(g).count()); break;
    }
    return {truth, {truth}};
}

TaskInstance make_task(const Graph& g, TaskKind kind, std::mt19937_64& rng) {
    TaskInstance t;
    t.graph = g;
    t.kind = kind;
    const std::size_t need = params_needed(kind);
    if (need > g.node_count()) throw DomainError("graph has too few nodes for the task");
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
    while (t.params.size() < need) {
        const NodeId v = pick(rng);
        if (std::find(t.params.begin(), t.params.end(), v) == t.params.end()) t.params.push_back(v);
    }
    std::vector<OriginalId> named;
    for (NodeId v : t.params) named.push_back(g.original_id(v));
    t.question_text = question_text(kind, named);
    std::tie(t.truth, t.admissible) = solve_task(g, kind, t.params);
    return t;
}

std::string_view to_string(GradeOutcome outcome) {
    switch (outcome) {
        case GradeOutcome::correct: return "correct";
        case GradeOutcome::incorrect: return "incorrect";
        case GradeOutcome::unparseable: return "unparseable";
    }
    return "unknown";
}

std::optional<std::string> parse_answer(std::string_view raw) {
    static const std::regex answer_re(R"(\[\s*([A-Za-z]+|-?\d+)\s*\])");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(raw.begin(), raw.end(), m, answer_re)) return std::nullopt;
    std::string tok = m[1].str();
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        std::string lower;
        for (char c : tok) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lower == "true") return "True";
        if (lower == "false") return "False";
        return std::nullopt;
    }
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{}) return std::nullopt;
    return std::to_string(v);
}

GradeOutcome grade_reply(std::string_view raw, const TaskInstance& task) {
    const auto answer = parse_answer(raw);
    if (!answer) return GradeOutcome::unparseable;
    return task.admissible.contains(*answer) ? GradeOutcome::correct : GradeOutcome::incorrect;
}

bool grade(std::string_view raw, const TaskInstance& task) { return grade_reply(raw, task) == GradeOutcome::correct; }

std::string_view to_string(TextStyle style) { return style == TextStyle::expert ? "expert" : "adjacency"; }

TextStyle text_style_from_string(std::string_view name) {
    if (name == "expert") return TextStyle::expert;
    if (name == "adjacency") return TextStyle::adjacency;
    throw DomainError("unknown text style '" + std::string(name) + "'");
}

std::string encode_text(const Graph& g, TextStyle style) {
    std::string out;
    if (style == TextStyle::adjacency) {
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (u) out += '\n';
            for (NodeId v = 0; v < g.node_count(); ++v) {
                if (v) out += ' ';
                out += g.has_edge(u, v) ? '1' : '0';
            }
        }
        return out;
    }
    out = kExpertLeadSentence;
    out += " G has " + std::to_string(g.node_count()) + " nodes, numbered";
    for (NodeId v = 0; v < g.node_count(); ++v) out += (v ? ", " : " ") + std::to_string(g.original_id(v));
    out += '.';
    for (auto [u, v] : g.edges())
        out += " node " + std::to_string(g.original_id(u)) + " is connected to node " + std::to_string(g.original_id(v)) + '.';
    return out;
}

Graph parse_adjacency_text(std::string_view text) {
    std::vector<std::vector<int>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream cells(line);
        std::vector<int> row;
        std::string cell;
        while (cells >> cell) {
            if (cell != "0" && cell != "1") throw ParseError(lineno, "adjacency entries must be 0 or 1");
            row.push_back(cell == "1");
        }
        if (row.empty()) continue;
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        if (rows[u].size() != n) throw ParseError(u + 1, "adjacency matrix is not square");
        for (NodeId v = 0; v < n; ++v) {
            if (rows[u][v] != rows[v].at(u)) throw ParseError(u + 1, "adjacency matrix is not symmetric");
            if (u < v && rows[u][v]) edges.push_back({u, v});
        }
    }
    return Graph::from_edges(n, edges);
}

SelectorResponse OracleBackend::query(const SelectorRequest& request) {
    const auto& g = request.context.graph;
    if (!g) throw DomainError("oracle backend needs a context graph");
    const auto [truth, admissible] = solve_task(*g, task_from_string(request.context.task), request.context.task_nodes);
    SelectorResponse r;
    r.backend = BackendKind::heuristic;
    r.raw_text = "[" + truth + "]";
    return r;
}

std::string Presentation::name() const {
    if (kind == Kind::text) return "text-" + std::string(to_string(style));
    std::string layout_name = layout == LayoutKind::fruchterman_reingold ? "fr" : std::string(to_string(layout));
    return "image-" + layout_name + (alternative_palette ? "-alt" : "-default");
}

BenchResult run_benchmark(const BenchOptions& options, SelectorBackend& backend) {
    options.gen.validate();
    if (options.tasks.empty()) throw DomainError("no benchmark tasks selected");
    const bool image_mode = options.presentation.kind == Presentation::Kind::image;

    BenchResult result;
    for (TaskKind t : options.tasks) {
        BenchCell cell;
        cell.family = options.gen.family;
        cell.difficulty = options.gen.difficulty;
        cell.task = t;
        cell.presentation = options.presentation.name();
        result.cells.push_back(cell);
    }

    RenderSpec spec = RenderSpec::full_label();
    spec.width = spec.height = 768;
    spec.node_radius = 14.0;
    spec.font_px = 22.0;
    if (options.presentation.alternative_palette) {
        spec.palette = alternative_palette();
        spec.uniform_fill = spec.palette.front();
    }

    for (std::size_t i = 0; i < options.n_instances; ++i) {
        auto rng = trial_engine(options.rng_seed, i);
        const Graph g = generate(options.gen, rng());
        const auto graph = std::make_shared<const Graph>(g);

        std::shared_ptr<const ImageArtifact> image;
        std::string lead;
        if (image_mode) {
            lead = kImageLeadSentence;
            if (backend.consumes_image()) {
                const auto layout = compute_layout(g, options.presentation.layout, rng());
                image = std::make_shared<const ImageArtifact>(render(g, layout, nullptr, spec));
            }
        } else {
            lead = encode_text(g, options.presentation.style);
            if (options.presentation.style == TextStyle::adjacency)
                lead = std::string(kAdjacencyLeadSentence) + "\n" + lead;
        }

        for (std::size_t ti = 0; ti < options.tasks.size(); ++ti) {
            const TaskInstance task = make_task(g, options.tasks[ti], rng);
            SelectorRequest req;
            req.image = image;
            req.prompt = lead + "\n" + task.question_text;
            req.model_name = options.model_name;
            req.temperature = options.temperature;
            req.attempt = static_cast<std::uint32_t>(i);
            req.context = {graph, std::string(to_string(task.kind)), 1, task.params};

            BenchRecord rec;
            rec.instance = i;
            rec.task = task.kind;
            rec.truth = task.truth;
            auto& cell = result.cells[ti];
            ++cell.instances;
            try {
                rec.raw_text = backend.query(req).raw_text;
                rec.outcome = grade_reply(rec.raw_text, task);
            } catch (const std::exception& e) {
                rec.error = e.what();
                rec.outcome = GradeOutcome::incorrect;
                ++cell.errors;
            }
            cell.correct += rec.outcome == GradeOutcome::correct;
            cell.unparseable += rec.outcome == GradeOutcome::unparseable;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::string bench_to_csv(std::span<const BenchCell> cells) {
    std::ostringstream out;
    out << "family,difficulty,task,presentation,instances,correct,unparseable,errors,accuracy\n";
    for (const auto& c : cells) {
        char acc[32];
        std::snprintf(acc, sizeof acc, "%.4f", c.accuracy());
        out << to_string(c.family) << ',' << to_string(c.difficulty) << ',' << to_string(c.task) << ','
            << c.presentation << ',' << c.instances << ',' << c.correct << ',' << c.unparseable << ',' << c.errors
            << ',' << acc << '\n';
    }
    return out.str();
}

}  // namespace netsight
