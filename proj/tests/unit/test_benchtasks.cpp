#include "netsight/benchtasks.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace netsight;

namespace {

Graph triangle() { return Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}); }

TaskInstance instance(Graph g, TaskKind kind, std::vector<NodeId> params = {}) {
    TaskInstance t;
    t.graph = std::move(g);
    t.kind = kind;
    t.params = std::move(params);
    std::tie(t.truth, t.admissible) = solve_task(t.graph, kind, t.params);
    return t;
}

std::set<std::string> argmax_oracle(const std::vector<double>& s) {
    const double top = *std::max_element(s.begin(), s.end());
    std::set<std::string> out;
    for (std::size_t v = 0; v < s.size(); ++v)
        if (std::abs(s[v] - top) <= 1e-9) out.insert(std::to_string(v));
    return out;
}

}  // namespace

TEST_CASE("generator presets") {
    auto er_hard = GenSpec::preset(Family::er, Difficulty::hard);
    CHECK(er_hard.er_p == 0.1);
    CHECK(GenSpec::preset(Family::er, Difficulty::easy).er_p == 0.2);
    auto ba_easy = GenSpec::preset(Family::ba, Difficulty::easy);
    CHECK(ba_easy.n_low == 5);
    CHECK(ba_easy.n_high == 10);
    CHECK(GenSpec::preset(Family::ws, Difficulty::hard).n_low == 15);
    for (auto f : {Family::ba, Family::er, Family::ws}) {
        CHECK(family_from_string(to_string(f)) == f);
        for (auto d : {Difficulty::easy, Difficulty::hard}) CHECK_NOTHROW(GenSpec::preset(f, d).validate());
    }
    CHECK(difficulty_from_string("hard") == Difficulty::hard);
    CHECK_THROWS_AS((void)family_from_string("grid"), DomainError);

    GenSpec bad;
    bad.n_low = 10;
    bad.n_high = 5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("generated graphs respect their family") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        for (auto d : {Difficulty::easy, Difficulty::hard}) {
            const auto ba_spec = GenSpec::preset(Family::ba, d);
            auto ba = generate(ba_spec, seed);
            CHECK(ba.node_count() >= ba_spec.n_low);
            CHECK(ba.node_count() <= ba_spec.n_high);
            CHECK(connected_components(ba).count() == 1);
            // Node v > 0 brings min(m, v) edges.
            std::size_t want = 0;
            for (std::size_t v = 1; v < ba.node_count(); ++v) want += std::min<std::size_t>(ba_spec.ba_m, v);
            CHECK(ba.edge_count() == want);

            auto ws = generate(GenSpec::preset(Family::ws, d), seed);
            CHECK(ws.edge_count() == ws.node_count());
        }
    }
    CHECK(generate(GenSpec::preset(Family::er, Difficulty::hard), 5).edges() ==
          generate(GenSpec::preset(Family::er, Difficulty::hard), 5).edges());
}

TEST_CASE("erdos-renyi edge density matches p") {
    GenSpec spec = GenSpec::preset(Family::er, Difficulty::hard);
    spec.n_low = spec.n_high = 20;
    double edges = 0.0;
    const int runs = 400;
    for (int s = 0; s < runs; ++s) edges += static_cast<double>(generate(spec, s).edge_count());
    const double pairs = 190.0;
    const double mean = edges / runs;
    const double se = std::sqrt(pairs * 0.1 * 0.9 / runs);
    CHECK(std::abs(mean - pairs * 0.1) < 4 * se);
}

TEST_CASE("task truths agree with brute force") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 60; ++i) {
        auto g = generate(GenSpec::preset(static_cast<Family>(i % 3), static_cast<Difficulty>(i % 2)), i);
        const auto fw = oracle::floyd_warshall(g);
        for (auto kind : all_tasks()) {
            auto t = make_task(g, kind, rng);
            switch (kind) {
                case TaskKind::node_degree: {
                    const auto row = oracle::adjacency(g)[t.params[0]];
                    CHECK(t.truth == std::to_string(std::count(row.begin(), row.end(), true)));
                    break;
                }
                case TaskKind::highest_degree: {
                    std::vector<double> deg(g.node_count());
                    for (NodeId v = 0; v < g.node_count(); ++v) deg[v] = static_cast<double>(g.degree(v));
                    CHECK(t.admissible == argmax_oracle(deg));
                    break;
                }
                case TaskKind::highest_betweenness:
                    CHECK(t.admissible == argmax_oracle(oracle::betweenness(g)));
                    break;
                case TaskKind::shortest_distance: {
                    REQUIRE(t.params.size() == 2);
                    CHECK(t.params[0] != t.params[1]);
                    const auto d = fw[t.params[0]][t.params[1]];
                    CHECK(t.truth == (d == oracle::kInf ? std::string("False") : std::to_string(d)));
                    break;
                }
                case TaskKind::cycle_detection:
                    CHECK(t.truth == (oracle::has_cycle(g) ? "True" : "False"));
                    break;
                case TaskKind::connected_components:
                    CHECK(t.truth == std::to_string(oracle::components(g).size()));
                    break;
            }
            CHECK(t.admissible.contains(t.truth));
            CHECK(t.question_text.find("[A1]") != std::string::npos);
        }
    }
}

TEST_CASE("task examples") {
    CHECK(instance(triangle(), TaskKind::cycle_detection).truth == "True");
    auto pair = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    CHECK(instance(pair, TaskKind::shortest_distance, {0, 3}).truth == "False");
    std::vector<Edge> e;
    for (NodeId i = 1; i <= 4; ++i) e.push_back({0, i});
    auto star = Graph::from_edges(5, e);
    CHECK(instance(star, TaskKind::highest_degree).admissible == std::set<std::string>{"0"});
    CHECK_THROWS_AS((void)solve_task(star, TaskKind::node_degree, {}), DomainError);
}

TEST_CASE("question wording names the requested nodes") {
    const OriginalId two[] = {3, 8};
    const auto q = question_text(TaskKind::shortest_distance, two);
    CHECK(q.find("node 3") != std::string::npos);
    CHECK(q.find("node 8") != std::string::npos);
    CHECK(q.find("False if they cannot reach each other") != std::string::npos);
    CHECK(question_text(TaskKind::cycle_detection).find("True or False") != std::string::npos);
    for (auto k : all_tasks()) CHECK(task_from_string(to_string(k)) == k);
}

TEST_CASE("grading") {
    auto deg = instance(triangle(), TaskKind::node_degree, {0});
    CHECK(deg.truth == "2");
    CHECK(grade("[2]", deg));
    CHECK(grade("The answer: [ 2 ]", deg));
    CHECK(grade("[02]", deg));
    CHECK_FALSE(grade("[3]", deg));
    CHECK(grade_reply("two", deg) == GradeOutcome::unparseable);
    CHECK(grade_reply("[two]", deg) == GradeOutcome::unparseable);

    auto cyc = instance(triangle(), TaskKind::cycle_detection);
    CHECK(grade("[true]", cyc));
    CHECK(grade("[TRUE]", cyc));
    CHECK_FALSE(grade("[False]", cyc));

    // Two tied hubs: either is accepted.
    auto tied = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {0, 2}, {3, 4}, {3, 5}});
    auto hd = instance(tied, TaskKind::highest_degree);
    CHECK(hd.admissible == std::set<std::string>{"0", "3"});
    CHECK(grade("[0]", hd));
    CHECK(grade("[3]", hd));
    CHECK_FALSE(grade("[1]", hd));

    CHECK(parse_answer("x [False] y") == std::optional<std::string>{"False"});
    CHECK(parse_answer("[-1]") == std::optional<std::string>{"-1"});
    CHECK_FALSE(parse_answer("[]").has_value());
}

TEST_CASE("adjacency text encoding") {
    auto edge = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
    CHECK(encode_text(edge, TextStyle::adjacency) == "0 1\n1 0");

    std::mt19937_64 rng(16);
    for (int i = 0; i < 30; ++i) {
        auto g = oracle::random_graph(1 + rng() % 15, 40, rng);
        auto back = parse_adjacency_text(encode_text(g, TextStyle::adjacency));
        CHECK(back.node_count() == g.node_count());
        CHECK(back.edges() == g.edges());
    }
    CHECK_THROWS_AS((void)parse_adjacency_text("0 1\n0 0"), ParseError);
    CHECK_THROWS_AS((void)parse_adjacency_text("0 2\n2 0"), ParseError);
    CHECK_THROWS_AS((void)parse_adjacency_text("0 1 0\n1 0"), ParseError);
}

TEST_CASE("expert text encoding has one sentence per edge") {
    auto g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const auto text = encode_text(g, TextStyle::expert);
    CHECK(text.starts_with(kExpertLeadSentence));
    std::size_t sentences = 0;
    for (auto pos = text.find(" is connected to node "); pos != std::string::npos;
         pos = text.find(" is connected to node ", pos + 1))
        ++sentences;
    CHECK(sentences == 4);
    CHECK(text.find("node 2 is connected to node 3.") != std::string::npos);
    CHECK(text_style_from_string(to_string(TextStyle::expert)) == TextStyle::expert);
}

TEST_CASE("oracle backend scores perfectly in every presentation") {
    for (auto kind : {Presentation::Kind::image, Presentation::Kind::text}) {
        for (auto fam : {Family::ba, Family::er, Family::ws}) {
            BenchOptions o;
            o.gen = GenSpec::preset(fam, Difficulty::easy);
            o.n_instances = 8;
            o.presentation.kind = kind;
            o.presentation.style = fam == Family::er ? TextStyle::adjacency : TextStyle::expert;
            o.rng_seed = 4;
            OracleBackend b;
            auto result = run_benchmark(o, b);
            REQUIRE(result.cells.size() == all_tasks().size());
            for (const auto& c : result.cells) {
                CHECK(c.instances == 8);
                CHECK(c.accuracy() == 1.0);
            }
            CHECK(result.records.size() == 8 * all_tasks().size());
        }
    }
}

TEST_CASE("a constant wrong answer on cycle tasks scores zero") {
    BenchOptions o;
    o.gen = GenSpec::preset(Family::ws, Difficulty::easy);
    o.tasks = {TaskKind::cycle_detection};
    o.n_instances = 20;
    o.presentation.kind = Presentation::Kind::text;
    ScriptedBackend b(std::vector<std::string>(20, "[0]"));
    auto result = run_benchmark(o, b);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.cells[0].correct == 0);
    CHECK(result.cells[0].accuracy() == 0.0);
    for (const auto& r : result.records) CHECK(r.truth == "True");
}

TEST_CASE("backend failures count as incorrect and are recorded") {
    BenchOptions o;
    o.tasks = {TaskKind::node_degree};
    o.n_instances = 3;
    o.presentation.kind = Presentation::Kind::text;
    ScriptedBackend b({"[1]"});
    auto result = run_benchmark(o, b);
    CHECK(result.cells[0].errors == 2);
    CHECK_FALSE(result.records[2].error.empty());
}

TEST_CASE("benchmark csv") {
    BenchCell c;
    c.task = TaskKind::cycle_detection;
    c.presentation = "text-expert";
    c.instances = 4;
    c.correct = 3;
    const std::vector<BenchCell> cells{c};
    const auto csv = bench_to_csv(cells);
    CHECK(csv.find("cycle_detection") != std::string::npos);
    CHECK(csv.find("0.75") != std::string::npos);
    CHECK(Presentation{}.name() == "image-fr-default");
}
