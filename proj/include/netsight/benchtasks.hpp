#pragma once

#include "netsight/graph.hpp"
#include "netsight/layout.hpp"
#include "netsight/selection.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace netsight {

// ---------------------------------------------------------------------------
// Synthetic graphs

enum class Family { ba, er, ws };
enum class Difficulty { easy, hard };
std::string_view to_string(Family f);
std::string_view to_string(Difficulty d);
Family family_from_string(std::string_view name);
Difficulty difficulty_from_string(std::string_view name);

struct GenSpec {
    Family family = Family::ba;
    Difficulty difficulty = Difficulty::easy;
    std::size_t ba_m = 2;
    double er_p = 0.2;
    std::size_t ws_k = 1;  // neighbours per side
    double ws_rewire = 0.2;
    std::size_t n_low = 5;
    std::size_t n_high = 10;

    /// Parameters for a family/difficulty cell of the benchmark.
    static GenSpec preset(Family family, Difficulty difficulty);
    void validate() const;
};

/// Node count uniform in [n_low, n_high]. BA grows from one node, each new
/// node attaching to min(m, existing) distinct targets with probability
/// proportional to degree + 1. WS rewires each ring edge's far endpoint with
/// the given probability, avoiding loops and multi-edges. Isolated nodes are
/// kept; node ids are 0..n-1.
Graph generate(const GenSpec& spec, std::uint64_t rng_seed);

// ---------------------------------------------------------------------------
// Tasks

enum class TaskKind {
    node_degree,
    highest_degree,
    highest_betweenness,
    shortest_distance,
    cycle_detection,
    connected_components,
};
std::string_view to_string(TaskKind kind);
TaskKind task_from_string(std::string_view name);
const std::vector<TaskKind>& all_tasks();

struct TaskInstance {
    Graph graph;
    TaskKind kind = TaskKind::node_degree;
    std::vector<NodeId> params;  // node ids named in the question
    std::string question_text;
    std::string truth;                  // "3", "True", "False"
    std::set<std::string> admissible;  // every accepted answer
};

/// Question wording for a kind, with the named nodes substituted.
std::string question_text(TaskKind kind, std::span<const OriginalId> nodes = {});

/// Truth and admissible answers computed from the graph.
std::pair<std::string, std::set<std::string>> solve_task(const Graph& g, TaskKind kind, std::span<const NodeId> params);

/// Samples the named nodes (distinct when two are needed) and solves.
TaskInstance make_task(const Graph& g, TaskKind kind, std::mt19937_64& rng);

enum class GradeOutcome { correct, incorrect, unparseable };
std::string_view to_string(GradeOutcome outcome);

/// Reads the first bracketed answer; integers are normalized, true/false
/// are matched case-insensitively.
std::optional<std::string> parse_answer(std::string_view raw);
GradeOutcome grade_reply(std::string_view raw, const TaskInstance& task);
bool grade(std::string_view raw, const TaskInstance& task);

// ---------------------------------------------------------------------------
// Text encodings

enum class TextStyle { expert, adjacency };
std::string_view to_string(TextStyle style);
TextStyle text_style_from_string(std::string_view name);

inline constexpr std::string_view kImageLeadSentence =
    "You are an expert in network science and will be provided with a network G in the form of an image.";
inline constexpr std::string_view kExpertLeadSentence =
    "You are an expert in network science and will be provided with a network G described in text.";
inline constexpr std::string_view kAdjacencyLeadSentence =
    "You are an expert in network science and will be provided with a network G as an adjacency matrix, "
    "where row i and column j are 1 if node i and node j are connected.";

/// adjacency: one row of 0/1 entries per node, no trailing newline.
/// expert: lead sentence, then "node i is connected to node j." per edge.
std::string encode_text(const Graph& g, TextStyle style);
Graph parse_adjacency_text(std::string_view text);

// ---------------------------------------------------------------------------
// Harness

/// Answers from the instance's own graph via RequestContext, so accuracy is
/// 100% by construction.
class OracleBackend final : public SelectorBackend {
public:
    SelectorResponse query(const SelectorRequest& request) override;
    BackendKind kind() const override { return BackendKind::heuristic; }
};

struct Presentation {
    enum class Kind { image, text } kind = Kind::image;
    LayoutKind layout = LayoutKind::fruchterman_reingold;
    bool alternative_palette = false;
    TextStyle style = TextStyle::expert;
    std::string name() const;  // e.g. "image-fr-default", "text-adjacency"
};

struct BenchOptions {
    GenSpec gen;
    std::vector<TaskKind> tasks = all_tasks();
    std::size_t n_instances = 200;
    Presentation presentation;
    std::uint64_t rng_seed = 0;
    std::string model_name = "gpt-4o-2024-08-06";
    double temperature = 1.0;
};

struct BenchCell {
    Family family = Family::ba;
    Difficulty difficulty = Difficulty::easy;
    TaskKind task = TaskKind::node_degree;
    std::string presentation;
    std::size_t instances = 0;
    std::size_t correct = 0;
    std::size_t unparseable = 0;
    std::size_t errors = 0;
    double accuracy() const noexcept { return instances ? double(correct) / double(instances) : 0.0; }
};

struct BenchRecord {
    std::size_t instance = 0;
    TaskKind task = TaskKind::node_degree;
    std::string truth;
    std::string raw_text;
    GradeOutcome outcome = GradeOutcome::incorrect;
    std::string error;
};

struct BenchResult {
    std::vector<BenchCell> cells;  // one per task, in option order
    std::vector<BenchRecord> records;
};

/// Instance i uses the graph generate(gen, seed_i); every task is asked on
/// the same graph. Backend failures count as incorrect and are recorded.
BenchResult run_benchmark(const BenchOptions& options, SelectorBackend& backend);

std::string bench_to_csv(std::span<const BenchCell> cells);

}  // namespace netsight
