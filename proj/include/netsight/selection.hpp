#pragma once

#include "netsight/diffusion.hpp"
#include "netsight/graph.hpp"
#include "netsight/metrics.hpp"
#include "netsight/render.hpp"

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netsight {

// ---------------------------------------------------------------------------
// Agents and prompts

struct AgentProfile {
    std::uint32_t agent_id = 1;
    std::string name;
    std::string hint_text;  // empty for the hint-free agent
    LabelMode label_mode = LabelMode::full;
};

/// Agents 1-3 for full-label images, 1-4 for partial-label images.
std::vector<AgentProfile> default_agents(LabelMode mode);

/// Reads {"agents": [{"id", "name", "hint", "label_modes": [...]}]} and keeps
/// the agents usable with `mode`.
std::vector<AgentProfile> load_agents(const std::filesystem::path& path, LabelMode mode);

inline constexpr std::string_view kImContext =
    "You are an expert in network science and will be provided with one network in the form of an image.";
inline constexpr std::string_view kImCommunitySentence =
    "The network is divided into different communities and the nodes in the same community are of the same color.";
inline constexpr std::string_view kImOutputDirective =
    "Do NOT output any other text or explanation. Just tell me the node IDs only. "
    "Your answer should be only a list as [node_id, ..., node_id]";
inline constexpr std::string_view kDismantleContext =
    "You are an expert in network science and you will be provided with a network in the form of an image. "
    "Each node is labeled with its node id in black text.";
inline constexpr std::string_view kDismantleOutputDirective =
    "Do NOT output any other text or explanation. Just tell me the node id only. Your answer should be: node id.";

/// Context sentence(s), agent hint, task statement for k seeds, output directive.
std::string build_im_prompt(const AgentProfile& agent, std::size_t k);
std::string build_dismantle_prompt();

// ---------------------------------------------------------------------------
// Requests, responses, backends

enum class BackendKind { mllm, scripted, heuristic };
std::string_view to_string(BackendKind kind);

/// Side information for offline backends (heuristics, oracles). Not sent
/// over the wire and not part of the request id.
struct RequestContext {
    std::shared_ptr<const Graph> graph;
    std::string task;  // "im", "dismantle", or a benchmark task name
    std::size_t k = 0;
    std::vector<NodeId> task_nodes;
};

struct SelectorRequest {
    std::shared_ptr<const ImageArtifact> image;  // null for text-only prompts
    std::string prompt;
    std::string model_name = "gpt-4o-2024-08-06";
    double temperature = 1.0;
    std::uint32_t attempt = 0;  // distinguishes repeated samples of one prompt
    RequestContext context;

    /// sha256 over (image hash, prompt, model, temperature, attempt).
    std::string request_id() const;
};

struct SelectorResponse {
    std::string raw_text;
    std::optional<std::vector<OriginalId>> parsed;
    BackendKind backend = BackendKind::heuristic;
    bool cached = false;
    std::uint64_t latency_ms = 0;
};

class SelectorBackend {
public:
    virtual ~SelectorBackend() = default;
    /// Fills raw_text, backend, cached and latency; callers parse.
    virtual SelectorResponse query(const SelectorRequest& request) = 0;
    virtual BackendKind kind() const = 0;
    /// True when the backend looks at the image, so callers must render one.
    virtual bool consumes_image() const { return false; }
};

class ScriptExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replays canned replies in queue order.
class ScriptedBackend final : public SelectorBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies);
    /// Accepts a JSON array of strings or {"replies": [...]}.
    static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

    SelectorResponse query(const SelectorRequest& request) override;
    BackendKind kind() const override { return BackendKind::scripted; }
    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> replies_;
};

/// Answers from a centrality ranking of request.context.graph: the top k
/// nodes for seed-set tasks, the single top node otherwise. Replies use
/// original node ids in the same textual format a vision model is asked for.
class HeuristicBackend final : public SelectorBackend {
public:
    explicit HeuristicBackend(Centrality method, ScoreParams params = {});
    SelectorResponse query(const SelectorRequest& request) override;
    BackendKind kind() const override { return BackendKind::heuristic; }
    Centrality method() const noexcept { return method_; }

private:
    Centrality method_;
    ScoreParams params_;
};

// ---------------------------------------------------------------------------
// Reply parsing and validation

class ReplyParseError : public std::runtime_error {
public:
    ReplyParseError(const std::string& what, std::string raw) : std::runtime_error(what), raw_text(std::move(raw)) {}
    std::string raw_text;
};

/// First bracketed, comma-separated integer list in the reply. Order and
/// duplicates are preserved.
std::vector<OriginalId> parse_node_list(std::string_view raw);
std::optional<std::vector<OriginalId>> try_parse_node_list(std::string_view raw);

/// First integer token in the reply.
OriginalId parse_single_node(std::string_view raw);

std::string format_node_list(std::span<const OriginalId> ids);

struct ValidationReport {
    bool size_ok = false;
    bool all_exist = false;
    bool no_duplicates = false;
    bool valid() const noexcept { return size_ok && all_exist && no_duplicates; }
};

/// Ids are original labels, resolved through the graph's id map.
ValidationReport validate_seed_set(const Graph& g, std::span<const OriginalId> parsed, std::size_t k);

/// Internal ids of the top-k nodes by the chosen score, ties to the lower id.
std::vector<NodeId> heuristic_select(const Graph& g, Centrality method, std::size_t k,
                                     const ScoreParams& params = {});

struct Attempt {
    std::vector<NodeId> seeds;
    SpreadEstimate spread;
};

/// Index of the attempt with the highest mean spread; earliest wins ties.
std::size_t best_attempt(std::span<const Attempt> attempts);
std::vector<NodeId> aggregate_attempts(std::span<const Attempt> attempts);

}  // namespace netsight
