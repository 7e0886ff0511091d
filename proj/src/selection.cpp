#include "netsight/selection.hpp"

#include "netsight/digest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

namespace netsight {

namespace {

const std::vector<AgentProfile>& builtin_agents() {
    static const std::vector<AgentProfile> agents{
        {1, "Intelligent Selector", "", LabelMode::full},
        {2, "Community-Aware Selector",
         "Distribute your choices across communities proportionally to community size.", LabelMode::full},
        {3, "Center-Place Selector", "Prefer nodes near the visual center of the image.", LabelMode::full},
        {4, "Large Community Selector", "Prefer nodes from the largest communities.", LabelMode::partial},
    };
    return agents;
}

}  // namespace

std::vector<AgentProfile> default_agents(LabelMode mode) {
    std::vector<AgentProfile> out;
    for (const auto& a : builtin_agents()) {
        if (mode == LabelMode::full && a.label_mode == LabelMode::partial) continue;
        AgentProfile copy = a;
        copy.label_mode = mode;
        out.push_back(copy);
    }
    return out;
}

std::vector<AgentProfile> load_agents(const std::filesystem::path& path, LabelMode mode) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const auto doc = nlohmann::json::parse(in);
    std::vector<AgentProfile> out;
    for (const auto& a : doc.at("agents")) {
        bool usable = false;
        for (const auto& m : a.at("label_modes")) usable |= label_mode_from_string(m.get<std::string>()) == mode;
        if (!usable) continue;
        out.push_back({a.at("id").get<std::uint32_t>(), a.at("name").get<std::string>(),
                       a.value("hint", std::string{}), mode});
    }
    return out;
}

std::string build_im_prompt(const AgentProfile& agent, std::size_t k) {
    if (k < 1) throw DomainError("seed count must be >= 1");
    std::string out(kImContext);
    if (agent.label_mode == LabelMode::partial) {
        out += ' ';
        out += kImCommunitySentence;
    }
    out += " Your task is to select " + std::to_string(k) +
           " seed nodes from the network so that information starting from these nodes spreads as widely "
           "as possible.";
    if (!agent.hint_text.empty()) out += " " + agent.hint_text;
    out += ' ';
    out += kImOutputDirective;
    return out;
}

std::string build_dismantle_prompt() {
    std::string out(kDismantleContext);
    out += " Your task is to choose the node whose removal shrinks the largest connected component of the "
           "network the most.";
    out += ' ';
    out += kDismantleOutputDirective;
    return out;
}

std::string_view to_string(BackendKind kind) {
    switch (kind) {
        case BackendKind::mllm: return "mllm";
        case BackendKind::scripted: return "scripted";
        case BackendKind::heuristic: return "heuristic";
    }
    return "unknown";
}

std::string SelectorRequest::request_id() const {
    char temp[32];
    std::snprintf(temp, sizeof temp, "%.6f", temperature);
    std::string key;
    key += image ? image->content_hash : std::string("no-image");
    key += '\0';
    key += prompt;
    key += '\0';
    key += model_name;
    key += '\0';
    key += temp;
    key += '\0';
    key += std::to_string(attempt);
    return sha256_hex(key);
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const auto doc = nlohmann::json::parse(in);
    const auto& list = doc.is_array() ? doc : doc.at("replies");
    return std::make_shared<ScriptedBackend>(list.get<std::vector<std::string>>());
}

SelectorResponse ScriptedBackend::query(const SelectorRequest&) {
    std::lock_guard lock(mutex_);
    if (replies_.empty()) throw ScriptExhausted("scripted backend has no replies left");
    SelectorResponse r;
    r.raw_text = std::move(replies_.front());
    replies_.pop_front();
    r.backend = BackendKind::scripted;
    return r;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mutex_);
    return replies_.size();
}

HeuristicBackend::HeuristicBackend(Centrality method, ScoreParams params) : method_(method), params_(params) {}

SelectorResponse HeuristicBackend::query(const SelectorRequest& request) {
    const auto& g = request.context.graph;
    if (!g || g->empty()) throw DomainError("heuristic backend needs a non-empty context graph");
    const auto start = std::chrono::steady_clock::now();
    const std::size_t k = request.context.task == "im" ? request.context.k : 1;
    const auto picks = heuristic_select(*g, method_, std::min(k, g->node_count()), params_);

    SelectorResponse r;
    r.backend = BackendKind::heuristic;
    if (request.context.task == "im") {
        std::vector<OriginalId> ids;
        for (NodeId v : picks) ids.push_back(g->original_id(v));
        r.raw_text = format_node_list(ids);
    } else {
        r.raw_text = std::to_string(g->original_id(picks.front()));
    }
    r.latency_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
    return r;
}

std::optional<std::vector<OriginalId>> try_parse_node_list(std::string_view raw) {
    static const std::regex list_re(R"(\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*,?\s*\])");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(raw.begin(), raw.end(), m, list_re)) return std::nullopt;
    std::vector<OriginalId> out;
    static const std::regex int_re(R"(-?\d+)");
    const std::string body = m[1].str();
    for (auto it = std::sregex_iterator(body.begin(), body.end(), int_re); it != std::sregex_iterator(); ++it) {
        OriginalId v = 0;
        const std::string tok = it->str();
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{}) return std::nullopt;
        out.push_back(v);
    }
    return out;
}

std::vector<OriginalId> parse_node_list(std::string_view raw) {
    auto parsed = try_parse_node_list(raw);
    if (!parsed) throw ReplyParseError("reply contains no bracketed integer list", std::string(raw));
    return *parsed;
}

OriginalId parse_single_node(std::string_view raw) {
    static const std::regex int_re(R"(-?\d+)");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(raw.begin(), raw.end(), m, int_re))
        throw ReplyParseError("reply contains no node id", std::string(raw));
    OriginalId v = 0;
    const std::string tok = m.str();
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{}) throw ReplyParseError("node id out of range", std::string(raw));
    return v;
}

std::string format_node_list(std::span<const OriginalId> ids) {
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(ids[i]);
    }
    return out + "]";
}

ValidationReport validate_seed_set(const Graph& g, std::span<const OriginalId> parsed, std::size_t k) {
    ValidationReport r;
    r.size_ok = parsed.size() == k;
    r.all_exist = std::all_of(parsed.begin(), parsed.end(), [&](OriginalId id) { return g.find_original(id).has_value(); });
    std::set<OriginalId> seen(parsed.begin(), parsed.end());
    r.no_duplicates = seen.size() == parsed.size();
    return r;
}

std::vector<NodeId> heuristic_select(const Graph& g, Centrality method, std::size_t k, const ScoreParams& params) {
    if (k > g.node_count()) throw DomainError("k exceeds the node count");
    auto order = rank_nodes(compute_scores(g, method, params).values);
    order.resize(k);
    return order;
}

std::size_t best_attempt(std::span<const Attempt> attempts) {
    if (attempts.empty()) throw DomainError("no attempts to aggregate");
    std::size_t best = 0;
    for (std::size_t i = 1; i < attempts.size(); ++i)
        if (attempts[i].spread.mean > attempts[best].spread.mean) best = i;
    return best;
}

std::vector<NodeId> aggregate_attempts(std::span<const Attempt> attempts) {
    return attempts[best_attempt(attempts)].seeds;
}

}  // namespace netsight
