#include "netsight/results.hpp"

#include <cstdio>
#include <sstream>

namespace netsight {

using nlohmann::json;

json to_json(const SpreadEstimate& s) {
    return {{"mean", s.mean}, {"std_error", s.std_error}, {"trials", s.trials}, {"rng_seed", s.rng_seed}};
}

json to_json(const DiffusionModel& m) {
    json j = {{"kind", m.name()}};
    if (m.kind == ModelKind::independent_cascade) j["p"] = m.p;
    return j;
}

json to_json(const ValidationSummary& v) {
    return {{"total", v.total},
            {"size_ok", v.size_ok},
            {"all_exist", v.all_exist},
            {"no_duplicates", v.no_duplicates},
            {"valid", v.valid},
            {"unparseable", v.unparseable},
            {"backend_errors", v.backend_errors},
            {"size_ratio", v.size_ratio()},
            {"existence_ratio", v.existence_ratio()},
            {"distinct_ratio", v.distinct_ratio()}};
}

namespace {

json original_ids(const Graph& g, std::span<const NodeId> nodes) {
    json out = json::array();
    for (NodeId v : nodes) out.push_back(g.original_id(v));
    return out;
}

}  // namespace

json im_result_json(const Graph& g, const ImRun& run, const json& config) {
    json attempts = json::array();
    for (const auto& a : run.attempts) {
        json rec = {{"agent_id", a.agent_id},
                    {"agent_name", a.agent_name},
                    {"attempt", a.attempt},
                    {"request_id", a.request_id},
                    {"raw_text", a.raw_text},
                    {"cached", a.cached},
                    {"parsed", a.parsed ? json(*a.parsed) : json(nullptr)},
                    {"validation",
                     {{"size_ok", a.validation.size_ok},
                      {"all_exist", a.validation.all_exist},
                      {"no_duplicates", a.validation.no_duplicates}}},
                    {"seeds", original_ids(g, a.seeds)},
                    {"spread", a.spread ? to_json(*a.spread) : json(nullptr)}};
        if (!a.error.empty()) rec["error"] = a.error;
        attempts.push_back(std::move(rec));
    }

    json metrics = {{"best_seeds", original_ids(g, run.best_seeds)}, {"best_spread", to_json(run.best_spread)},
                    {"validation", to_json(run.validation)}};
    if (run.best_seeds_ls) {
        metrics["best_seeds_ls"] = original_ids(g, *run.best_seeds_ls);
        metrics["best_spread_ls"] = to_json(*run.best_spread_ls);
        metrics["ls_reverted"] = run.ls_reverted;
    }

    json doc = {{"schema", kImSchema},
                {"version", NETSIGHT_VERSION},
                {"network", run.network_id},
                {"config", config},
                {"model", to_json(run.model)},
                {"k", run.k},
                {"label_mode", to_string(run.label_mode)},
                {"image_hash", run.image_hash},
                {"attempts", std::move(attempts)},
                {"metrics", std::move(metrics)}};
    if (run.ls_trace) {
        doc["local_search"] = {{"seeds", original_ids(g, run.ls_trace->seeds)},
                               {"accepted_spreads", run.ls_trace->accepted_spreads},
                               {"evaluations", run.ls_trace->evaluations},
                               {"iterations", run.ls_trace->iterations}};
    }
    return doc;
}

json dismantle_result_json(const DismantleTrace& trace, const std::string& network, const json& config) {
    json fallback = json::array();
    for (char f : trace.fallback) fallback.push_back(f != 0);
    std::size_t fallbacks = 0;
    for (char f : trace.fallback) fallbacks += f != 0;
    return {{"schema", kDismantleSchema},
            {"version", NETSIGHT_VERSION},
            {"network", network},
            {"config", config},
            {"trace",
             {{"removal_sequence", trace.removal_sequence},
              {"lcc_curve", trace.lcc_curve},
              {"N", trace.N},
              {"stop_fraction", trace.stop_fraction},
              {"fallback", fallback},
              {"raw_replies", trace.raw_replies},
              {"image_hashes", trace.image_hashes}}},
            {"metrics",
             {{"R", robustness_R(trace)},
              {"auc", auc(trace)},
              {"auc_step_sum", auc(trace, AucRule::step_sum)},
              {"removals", trace.removal_sequence.size()},
              {"fallbacks", fallbacks}}}};
}

json bench_result_json(const BenchResult& result, const json& config) {
    json cells = json::array();
    for (const auto& c : result.cells)
        cells.push_back({{"family", to_string(c.family)},
                         {"difficulty", to_string(c.difficulty)},
                         {"task", to_string(c.task)},
                         {"presentation", c.presentation},
                         {"instances", c.instances},
                         {"correct", c.correct},
                         {"unparseable", c.unparseable},
                         {"errors", c.errors},
                         {"accuracy", c.accuracy()}});
    json records = json::array();
    for (const auto& r : result.records) {
        json rec = {{"instance", r.instance},
                    {"task", to_string(r.task)},
                    {"truth", r.truth},
                    {"raw_text", r.raw_text},
                    {"outcome", to_string(r.outcome)}};
        if (!r.error.empty()) rec["error"] = r.error;
        records.push_back(std::move(rec));
    }
    return {{"schema", kBenchSchema},
            {"version", NETSIGHT_VERSION},
            {"config", config},
            {"metrics", {{"cells", std::move(cells)}}},
            {"records", std::move(records)}};
}

std::string lcc_curve_csv(const DismantleTrace& trace) {
    std::ostringstream out;
    out << "Q,fraction_removed,lcc,lcc_fraction\n";
    const double n = trace.N ? static_cast<double>(trace.N) : 1.0;
    char buf[96];
    for (std::size_t q = 0; q < trace.lcc_curve.size(); ++q) {
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%zu,%.6f\n", q, static_cast<double>(q) / n, trace.lcc_curve[q],
                      static_cast<double>(trace.lcc_curve[q]) / n);
        out << buf;
    }
    return out.str();
}

namespace {

struct Checker {
    std::vector<std::string> problems;

    const json* field(const json& obj, const std::string& path, const std::string& key, json::value_t type) {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(path + key + ": missing");
            return nullptr;
        }
        const json& v = obj.at(key);
        const bool number_ok = type == json::value_t::number_float && v.is_number();
        const bool unsigned_ok = type == json::value_t::number_unsigned && v.is_number_unsigned();
        if (v.type() != type && !number_ok && !unsigned_ok) {
            problems.push_back(path + key + ": expected " + json(type).type_name() + ", got " + v.type_name());
            return nullptr;
        }
        return &v;
    }

    void spread(const json& v, const std::string& path) {
        field(v, path, "mean", json::value_t::number_float);
        field(v, path, "std_error", json::value_t::number_float);
        field(v, path, "trials", json::value_t::number_unsigned);
        field(v, path, "rng_seed", json::value_t::number_unsigned);
    }
};

}  // namespace

std::vector<std::string> check_result_schema(const json& doc) {
    Checker c;
    using T = json::value_t;
    const json* schema = c.field(doc, "", "schema", T::string);
    c.field(doc, "", "version", T::string);
    c.field(doc, "", "config", T::object);
    const json* metrics = c.field(doc, "", "metrics", T::object);
    if (!schema) return c.problems;

    if (*schema == kImSchema) {
        c.field(doc, "", "network", T::string);
        c.field(doc, "", "model", T::object);
        c.field(doc, "", "k", T::number_unsigned);
        if (const json* attempts = c.field(doc, "", "attempts", T::array)) {
            for (std::size_t i = 0; i < attempts->size(); ++i) {
                const auto& a = attempts->at(i);
                const std::string p = "attempts[" + std::to_string(i) + "].";
                c.field(a, p, "agent_id", T::number_unsigned);
                c.field(a, p, "attempt", T::number_unsigned);
                c.field(a, p, "request_id", T::string);
                c.field(a, p, "raw_text", T::string);
                c.field(a, p, "validation", T::object);
                c.field(a, p, "seeds", T::array);
                if (a.contains("spread") && !a.at("spread").is_null()) c.spread(a.at("spread"), p + "spread.");
            }
        }
        if (metrics) {
            c.field(*metrics, "metrics.", "best_seeds", T::array);
            if (const json* s = c.field(*metrics, "metrics.", "best_spread", T::object)) c.spread(*s, "metrics.best_spread.");
            c.field(*metrics, "metrics.", "validation", T::object);
            if (metrics->contains("best_seeds_ls")) {
                c.field(*metrics, "metrics.", "best_seeds_ls", T::array);
                if (const json* s = c.field(*metrics, "metrics.", "best_spread_ls", T::object))
                    c.spread(*s, "metrics.best_spread_ls.");
            }
        }
    } else if (*schema == kDismantleSchema) {
        c.field(doc, "", "network", T::string);
        if (const json* t = c.field(doc, "", "trace", T::object)) {
            const json* seq = c.field(*t, "trace.", "removal_sequence", T::array);
            const json* curve = c.field(*t, "trace.", "lcc_curve", T::array);
            c.field(*t, "trace.", "N", T::number_unsigned);
            c.field(*t, "trace.", "stop_fraction", T::number_float);
            c.field(*t, "trace.", "fallback", T::array);
            if (seq && curve && curve->size() != seq->size() + 1)
                c.problems.push_back("trace.lcc_curve: expected one entry more than removal_sequence");
        }
        if (metrics) {
            c.field(*metrics, "metrics.", "R", T::number_float);
            c.field(*metrics, "metrics.", "auc", T::number_float);
            c.field(*metrics, "metrics.", "removals", T::number_unsigned);
        }
    } else if (*schema == kBenchSchema) {
        if (metrics) c.field(*metrics, "metrics.", "cells", T::array);
        c.field(doc, "", "records", T::array);
    } else {
        c.problems.push_back("schema: unknown value " + schema->get<std::string>());
    }
    return c.problems;
}

}  // namespace netsight
