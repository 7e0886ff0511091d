#pragma once

#include "netsight/benchtasks.hpp"
#include "netsight/diffusion.hpp"
#include "netsight/optimize.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace netsight {

inline constexpr std::string_view kImSchema = "netsight.im/1";
inline constexpr std::string_view kDismantleSchema = "netsight.dismantle/1";
inline constexpr std::string_view kBenchSchema = "netsight.bench/1";

nlohmann::json to_json(const SpreadEstimate& s);
nlohmann::json to_json(const DiffusionModel& m);
nlohmann::json to_json(const ValidationSummary& v);

/// Seeds are written as original node ids. `metrics` holds only values that
/// are reproducible from the config and seed.
nlohmann::json im_result_json(const Graph& g, const ImRun& run, const nlohmann::json& config);
nlohmann::json dismantle_result_json(const DismantleTrace& trace, const std::string& network,
                                     const nlohmann::json& config);
nlohmann::json bench_result_json(const BenchResult& result, const nlohmann::json& config);

/// lcc curve as "Q,fraction_removed,lcc,lcc_fraction" rows.
std::string lcc_curve_csv(const DismantleTrace& trace);

/// Empty when the document matches its schema, else one message per problem.
std::vector<std::string> check_result_schema(const nlohmann::json& doc);

}  // namespace netsight
