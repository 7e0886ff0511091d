// netsight command-line front end: viz, im, dismantle, bench.

#include "netsight/benchtasks.hpp"
#include "netsight/digest.hpp"
#include "netsight/mllm_client.hpp"
#include "netsight/optimize.hpp"
#include "netsight/results.hpp"
#include "netsight/viz.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netsight;

namespace {

// Reads {"key": value} (applied to the chosen subcommand) or
// {"subcommand": {"key": value}}. Flags given on the command line win.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<std::string> active;
        for (const auto* sub : root_->get_subcommands()) active.push_back(sub->get_name());

        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : doc.items()) {
            if (value.is_object()) {
                for (const auto& [k, v] : value.items()) items.push_back(item({key}, k, v));
            } else {
                items.push_back(item(active, key, value));
            }
        }
        return items;
    }

private:
    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& key, const json& v) {
        CLI::ConfigItem it;
        it.parents = std::move(parents);
        it.name = key;
        std::replace(it.name.begin(), it.name.end(), '_', '-');
        auto text = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
        if (v.is_array())
            for (const auto& x : v) it.inputs.push_back(text(x));
        else
            it.inputs.push_back(text(v));
        return it;
    }

    const CLI::App* root_;
};

struct Common {
    std::string network;
    std::string network_id;
    std::uint64_t seed = 0;
    std::string out_dir = "runs";
    unsigned workers = 0;
};

struct DrawArgs {
    std::size_t target = 0;
    std::string layout = "fr";
    std::size_t fr_iterations = 500;
    double d = 0.7;
    std::size_t top_n = 5;
    bool no_adjust = false;
    std::string labels = "full";
    double label_fraction = 0.01;
    std::size_t min_labels = 20;
    int size = 2048;
    bool alt_palette = false;
};

struct SelectorArgs {
    std::string backend;
    std::string script;
    std::string endpoint = "https://api.openai.com/v1";
    std::string model_name = "gpt-4o-2024-08-06";
    double temperature = 1.0;
    std::string cache_dir = ".netsight-cache";
    std::size_t ci_radius = 2;
    unsigned max_in_flight = 4;
};

struct ImArgs {
    std::size_t k = 10;
    std::string model = "ic";
    double p = 0.1;
    std::size_t trials = 100000;
    std::size_t ls_trials = 5000;
    std::size_t max_iter = 5;
    std::size_t attempts = 10;
    bool no_local_search = false;
    std::string agents;
    std::size_t requery = 0;
};

struct DismantleArgs {
    double stop_fraction = 0.25;
    bool no_relayout = false;
    std::size_t requery = 2;
    std::uint32_t attempt = 0;
    bool save_images = false;
};

struct BenchArgs {
    std::string family = "ba";
    std::string difficulty = "easy";
    std::vector<std::string> tasks;
    std::size_t n_instances = 200;
    std::string presentation = "image";
    std::string text_style = "expert";
};

void add_common(CLI::App* cmd, Common& c, bool needs_network) {
    auto* net = cmd->add_option("--network", c.network, "Edge list file (u v per line)")->check(CLI::ExistingFile);
    if (needs_network) net->required();
    cmd->add_option("--network-id", c.network_id, "Name recorded in results (default: file stem)");
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--out-dir", c.out_dir, "Output root; each run writes to <out-dir>/<run-id>")->capture_default_str();
    cmd->add_option("--workers", c.workers, "Simulation threads (0 = all cores)")->capture_default_str();
}

void add_draw(CLI::App* cmd, DrawArgs& a) {
    cmd->add_option("--target-communities", a.target, "Merge detected communities down to this many (0 = keep)")
        ->capture_default_str();
    cmd->add_option("--layout", a.layout, "fr, circle or grid")
        ->check(CLI::IsMember({"fr", "fruchterman_reingold", "circle", "grid"}))
        ->capture_default_str();
    cmd->add_option("--fr-iterations", a.fr_iterations)->capture_default_str();
    cmd->add_option("--d", a.d, "Pull toward community centroid, 0 < d < 1")->capture_default_str();
    cmd->add_option("--top-n", a.top_n, "Highest-degree nodes left in place")->capture_default_str();
    cmd->add_flag("--no-adjust", a.no_adjust, "Skip the centroid adjustment");
    cmd->add_option("--labels", a.labels, "full or partial")->check(CLI::IsMember({"full", "partial"}))->capture_default_str();
    cmd->add_option("--label-fraction", a.label_fraction)->capture_default_str();
    cmd->add_option("--min-labels", a.min_labels)->capture_default_str();
    cmd->add_option("--size", a.size, "Canvas width and height in pixels")->capture_default_str();
    cmd->add_flag("--alt-palette", a.alt_palette, "Use the alternative palette");
}

void add_selector(CLI::App* cmd, SelectorArgs& s, const std::vector<std::string>& choices, std::string def) {
    s.backend = std::move(def);
    cmd->add_option("--backend", s.backend)->check(CLI::IsMember(choices))->capture_default_str();
    cmd->add_option("--script", s.script, "Scripted replies (JSON) for --backend scripted")->check(CLI::ExistingFile);
    cmd->add_option("--endpoint", s.endpoint, "OpenAI-compatible base URL")->capture_default_str();
    cmd->add_option("--model-name", s.model_name)->capture_default_str();
    cmd->add_option("--temperature", s.temperature)->capture_default_str();
    cmd->add_option("--cache-dir", s.cache_dir, "Reply cache for the mllm backend")->capture_default_str();
    cmd->add_option("--ci-radius", s.ci_radius, "Radius l for ci/hci")->capture_default_str();
    cmd->add_option("--max-in-flight", s.max_in_flight)->capture_default_str();
}

RenderSpec render_spec(const DrawArgs& a) {
    RenderSpec spec = a.labels == "full" ? RenderSpec::full_label()
                                         : RenderSpec::partial_label(a.label_fraction, a.min_labels);
    spec.width = spec.height = a.size;
    if (a.alt_palette) spec.palette = alternative_palette();
    return spec;
}

VizOptions viz_options(const DrawArgs& a, std::uint64_t seed) {
    VizOptions o;
    o.target_communities = a.target;
    o.layout = layout_from_string(a.layout);
    o.fr_iterations = a.fr_iterations;
    o.adjust = !a.no_adjust;
    o.adjustment = {a.d, a.top_n};
    o.render = render_spec(a);
    o.rng_seed = seed;
    return o;
}

json common_json(const Common& c) {
    return {{"network", c.network}, {"network_id", c.network_id}, {"seed", c.seed}, {"out_dir", c.out_dir}};
}

json draw_json(const DrawArgs& a) {
    return {{"target_communities", a.target}, {"layout", a.layout},      {"fr_iterations", a.fr_iterations},
            {"d", a.d},                       {"top_n", a.top_n},        {"adjust", !a.no_adjust},
            {"labels", a.labels},             {"label_fraction", a.label_fraction},
            {"min_labels", a.min_labels},     {"size", a.size},          {"alt_palette", a.alt_palette}};
}

json selector_json(const SelectorArgs& s) {
    json j = {{"backend", s.backend}, {"model_name", s.model_name}, {"temperature", s.temperature}};
    if (s.backend == "scripted") j["script"] = s.script;
    if (s.backend == "mllm") {
        j["endpoint"] = s.endpoint;
        j["cache_dir"] = s.cache_dir;
    }
    if (s.backend == "ci" || s.backend == "hci") j["ci_radius"] = s.ci_radius;
    return j;
}

std::shared_ptr<SelectorBackend> make_backend(const SelectorArgs& s) {
    ScoreParams params;
    params.ci_radius = s.ci_radius;
    if (s.backend == "scripted") {
        if (s.script.empty()) throw CLI::ValidationError("--script", "required with --backend scripted");
        return ScriptedBackend::from_file(s.script);
    }
    if (s.backend == "mllm") {
        auto cfg = MllmConfig::from_env(s.endpoint);
        cfg.max_in_flight = s.max_in_flight;
        return std::make_shared<CachingBackend>(std::make_shared<MllmBackend>(cfg),
                                                std::make_shared<ResponseCache>(s.cache_dir));
    }
    if (s.backend == "oracle") return std::make_shared<OracleBackend>();
    if (s.backend == "hd") return std::make_shared<HeuristicBackend>(Centrality::degree, params);
    if (s.backend == "hci") return std::make_shared<HeuristicBackend>(Centrality::collective_influence, params);
    return std::make_shared<HeuristicBackend>(centrality_from_string(s.backend), params);
}

std::string make_run_id(const json& config) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto stamp = std::chrono::duration_cast<std::chrono::nanoseconds>(now).count();
    return sha256_hex(config.dump() + "|" + std::to_string(config.value("seed", 0ull)) + "|" + std::to_string(stamp))
        .substr(0, 16);
}

void write_file(const fs::path& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& data) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

fs::path prepare_run_dir(const Common& c, const json& config) {
    const fs::path dir = fs::path(c.out_dir) / make_run_id(config);
    fs::create_directories(dir);
    std::cerr << "run directory: " << dir.string() << '\n';
    return dir;
}

std::string network_name(const Common& c) {
    return c.network_id.empty() ? fs::path(c.network).stem().string() : c.network_id;
}

int cmd_viz(const Common& c, const DrawArgs& a, bool png) {
    const Graph g = load_edge_list_file(c.network);
    json config = common_json(c);
    config["command"] = "viz";
    config["draw"] = draw_json(a);
    config["png"] = png;
    const auto dir = prepare_run_dir(c, config);

    const auto viz = visualize(g, viz_options(a, c.seed));
    write_file(dir / "image.svg", viz.image.svg);
    if (png) write_bytes(dir / "image.png", rasterize(viz.image).png);
    write_file(dir / "layout.json", to_json(g, viz.layout));
    write_file(dir / "communities.json", to_json(g, viz.communities));
    json meta = {{"version", NETSIGHT_VERSION},
                 {"config", config},
                 {"network", network_name(c)},
                 {"nodes", g.node_count()},
                 {"edges", g.edge_count()},
                 {"detected_communities", viz.detected.community_count},
                 {"communities", viz.communities.community_count},
                 {"modularity", modularity(g, viz.detected)},
                 {"labeled_nodes", viz.image.labeled_nodes.size()},
                 {"content_hash", viz.image.content_hash},
                 {"warnings", viz.image.warnings}};
    write_file(dir / "viz.json", meta.dump(2) + "\n");
    std::cout << meta.dump(2) << '\n';
    return 0;
}

int cmd_im(const Common& c, const DrawArgs& a, const SelectorArgs& s, const ImArgs& im) {
    const Graph g = load_edge_list_file(c.network);
    json config = common_json(c);
    config["command"] = "im";
    config["draw"] = draw_json(a);
    config["selector"] = selector_json(s);
    config["im"] = {{"k", im.k},           {"model", im.model},         {"p", im.p},
                    {"trials", im.trials}, {"ls_trials", im.ls_trials}, {"max_iter", im.max_iter},
                    {"attempts", im.attempts}, {"local_search", !im.no_local_search},
                    {"agents", im.agents}, {"requery", im.requery}};
    const auto dir = prepare_run_dir(c, config);

    auto backend = make_backend(s);
    const auto mode = label_mode_from_string(a.labels);
    const auto agents = im.agents.empty() ? default_agents(mode) : load_agents(im.agents, mode);

    const auto viz = visualize(g, viz_options(a, c.seed));
    auto image = std::make_shared<ImageArtifact>(viz.image);
    write_file(dir / "image.svg", image->svg);
    if (backend->consumes_image()) {
        *image = rasterize(*image);
        write_bytes(dir / "image.png", image->png);
    }

    ImOptions opt;
    opt.network_id = network_name(c);
    opt.k = im.k;
    opt.attempts = im.attempts;
    opt.model = model_from_string(im.model, im.p);
    opt.validation_trials = im.trials;
    opt.rng_seed = c.seed;
    opt.local_search = !im.no_local_search;
    opt.ls = {im.max_iter, im.ls_trials, c.seed, c.workers};
    opt.model_name = s.model_name;
    opt.temperature = s.temperature;
    opt.requery_budget = im.requery;
    opt.workers = c.workers;

    const auto run = run_im(g, agents, image, *backend, opt);
    const auto doc = im_result_json(g, run, config);
    write_file(dir / "result.json", doc.dump(2) + "\n");
    std::cout << doc.at("metrics").dump(2) << '\n';
    return 0;
}

int cmd_dismantle(const Common& c, const DrawArgs& a, const SelectorArgs& s, const DismantleArgs& d) {
    const Graph g = load_edge_list_file(c.network);
    json config = common_json(c);
    config["command"] = "dismantle";
    config["draw"] = draw_json(a);
    config["selector"] = selector_json(s);
    config["dismantle"] = {{"stop_fraction", d.stop_fraction}, {"relayout_each_step", !d.no_relayout},
                           {"requery", d.requery},             {"attempt", d.attempt},
                           {"save_images", d.save_images}};
    const auto dir = prepare_run_dir(c, config);
    auto backend = make_backend(s);

    DismantleOptions opt;
    opt.stop_fraction = d.stop_fraction;
    opt.relayout_each_step = !d.no_relayout;
    opt.layout = layout_from_string(a.layout);
    opt.fr_iterations = a.fr_iterations;
    opt.rng_seed = c.seed;
    opt.render = render_spec(a);
    opt.model_name = s.model_name;
    opt.temperature = s.temperature;
    opt.attempt = d.attempt;
    opt.requery_budget = d.requery;
    if (d.save_images) {
        fs::create_directories(dir / "steps");
        opt.on_image = [&](std::size_t step, const ImageArtifact& img) {
            char name[32];
            std::snprintf(name, sizeof name, "step_%03zu.svg", step);
            write_file(dir / "steps" / name, img.svg);
        };
    }

    const auto name = network_name(c);
    DismantleTrace trace;
    int code = 0;
    try {
        trace = dismantle(g, *backend, opt);
    } catch (const DismantleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        trace = e.trace;
        code = 1;
    }
    const auto doc = dismantle_result_json(trace, name, config);
    write_file(dir / (code ? "trace.partial.json" : "trace.json"), doc.dump(2) + "\n");
    write_file(dir / "curve.csv", lcc_curve_csv(trace));
    std::cout << doc.at("metrics").dump(2) << '\n';
    return code;
}

int cmd_bench(const Common& c, const DrawArgs& a, const SelectorArgs& s, const BenchArgs& b) {
    json config = common_json(c);
    config["command"] = "bench";
    config["draw"] = {{"layout", a.layout}, {"alt_palette", a.alt_palette}};
    config["selector"] = selector_json(s);
    config["bench"] = {{"family", b.family},           {"difficulty", b.difficulty},
                       {"tasks", b.tasks},             {"n_instances", b.n_instances},
                       {"presentation", b.presentation}, {"text_style", b.text_style}};
    const auto dir = prepare_run_dir(c, config);
    auto backend = make_backend(s);

    BenchOptions opt;
    opt.gen = GenSpec::preset(family_from_string(b.family), difficulty_from_string(b.difficulty));
    if (!b.tasks.empty()) {
        opt.tasks.clear();
        for (const auto& t : b.tasks) opt.tasks.push_back(task_from_string(t));
    }
    opt.n_instances = b.n_instances;
    opt.presentation.kind = b.presentation == "text" ? Presentation::Kind::text : Presentation::Kind::image;
    opt.presentation.layout = layout_from_string(a.layout);
    opt.presentation.alternative_palette = a.alt_palette;
    opt.presentation.style = text_style_from_string(b.text_style);
    opt.rng_seed = c.seed;
    opt.model_name = s.model_name;
    opt.temperature = s.temperature;

    const auto result = run_benchmark(opt, *backend);
    const auto doc = bench_result_json(result, config);
    write_file(dir / "bench.json", doc.dump(2) + "\n");
    const auto csv = bench_to_csv(result.cells);
    write_file(dir / "bench.csv", csv);
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netsight: render graphs for vision-model node selection and score the selections"};
    app.set_version_flag("--version", std::string(NETSIGHT_VERSION));
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.set_config("--config", "", "JSON config file; command-line flags override it");

    Common common;
    DrawArgs draw;
    SelectorArgs selector;
    ImArgs im;
    DismantleArgs dis;
    BenchArgs bench;
    bool png = false;

    const std::vector<std::string> heuristics{"degree", "betweenness", "closeness", "pagerank", "ci"};
    auto with = [&](std::vector<std::string> extra) {
        auto all = heuristics;
        all.insert(all.end(), extra.begin(), extra.end());
        return all;
    };

    auto* viz = app.add_subcommand("viz", "Detect communities, lay out and render a network");
    add_common(viz, common, true);
    add_draw(viz, draw);
    viz->add_flag("--png", png, "Also write a PNG raster");

    auto* imc = app.add_subcommand("im", "Influence maximization with selector agents and local search");
    add_common(imc, common, true);
    add_draw(imc, draw);
    add_selector(imc, selector, with({"mllm", "scripted"}), "degree");
    imc->add_option("--k", im.k, "Seed set size")->capture_default_str();
    imc->add_option("--model", im.model, "ic or lt")->check(CLI::IsMember({"ic", "lt"}))->capture_default_str();
    imc->add_option("--p", im.p, "IC activation probability")->capture_default_str();
    imc->add_option("--trials", im.trials, "Monte Carlo trials for scoring")->capture_default_str();
    imc->add_option("--ls-trials", im.ls_trials, "Monte Carlo trials inside local search")->capture_default_str();
    imc->add_option("--max-iter", im.max_iter, "Local search iterations")->capture_default_str();
    imc->add_option("--attempts", im.attempts, "Queries per agent")->capture_default_str();
    imc->add_flag("--no-local-search", im.no_local_search);
    imc->add_option("--agents", im.agents, "Agent definitions (JSON)")->check(CLI::ExistingFile);
    imc->add_option("--requery", im.requery, "Extra queries after an invalid reply")->capture_default_str();

    auto* dc = app.add_subcommand("dismantle", "Sequential node removal driven by a selector");
    add_common(dc, common, true);
    add_draw(dc, draw);
    add_selector(dc, selector, with({"mllm", "scripted", "hd", "hci"}), "hd");
    dc->add_option("--stop-fraction", dis.stop_fraction, "Fraction of nodes to remove")->capture_default_str();
    dc->add_flag("--no-relayout", dis.no_relayout, "Keep the initial layout for every step");
    dc->add_option("--requery", dis.requery, "Extra queries after an unusable reply")->capture_default_str();
    dc->add_option("--attempt", dis.attempt, "Attempt index, varies the cache key")->capture_default_str();
    dc->add_flag("--save-images", dis.save_images, "Write the image shown at each step");

    auto* bc = app.add_subcommand("bench", "Basic graph-task benchmark on synthetic networks");
    add_common(bc, common, false);
    bc->add_option("--layout", draw.layout)->check(CLI::IsMember({"fr", "fruchterman_reingold", "circle", "grid"}))
        ->capture_default_str();
    bc->add_flag("--alt-palette", draw.alt_palette);
    add_selector(bc, selector, {"oracle", "mllm", "scripted"}, "oracle");
    bc->add_option("--family", bench.family)->check(CLI::IsMember({"ba", "er", "ws"}))->capture_default_str();
    bc->add_option("--difficulty", bench.difficulty)->check(CLI::IsMember({"easy", "hard"}))->capture_default_str();
    bc->add_option("--tasks", bench.tasks, "Subset of tasks (default: all six)")->delimiter(',');
    bc->add_option("--n-instances", bench.n_instances)->capture_default_str();
    bc->add_option("--presentation", bench.presentation)->check(CLI::IsMember({"image", "text"}))->capture_default_str();
    bc->add_option("--text-style", bench.text_style)->check(CLI::IsMember({"expert", "adjacency"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*viz) return cmd_viz(common, draw, png);
        if (*imc) return cmd_im(common, draw, selector, im);
        if (*dc) return cmd_dismantle(common, draw, selector, dis);
        if (*bc) return cmd_bench(common, draw, selector, bench);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
