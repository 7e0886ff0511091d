#include "netsight/mllm_client.hpp"

#include "netsight/digest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace netsight {

using nlohmann::json;

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::path_for(const std::string& request_id) const {
    return dir_ / (request_id + ".json");
}

std::optional<CachedReply> ResponseCache::get(const std::string& request_id) const {
    std::lock_guard lock(mutex_);
    std::ifstream in(path_for(request_id));
    if (!in) return std::nullopt;
    const auto doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.contains("raw_text")) return std::nullopt;
    CachedReply r;
    r.request_id = request_id;
    r.raw_text = doc.at("raw_text").get<std::string>();
    const auto backend = doc.value("backend", std::string("mllm"));
    r.backend = backend == "scripted" ? BackendKind::scripted
              : backend == "heuristic" ? BackendKind::heuristic
                                       : BackendKind::mllm;
    return r;
}

void ResponseCache::put(const SelectorRequest& request, const SelectorResponse& response) {
    const auto id = request.request_id();
    json doc = json::object();
    doc["request_id"] = id;
    doc["model_name"] = request.model_name;
    doc["temperature"] = request.temperature;
    doc["attempt"] = request.attempt;
    doc["image_hash"] = request.image ? request.image->content_hash : std::string{};
    doc["prompt"] = request.prompt;
    doc["backend"] = std::string(to_string(response.backend));
    doc["raw_text"] = response.raw_text;

    std::lock_guard lock(mutex_);
    const auto target = path_for(id);
    if (std::filesystem::exists(target)) return;
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const auto tmp = dir_ / (id + ".tmp" + tid.str());
    {
        std::ofstream out(tmp);
        out << doc.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

CachingBackend::CachingBackend(std::shared_ptr<SelectorBackend> inner, std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

SelectorResponse CachingBackend::query(const SelectorRequest& request) {
    const auto id = request.request_id();
    if (auto hit = cache_->get(id)) {
        SelectorResponse r;
        r.raw_text = hit->raw_text;
        r.backend = hit->backend;
        r.cached = true;
        return r;
    }
    auto response = inner_->query(request);
    cache_->put(request, response);
    return response;
}

MllmConfig MllmConfig::from_env(std::string endpoint, const char* env_var) {
    MllmConfig c;
    c.endpoint = std::move(endpoint);
    if (const char* key = std::getenv(env_var)) c.api_key = key;
    return c;
}

MllmBackend::MllmBackend(MllmConfig config)
    : config_(std::move(config)), in_flight_(std::clamp<std::ptrdiff_t>(config_.max_in_flight, 1, 64)) {}

MllmBackend::~MllmBackend() = default;

std::string MllmBackend::build_body(const SelectorRequest& request) const {
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", request.prompt}});
    if (request.image) {
        std::vector<std::uint8_t> png = request.image->png;
        if (png.empty()) png = rasterize(*request.image, config_.raster_scale).png;
        content.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
    }
    json body = {{"model", request.model_name},
                 {"temperature", request.temperature},
                 {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
    return body.dump();
}

std::string extract_reply_text(const std::string& body) {
    const auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw MalformedReplyError("reply is not JSON");
    try {
        const auto& content = doc.at("choices").at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        if (content.is_array()) {
            std::string text;
            for (const auto& part : content)
                if (part.value("type", std::string{}) == "text") text += part.value("text", std::string{});
            return text;
        }
    } catch (const json::exception& e) {
        throw MalformedReplyError(std::string("unexpected reply shape: ") + e.what());
    }
    throw MalformedReplyError("reply content is neither a string nor a part list");
}

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // prefix ending without a slash
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw DomainError("endpoint must include a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint e;
    e.origin = url.substr(0, path_start);
    e.path = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
    return e;
}

}  // namespace

SelectorResponse MllmBackend::query(const SelectorRequest& request) {
    if (config_.api_key.empty()) throw AuthError("no API credential configured");
    const auto endpoint = split_endpoint(config_.endpoint);
    const std::string body = build_body(request);

    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
    } release{in_flight_};

    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    const httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};

    const auto start = std::chrono::steady_clock::now();
    std::string last_failure;
    bool rate_limited = false;
    for (unsigned attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1u << (attempt - 1)));
        ++calls_;
        auto res = client.Post(endpoint.path + "/chat/completions", headers, body, "application/json");
        if (!res) {
            last_failure = "transport error: " + httplib::to_string(res.error());
            rate_limited = false;
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("endpoint rejected the credential (HTTP " + std::to_string(res->status) + ")");
        if (res->status == 429 || res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            rate_limited = res->status == 429;
            continue;
        }
        if (res->status != 200)
            throw BackendError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);

        SelectorResponse r;
        r.raw_text = extract_reply_text(res->body);
        r.backend = BackendKind::mllm;
        r.latency_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
        return r;
    }
    const auto msg = "giving up after " + std::to_string(config_.max_retries + 1) + " attempts (" + last_failure + ")";
    if (rate_limited) throw RateLimitError(msg);
    throw TransportError(msg);
}

}  // namespace netsight
