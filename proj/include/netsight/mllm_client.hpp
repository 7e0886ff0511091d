#pragma once

#include "netsight/selection.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>

namespace netsight {

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class AuthError : public BackendError {
public:
    using BackendError::BackendError;
};
class RateLimitError : public BackendError {
public:
    using BackendError::BackendError;
};
class MalformedReplyError : public BackendError {
public:
    using BackendError::BackendError;
};
class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

struct CachedReply {
    std::string request_id;
    std::string raw_text;
    BackendKind backend = BackendKind::mllm;
};

/// One JSON file per request id under `dir`. Entries are written once via a
/// temp file and rename; later writers for the same key are ignored.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);
    std::optional<CachedReply> get(const std::string& request_id) const;
    void put(const SelectorRequest& request, const SelectorResponse& response);
    std::filesystem::path path_for(const std::string& request_id) const;
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

/// Checks the cache before delegating; stores successful replies only.
class CachingBackend final : public SelectorBackend {
public:
    CachingBackend(std::shared_ptr<SelectorBackend> inner, std::shared_ptr<ResponseCache> cache);
    SelectorResponse query(const SelectorRequest& request) override;
    BackendKind kind() const override { return inner_->kind(); }
    bool consumes_image() const override { return inner_->consumes_image(); }

private:
    std::shared_ptr<SelectorBackend> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

struct MllmConfig {
    /// Base URL; requests go to <endpoint>/chat/completions.
    std::string endpoint = "https://api.openai.com/v1";
    std::string api_key;
    std::chrono::seconds timeout{120};
    unsigned max_retries = 4;
    std::chrono::milliseconds backoff{1000};
    unsigned max_in_flight = 4;
    double raster_scale = 1.0;

    /// Reads the key from `env_var` (MLLM_API_KEY by default).
    static MllmConfig from_env(std::string endpoint, const char* env_var = "MLLM_API_KEY");
};

/// Client for OpenAI-compatible chat/completions endpoints. The rendered
/// image is attached as a base64 PNG data URL.
class MllmBackend final : public SelectorBackend {
public:
    explicit MllmBackend(MllmConfig config);
    ~MllmBackend() override;

    SelectorResponse query(const SelectorRequest& request) override;
    BackendKind kind() const override { return BackendKind::mllm; }
    bool consumes_image() const override { return true; }

    /// The JSON body sent for `request`.
    std::string build_body(const SelectorRequest& request) const;
    std::size_t calls() const noexcept { return calls_.load(); }

private:
    MllmConfig config_;
    std::counting_semaphore<64> in_flight_;
    std::atomic<std::size_t> calls_{0};
};

/// Extracts choices[0].message.content from a chat/completions reply.
std::string extract_reply_text(const std::string& body);

}  // namespace netsight
