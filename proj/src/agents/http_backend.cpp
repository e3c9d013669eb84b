#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <thread>

#include <nlohmann/json.hpp>

#include "agwf/agents.hpp"
#include "agwf/error.hpp"

namespace agwf {

namespace {

using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::ConfigError, "endpoint '" + url + "' must start with http:// or https://");
    }
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::ConfigError, "unsupported scheme '" + scheme + "' in endpoint '" + url + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

class HttpChatBackend final : public CompletionBackend {
public:
    explicit HttpChatBackend(HttpBackendOptions options) : options_(std::move(options)), url_(split_url(options_.endpoint_url)) {}

    std::string complete(const CompletionRequest& request) override {
        nlohmann::json body = {
            {"model", request.model_ref.empty() ? options_.default_model : std::string(request.model_ref)},
            {"messages",
             nlohmann::json::array({{{"role", "system"}, {"content", std::string(request.role_prompt)}},
                                    {{"role", "user"}, {"content", std::string(request.user_prompt)}}})},
            {"temperature", request.temperature},
        };
        const std::string payload = body.dump();

        const auto deadline = Clock::now() + options_.timeout;
        // Socket timeouts fire with millisecond granularity, so a budget with
        // less than this left counts as spent.
        constexpr milliseconds kSlack{5};
        const auto time_left = [&] { return std::chrono::duration_cast<milliseconds>(deadline - Clock::now()); };

        std::string last_error;
        int attempts = 0;
        while (attempts <= options_.retries) {
            const auto remaining = time_left();
            if (remaining <= kSlack) break;
            ++attempts;

            // One client per call: httplib clients are not safe for concurrent use.
            httplib::Client client(url_.origin);
            client.set_connection_timeout(remaining);
            client.set_read_timeout(remaining);
            client.set_write_timeout(remaining);
            httplib::Headers headers;
            if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

            const auto result = client.Post(url_.path, headers, payload, "application/json");
            if (!result) {
                last_error = "request to " + options_.endpoint_url + " failed: " + httplib::to_string(result.error());
            } else if (result->status >= 200 && result->status < 300) {
                return extract_content(result->body);
            } else {
                last_error = "HTTP " + std::to_string(result->status) + " from " + options_.endpoint_url + ": " +
                             result->body.substr(0, 200);
                if (!transient_status(result->status)) throw Error(ErrorCode::TransportError, last_error);
            }

            if (attempts <= options_.retries) {
                const auto backoff = std::min<milliseconds>(options_.retry_backoff * (1 << (attempts - 1)), time_left());
                if (backoff > milliseconds{0}) std::this_thread::sleep_for(backoff);
            }
        }
        if (time_left() <= kSlack) {
            throw Error(ErrorCode::BackendTimeout, "no answer within " + std::to_string(options_.timeout.count()) +
                                                       " ms" + (last_error.empty() ? "" : " (" + last_error + ")"));
        }
        throw Error(ErrorCode::TransportError, last_error + " (after " + std::to_string(attempts) + " attempts)");
    }

private:
    static std::string extract_content(const std::string& body) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
            throw Error(ErrorCode::MalformedResponse, "response has no choices");
        }
        const auto& choice = doc["choices"][0];
        if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object() ||
            !choice["message"].contains("content") || !choice["message"]["content"].is_string()) {
            throw Error(ErrorCode::MalformedResponse, "first choice has no message content");
        }
        return choice["message"]["content"].get<std::string>();
    }

    HttpBackendOptions options_;
    ParsedUrl url_;
};

}  // namespace

std::unique_ptr<CompletionBackend> http_chat_backend(HttpBackendOptions options) {
    return std::make_unique<HttpChatBackend>(std::move(options));
}

}  // namespace agwf
