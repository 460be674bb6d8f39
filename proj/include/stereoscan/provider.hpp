#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "stereoscan/rater.hpp"

namespace stereoscan::llm {

struct HttpProviderConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4.1-2025-04-14";
  std::optional<double> temperature;  // provider default when unset
  int max_retries = 4;                // on 429/5xx and transport errors
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{120};
};

// Raw request/response pairs for the audit trail (JSONL persistence is the
// caller's job).
using TranscriptSink =
    std::function<void(const std::string& request_json, const std::string& response_body)>;

// OpenAI-compatible chat-completions client with base64 PNG image parts.
class HttpProvider : public rater::Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config, TranscriptSink transcript = nullptr);

  std::string complete(const rater::RaterRequest& request) override;
  std::string name() const override { return "http:" + config_.model; }

 private:
  HttpProviderConfig config_;
  TranscriptSink transcript_;
};

// Builds the chat-completions JSON body for a request (exposed for tests).
std::string chat_completions_body(const rater::RaterRequest& request,
                                  const std::string& model,
                                  std::optional<double> temperature);

}  // namespace stereoscan::llm
