#include "stereoscan/provider.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

#include "stereoscan/util.hpp"

namespace stereoscan::llm {

using nlohmann::json;
using rater::ProviderError;
using rater::RaterRequest;

std::string chat_completions_body(const RaterRequest& request, const std::string& model,
                                  std::optional<double> temperature) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.prompt_text}});
  for (const auto& [label, png] : request.images) {
    std::string data_url =
        "data:image/png;base64," +
        util::base64_encode(std::span<const std::uint8_t>(png.data(), png.size()));
    content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", data_url}, {"detail", "auto"}}}});
  }
  json body = {
      {"model", model},
      {"messages", json::array({{{"role", "user"}, {"content", content}}})},
  };
  if (temperature) body["temperature"] = *temperature;
  return body.dump();
}

HttpProvider::HttpProvider(HttpProviderConfig config, TranscriptSink transcript)
    : config_(std::move(config)), transcript_(std::move(transcript)) {}

std::string HttpProvider::complete(const RaterRequest& request) {
  std::string model = request.model_name.empty() ? config_.model : request.model_name;
  std::optional<double> temperature =
      request.temperature ? request.temperature : config_.temperature;
  std::string body = chat_completions_body(request, model, temperature);

  // Split "https://host[:port]" from any path prefix.
  std::string url = config_.base_url;
  std::string path_prefix;
  std::size_t scheme = url.find("://");
  if (scheme != std::string::npos) {
    std::size_t slash = url.find('/', scheme + 3);
    if (slash != std::string::npos) {
      path_prefix = url.substr(slash);
      url = url.substr(0, slash);
    }
  }
  if (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();
  std::string path = path_prefix + "/chat/completions";

  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto backoff = config_.initial_backoff;
  int last_status = 0;
  std::string last_body;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(static_cast<time_t>(config_.timeout.count()), 0);
    client.set_follow_location(true);
    httplib::Result result = client.Post(path, headers, body, "application/json");
    if (!result) {
      last_status = 0;
      last_body = httplib::to_string(result.error());
      continue;  // transport error, retry
    }
    last_status = result->status;
    last_body = result->body;
    if (result->status == 429 || result->status >= 500) continue;
    if (result->status != 200) break;

    if (transcript_) transcript_(body, result->body);
    try {
      json parsed = json::parse(result->body);
      return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw ProviderError(result->status, std::string("unexpected response shape: ") + e.what());
    }
  }
  throw ProviderError(last_status, last_body);
}

}  // namespace stereoscan::llm
