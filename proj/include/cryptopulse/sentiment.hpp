#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cryptopulse/dataset.hpp"
#include "cryptopulse/types.hpp"

namespace cpulse {

enum class SentimentLabel { negative, neutral, positive };

std::string label_name(SentimentLabel l);
double label_value(SentimentLabel l);  // negative -1, neutral 0, positive +1

// Bump when the prompt template changes: cache keys include it so stale
// labels are never reused across template revisions.
inline constexpr int kPromptTemplateVersion = 1;

struct FewShotExample {
  std::string content;
  SentimentLabel label;
};

struct PromptConfig {
  int m = 3;  // simulated trader count
  // exactly k examples per label, in (negative, positive, neutral) blocks
  std::vector<FewShotExample> example_bank;

  int shots_per_label() const;
  void validate() const;

  static std::vector<FewShotExample> load_example_bank(
      const std::filesystem::path& jsonl);
  // Two hand-written synthetic headlines per label.
  static std::vector<FewShotExample> default_example_bank();
};

// Few-shot "trader discussion" prompt: one template block per example, then
// the query block with an empty label slot. Byte-identical for identical
// (article, config).
std::string build_prompt(const NewsArticle& article, const PromptConfig& config);

// Case-insensitive, whitespace/punctuation-trimmed match. Anything that is
// not exactly one of the three labels is an error, never a silent neutral.
SentimentLabel parse_label(const std::string& response);

// Chat-completion transport. `cache_key` identifies the query article; the
// live client ignores it, the replay client answers from it.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::string& prompt,
                               const std::string& cache_key) = 0;
};

struct LlmConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-3.5-turbo";

  // Reads CRYPTOPULSE_LLM_ENDPOINT / _KEY / _MODEL.
  static LlmConfig from_env();
};

std::unique_ptr<ChatClient> make_live_client(const LlmConfig& config);
std::unique_ptr<ChatClient> make_mock_client(const std::string& label);
// Replay file: JSONL of {"hash": "...", "response": "..."}.
std::unique_ptr<ChatClient> make_replay_client(
    const std::filesystem::path& path);
// `spec`: "live", "mock:<label>" or "replay:<file>".
std::unique_ptr<ChatClient> make_client(const std::string& spec,
                                        const LlmConfig& config = {});

std::string article_cache_key(const NewsArticle& article);

// CSV-backed label cache: hash,date,label. Single writer.
class LabelCache {
 public:
  LabelCache() = default;
  explicit LabelCache(std::filesystem::path path);

  std::optional<SentimentLabel> lookup(const std::string& hash) const;
  void store(const std::string& hash, const Date& date, SentimentLabel label);
  void flush() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path path_;
  std::map<std::string, std::pair<Date, SentimentLabel>> entries_;
};

struct LabelingOptions {
  int max_attempts = 5;
  int backoff_base_ms = 250;  // doubled per retry
  int concurrency = 4;
};

struct LabelingStats {
  std::size_t labeled = 0;
  std::size_t cache_hits = 0;
  std::size_t client_calls = 0;
  std::size_t failures = 0;
  std::vector<std::string> failed_hashes;
};

// Labels every article exactly once; cached articles are never re-sent.
// Transport failures are retried with bounded exponential backoff, then
// recorded as failed.
LabelingStats label_articles(const std::vector<NewsArticle>& articles,
                             ChatClient& client, const PromptConfig& config,
                             LabelCache& cache,
                             const LabelingOptions& options = {});

// negative -> -1, neutral -> 0, positive -> +1; day value is the mean over
// the day's articles. Days with no news are absent (treated as 0 downstream).
SentimentByDay daily_sentiment(const std::vector<NewsArticle>& articles,
                               const LabelCache& cache);

}  // namespace cpulse
