#include "cryptopulse/sentiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace cpulse {

std::string label_name(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
    case SentimentLabel::positive: return "positive";
  }
  return "neutral";
}

double label_value(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::negative: return -1.0;
    case SentimentLabel::neutral: return 0.0;
    case SentimentLabel::positive: return 1.0;
  }
  return 0.0;
}

int PromptConfig::shots_per_label() const {
  return static_cast<int>(example_bank.size()) / 3;
}

void PromptConfig::validate() const {
  if (m < 1) throw DataError("prompt config: m must be >= 1");
  int counts[3] = {0, 0, 0};
  for (const auto& e : example_bank) counts[static_cast<int>(e.label)]++;
  if (counts[0] != counts[1] || counts[1] != counts[2])
    throw DataError("prompt config: example bank must hold the same number of "
                    "examples per label");
}

std::vector<FewShotExample> PromptConfig::load_example_bank(
    const std::filesystem::path& jsonl) {
  std::ifstream in(jsonl);
  if (!in) throw DataError("cannot open " + jsonl.string());
  std::vector<FewShotExample> bank;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("content") || !j.contains("label"))
      throw DataError(jsonl.string() + ": line " + std::to_string(lineno) +
                      ": expected {\"content\":...,\"label\":...}");
    bank.push_back(
        {j["content"].get<std::string>(), parse_label(j["label"].get<std::string>())});
  }
  return bank;
}

std::vector<FewShotExample> PromptConfig::default_example_bank() {
  // Synthetic headlines, not sourced from any news outlet.
  return {
      {"[synthetic] Exchange halts withdrawals after suspected breach, "
       "token slides double digits.",
       SentimentLabel::negative},
      {"[synthetic] Regulator fines major platform; traders brace for "
       "prolonged uncertainty.",
       SentimentLabel::negative},
      {"[synthetic] Leading coin breaks yearly high as institutional "
       "inflows accelerate.",
       SentimentLabel::positive},
      {"[synthetic] Payments giant adds crypto settlement, adoption "
       "outlook brightens.",
       SentimentLabel::positive},
      {"[synthetic] Network upgrade ships on schedule; prices hold "
       "steady through the rollout.",
       SentimentLabel::neutral},
      {"[synthetic] Conference recap: panels discuss custody standards, "
       "little market reaction.",
       SentimentLabel::neutral},
  };
}

namespace {

std::string prompt_block(int m, const std::string& news,
                         const std::string& label) {
  std::ostringstream os;
  os << m
     << " different cryptocurrency traders are reading this news. Each trader "
        "will assign a sentiment label from [\"negative\", \"positive\", "
        "\"neutral\"]. Then, each trader will share their label with the "
        "group. The majority label will be accepted. Return the majority "
        "label without any other text. The news is "
     << news << " Label: " << label << "\n";
  return os.str();
}

std::string article_text(const NewsArticle& a) {
  if (a.title.empty()) return a.content;
  if (a.content.empty()) return a.title;
  return a.title + ". " + a.content;
}

}  // namespace

std::string build_prompt(const NewsArticle& article,
                         const PromptConfig& config) {
  config.validate();
  const std::string text = article_text(article);
  if (text.empty()) throw DataError("build_prompt: empty article");
  std::string prompt;
  for (const auto& e : config.example_bank)
    prompt += prompt_block(config.m, e.content, label_name(e.label));
  prompt += prompt_block(config.m, text, "");
  return prompt;
}

SentimentLabel parse_label(const std::string& response) {
  std::string s;
  for (char c : response)
    if (std::isalpha(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!std::isspace(static_cast<unsigned char>(c)) &&
             !std::ispunct(static_cast<unsigned char>(c)))
      s += c;
  if (s == "negative") return SentimentLabel::negative;
  if (s == "neutral") return SentimentLabel::neutral;
  if (s == "positive") return SentimentLabel::positive;
  throw ExternalServiceError("unparseable sentiment response: '" + response +
                             "'");
}

LlmConfig LlmConfig::from_env() {
  LlmConfig cfg;
  if (const char* e = std::getenv("CRYPTOPULSE_LLM_ENDPOINT")) cfg.endpoint = e;
  if (const char* k = std::getenv("CRYPTOPULSE_LLM_KEY")) cfg.api_key = k;
  if (const char* m = std::getenv("CRYPTOPULSE_LLM_MODEL")) cfg.model = m;
  return cfg;
}

namespace {

class LiveClient : public ChatClient {
 public:
  explicit LiveClient(LlmConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.endpoint.empty())
      throw ExternalServiceError(
          "no LLM endpoint configured (set CRYPTOPULSE_LLM_ENDPOINT)");
  }

  std::string complete(const std::string& prompt,
                       const std::string&) override {
    auto [host, path] = split_endpoint(cfg_.endpoint);
    httplib::Client client(host);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!cfg_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + cfg_.api_key);
    nlohmann::json body{
        {"model", cfg_.model},
        {"temperature", 0},
        {"messages",
         nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res)
      throw ExternalServiceError("LLM request failed: " +
                                 httplib::to_string(res.error()));
    if (res->status != 200)
      throw ExternalServiceError("LLM request failed: HTTP " +
                                 std::to_string(res->status));
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty())
      throw ExternalServiceError("malformed LLM response");
    return j["choices"][0]["message"]["content"].get<std::string>();
  }

 private:
  static std::pair<std::string, std::string> split_endpoint(
      const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    const size_t host_start =
        scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = endpoint.find('/', host_start);
    if (path_start == std::string::npos)
      return {endpoint, "/v1/chat/completions"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
  }

  LlmConfig cfg_;
};

class MockClient : public ChatClient {
 public:
  explicit MockClient(std::string label) : label_(std::move(label)) {}
  std::string complete(const std::string&, const std::string&) override {
    return label_;
  }

 private:
  std::string label_;
};

class ReplayClient : public ChatClient {
 public:
  explicit ReplayClient(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open replay file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("hash") || !j.contains("response"))
        throw DataError("bad replay line: " + line);
      responses_[j["hash"].get<std::string>()] =
          j["response"].get<std::string>();
    }
  }

  std::string complete(const std::string&,
                       const std::string& cache_key) override {
    auto it = responses_.find(cache_key);
    if (it == responses_.end())
      throw ExternalServiceError("replay file has no response for this article");
    return it->second;
  }

 private:
  std::map<std::string, std::string> responses_;
};

}  // namespace

std::unique_ptr<ChatClient> make_live_client(const LlmConfig& config) {
  return std::make_unique<LiveClient>(config);
}

std::unique_ptr<ChatClient> make_mock_client(const std::string& label) {
  return std::make_unique<MockClient>(label);
}

std::unique_ptr<ChatClient> make_replay_client(
    const std::filesystem::path& path) {
  return std::make_unique<ReplayClient>(path);
}

std::unique_ptr<ChatClient> make_client(const std::string& spec,
                                        const LlmConfig& config) {
  if (spec == "live") return make_live_client(config);
  if (spec.rfind("mock:", 0) == 0) return make_mock_client(spec.substr(5));
  if (spec.rfind("replay:", 0) == 0)
    return make_replay_client(spec.substr(7));
  throw DataError("unknown LLM spec '" + spec +
                  "' (expected live, mock:<label> or replay:<file>)");
}

std::string article_cache_key(const NewsArticle& article) {
  const std::string payload = article.title + article.content + "#v" +
                              std::to_string(kPromptTemplateVersion);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha256(),
             nullptr);
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

LabelCache::LabelCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // cache starts empty
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string hash, date, label;
    if (!std::getline(ss, hash, ',') || !std::getline(ss, date, ',') ||
        !std::getline(ss, label, ','))
      throw DataError("bad cache line: " + line);
    entries_[hash] = {Date::parse(date), parse_label(label)};
  }
}

std::optional<SentimentLabel> LabelCache::lookup(
    const std::string& hash) const {
  auto it = entries_.find(hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second.second;
}

void LabelCache::store(const std::string& hash, const Date& date,
                       SentimentLabel label) {
  entries_[hash] = {date, label};
}

void LabelCache::flush() const {
  if (path_.empty()) return;
  std::ofstream out(path_);
  if (!out) throw DataError("cannot write " + path_.string());
  out << "hash,date,label\n";
  for (const auto& [hash, entry] : entries_)
    out << hash << ',' << entry.first.str() << ',' << label_name(entry.second)
        << '\n';
}

LabelingStats label_articles(const std::vector<NewsArticle>& articles,
                             ChatClient& client, const PromptConfig& config,
                             LabelCache& cache,
                             const LabelingOptions& options) {
  config.validate();
  LabelingStats stats;

  struct Job {
    const NewsArticle* article;
    std::string hash;
  };
  std::vector<Job> jobs;
  for (const NewsArticle& a : articles) {
    std::string hash = article_cache_key(a);
    if (cache.lookup(hash)) {
      ++stats.cache_hits;
      continue;
    }
    jobs.push_back({&a, std::move(hash)});
  }

  std::mutex mu;  // guards cache and stats (single-writer contract)
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      const std::string prompt = build_prompt(*job.article, config);
      bool done = false;
      for (int attempt = 1; attempt <= options.max_attempts && !done;
           ++attempt) {
        try {
          const std::string response = client.complete(prompt, job.hash);
          const SentimentLabel label = parse_label(response);
          std::lock_guard lock(mu);
          ++stats.client_calls;
          cache.store(job.hash, job.article->date, label);
          ++stats.labeled;
          done = true;
        } catch (const ExternalServiceError&) {
          {
            std::lock_guard lock(mu);
            ++stats.client_calls;
          }
          if (attempt == options.max_attempts) {
            std::lock_guard lock(mu);
            ++stats.failures;
            stats.failed_hashes.push_back(job.hash);
          } else {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                options.backoff_base_ms * (1 << (attempt - 1))));
          }
        }
      }
    }
  };

  const int n_threads =
      std::max(1, std::min<int>(options.concurrency,
                                static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  cache.flush();
  return stats;
}

SentimentByDay daily_sentiment(const std::vector<NewsArticle>& articles,
                               const LabelCache& cache) {
  std::map<Date, std::pair<double, int>> acc;
  for (const NewsArticle& a : articles) {
    auto label = cache.lookup(article_cache_key(a));
    if (!label) continue;  // unlabeled articles carry no signal
    auto& [sum, count] = acc[a.date];
    sum += label_value(*label);
    ++count;
  }
  SentimentByDay out;
  for (const auto& [date, entry] : acc)
    out[date] = entry.first / entry.second;
  return out;
}

}  // namespace cpulse
