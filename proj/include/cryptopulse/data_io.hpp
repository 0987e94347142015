#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cryptopulse/types.hpp"

namespace cpulse {

// Canonical price CSV: header `date,open,high,low,close,volume`, dates
// YYYY-MM-DD. Rows are returned sorted ascending; duplicate dates and bar
// invariant violations are DataErrors naming the offending line.
CryptoSeries load_price_csv(const std::filesystem::path& path,
                            const std::string& symbol = "");
void save_price_csv(const CryptoSeries& series,
                    const std::filesystem::path& path);

// One JSON object per line: {"date":"YYYY-MM-DD","title":"...","content":"..."}.
std::vector<NewsArticle> load_news_jsonl(const std::filesystem::path& path);
void save_news_jsonl(const std::vector<NewsArticle>& articles,
                     const std::filesystem::path& path);

std::map<Date, std::vector<NewsArticle>> group_by_day(
    const std::vector<NewsArticle>& articles);

// Dataset directory manifest.
struct DatasetManifest {
  std::vector<std::string> target_symbols;
  std::vector<std::string> macro_symbols;  // default: top 5 by market cap
  int window_length = 7;
  // Whether a target that is itself a macro asset stays in the macro set.
  bool include_target_in_macro = true;

  static DatasetManifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace cpulse
