#include "cryptopulse/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cpulse {

namespace {

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

double parse_double(const std::string& s, const char* field, size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError("line " + std::to_string(line) + ": bad " + field +
                    " value '" + s + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::int64_t Date::serial() const { return days_from_civil(year, month, day); }

Date Date::from_serial(std::int64_t days) {
  Date d;
  civil_from_days(days, d.year, d.month, d.day);
  return d;
}

Date Date::parse(const std::string& iso) {
  Date d;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      std::sscanf(iso.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) != 3)
    throw DataError("bad date '" + iso + "', expected YYYY-MM-DD");
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
    throw DataError("bad date '" + iso + "'");
  return d;
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

void PriceBar::validate() const {
  for (double v : {open, high, low, close, volume})
    if (!std::isfinite(v))
      throw DataError(date.str() + ": non-finite price field");
  if (low > high) throw DataError(date.str() + ": low > high");
  if (low > std::min(open, close))
    throw DataError(date.str() + ": low > min(open, close)");
  if (high < std::max(open, close))
    throw DataError(date.str() + ": high < max(open, close)");
  if (volume < 0) throw DataError(date.str() + ": negative volume");
}

CryptoSeries load_price_csv(const std::filesystem::path& path,
                            const std::string& symbol) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  CryptoSeries series;
  series.symbol = symbol.empty() ? path.stem().string() : symbol;

  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line))
    throw DataError(path.string() + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "date,open,high,low,close,volume")
    throw DataError(path.string() + ": bad header '" + line + "'");

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 6)
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": expected 6 fields, got " +
                      std::to_string(fields.size()));
    PriceBar bar;
    try {
      bar.date = Date::parse(fields[0]);
    } catch (const DataError& e) {
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": " + e.what());
    }
    bar.open = parse_double(fields[1], "open", lineno);
    bar.high = parse_double(fields[2], "high", lineno);
    bar.low = parse_double(fields[3], "low", lineno);
    bar.close = parse_double(fields[4], "close", lineno);
    bar.volume = parse_double(fields[5], "volume", lineno);
    try {
      bar.validate();
    } catch (const DataError& e) {
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": " + e.what());
    }
    series.bars.push_back(bar);
  }

  std::stable_sort(series.bars.begin(), series.bars.end(),
                   [](const PriceBar& a, const PriceBar& b) {
                     return a.date < b.date;
                   });
  for (size_t i = 1; i < series.bars.size(); ++i)
    if (series.bars[i].date == series.bars[i - 1].date)
      throw DataError(path.string() + ": duplicate date " +
                      series.bars[i].date.str());
  return series;
}

void save_price_csv(const CryptoSeries& series,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "date,open,high,low,close,volume\n";
  char buf[64];
  auto fmt = [&](double v) {
    // Shortest representation that round-trips; inputs with <= 8 fractional
    // digits survive write/read bit-exactly.
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& b : series.bars)
    out << b.date.str() << ',' << fmt(b.open) << ',' << fmt(b.high) << ','
        << fmt(b.low) << ',' << fmt(b.close) << ',' << fmt(b.volume) << '\n';
}

std::vector<NewsArticle> load_news_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<NewsArticle> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": invalid JSON");
    if (!j.contains("date") || !j.contains("title") || !j.contains("content"))
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": missing date/title/content key");
    NewsArticle a;
    a.date = Date::parse(j["date"].get<std::string>());
    a.title = j["title"].get<std::string>();
    a.content = j["content"].get<std::string>();
    if (a.title.empty() && a.content.empty())
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": empty article");
    out.push_back(std::move(a));
  }
  return out;
}

void save_news_jsonl(const std::vector<NewsArticle>& articles,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& a : articles) {
    nlohmann::json j{{"date", a.date.str()}, {"title", a.title},
                     {"content", a.content}};
    out << j.dump() << '\n';
  }
}

std::map<Date, std::vector<NewsArticle>> group_by_day(
    const std::vector<NewsArticle>& articles) {
  std::map<Date, std::vector<NewsArticle>> out;
  for (const auto& a : articles) out[a.date].push_back(a);
  return out;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  DatasetManifest m;
  m.target_symbols = j.at("target_symbols").get<std::vector<std::string>>();
  m.macro_symbols = j.at("macro_symbols").get<std::vector<std::string>>();
  m.window_length = j.value("window_length", 7);
  m.include_target_in_macro = j.value("include_target_in_macro", true);
  if (m.window_length < 2)
    throw DataError("window_length must be at least 2");
  return m;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  nlohmann::json j{{"target_symbols", target_symbols},
                   {"macro_symbols", macro_symbols},
                   {"window_length", window_length},
                   {"include_target_in_macro", include_target_in_macro}};
  out << j.dump(2) << '\n';
}

}  // namespace cpulse
