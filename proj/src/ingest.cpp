#include "pdrich/ingest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pdrich/errors.hpp"

namespace pdrich {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

long parse_count(const std::string& text, long line) {
  long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw InputError("malformed count '" + text + "'", line);
  if (value < 1) throw InputError("count must be a positive integer, got " + text, line);
  return value;
}

AbundanceDataset read_csv(std::istream& in) {
  std::string raw;
  long line = 0;
  bool header_seen = false;
  std::vector<AbundanceRecord> records;
  std::unordered_set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "species,count")
        throw InputError("expected header 'species,count', got '" + text + "'", line);
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
      throw InputError("expected two comma-separated fields", line);
    AbundanceRecord rec{trim(std::string_view(text).substr(0, comma)),
                        parse_count(trim(std::string_view(text).substr(comma + 1)), line)};
    if (rec.species.empty()) throw InputError("empty species label", line);
    if (!seen.insert(rec.species).second)
      throw InputError("duplicate species label '" + rec.species + "'", line);
    records.push_back(std::move(rec));
  }
  if (!header_seen) throw InputError("empty dataset: missing header 'species,count'");
  if (records.empty()) throw InputError("empty dataset: no species rows");
  return AbundanceDataset(std::move(records));
}

AbundanceDataset read_counts(std::istream& in) {
  std::string raw;
  long line = 0;
  std::vector<AbundanceRecord> records;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::string tok;
    while (fields >> tok)
      records.push_back({"s" + std::to_string(records.size() + 1), parse_count(tok, line)});
  }
  if (records.empty()) throw InputError("empty dataset: no counts");
  return AbundanceDataset(std::move(records));
}

}  // namespace

AbundanceDataset::AbundanceDataset(std::vector<AbundanceRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) throw InputError("empty dataset");
  std::unordered_set<std::string> seen;
  for (const auto& r : records_) {
    if (r.count < 1) throw InputError("count for '" + r.species + "' must be positive");
    if (!seen.insert(r.species).second) throw InputError("duplicate species label '" + r.species + "'");
  }
}

PartitionData AbundanceDataset::partition() const {
  std::vector<long> counts;
  counts.reserve(records_.size());
  for (const auto& r : records_) counts.push_back(r.count);
  return PartitionData(std::move(counts));
}

AbundanceDataset ingest(std::istream& in, InputFormat format) {
  return format == InputFormat::Csv ? read_csv(in) : read_counts(in);
}

AbundanceDataset ingest(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return ingest(in, format);
}

}  // namespace pdrich
