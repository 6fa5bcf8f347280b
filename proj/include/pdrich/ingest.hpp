#ifndef PDRICH_INGEST_HPP
#define PDRICH_INGEST_HPP

#include <istream>
#include <string>
#include <vector>

#include "pdrich/pd_prior.hpp"

namespace pdrich {

enum class InputFormat { Csv, Counts };

struct AbundanceRecord {
  std::string species;
  long count = 0;
};

/// Species abundance table; labels unique, counts >= 1, at least one record.
class AbundanceDataset {
 public:
  explicit AbundanceDataset(std::vector<AbundanceRecord> records);

  const std::vector<AbundanceRecord>& records() const { return records_; }
  PartitionData partition() const;

 private:
  std::vector<AbundanceRecord> records_;
};

/// csv: header `species,count`, LF or CRLF line ends.
/// counts: whitespace separated positive integers, labelled s1, s2, ...
/// Throws InputError naming the offending line.
AbundanceDataset ingest(std::istream& in, InputFormat format);
AbundanceDataset ingest(const std::string& path, InputFormat format);

}  // namespace pdrich

#endif
