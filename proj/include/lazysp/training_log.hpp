#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lazysp {

struct LogRecord {
  std::size_t iteration = 0;
  std::size_t episode = 0;
  double reward = 0.0;
  std::string note;  // optional free-form tag (e.g. roll-in policy, oracle fallback)
};

/// Line-delimited training records: one JSON object per line with
/// iteration, episode, reward (and note when present).
class TrainingLog {
 public:
  void add(LogRecord record) { records_.push_back(std::move(record)); }
  const std::vector<LogRecord>& records() const { return records_; }

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& file) const;
  static TrainingLog read(std::istream& in);

 private:
  std::vector<LogRecord> records_;
};

}  // namespace lazysp
