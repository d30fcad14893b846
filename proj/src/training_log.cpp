#include "lazysp/training_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace lazysp {

void TrainingLog::write(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::json line{{"iteration", r.iteration}, {"episode", r.episode}, {"reward", r.reward}};
    if (!r.note.empty()) line["note"] = r.note;
    out << line.dump() << '\n';
  }
}

void TrainingLog::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write(out);
}

TrainingLog TrainingLog::read(std::istream& in) {
  TrainingLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    log.add({doc.at("iteration").get<std::size_t>(), doc.at("episode").get<std::size_t>(),
             doc.at("reward").get<double>(), doc.value("note", std::string{})});
  }
  return log;
}

}  // namespace lazysp
