#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace dac::training {

/// JSON Lines training log: one record per epoch and phase. Records are also
/// kept in memory. An empty path keeps them in memory only.
class TrainLog {
 public:
  TrainLog() = default;
  explicit TrainLog(const std::string& path);

  void write(const nlohmann::json& record);
  const std::vector<nlohmann::json>& records() const { return records_; }

 private:
  std::ofstream out_;
  std::vector<nlohmann::json> records_;
};

}  // namespace dac::training
