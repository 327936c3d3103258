#include "dac/training/train_log.hpp"

#include <filesystem>

#include "dac/errors.hpp"

namespace dac::training {

TrainLog::TrainLog(const std::string& path) {
  if (path.empty()) {
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  out_.open(path, std::ios::app);
  if (!out_) {
    throw LoadError("cannot open training log " + path);
  }
}

void TrainLog::write(const nlohmann::json& record) {
  records_.push_back(record);
  if (out_.is_open()) {
    out_ << record.dump() << '\n';
    out_.flush();
  }
}

}  // namespace dac::training
