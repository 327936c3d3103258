#pragma once

#include <stdexcept>
#include <string>

namespace dac {

// Input that cannot be turned into a valid domain value (empty caption text,
// too-short waveform, malformed feature matrix).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Manifest, feature file, vocabulary or checkpoint that fails to load.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dac
