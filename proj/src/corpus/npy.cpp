#include "dac/corpus/npy.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <regex>

#include "dac/errors.hpp"

namespace dac::corpus {
namespace {

static_assert(std::endian::native == std::endian::little, "npy I/O assumes a little-endian host");

constexpr char kMagic[] = "\x93NUMPY";

}  // namespace

void write_npy(const std::string& path, const FeatureMatrix& features) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" +
                       std::to_string(features.frames()) + ", " + std::to_string(features.bins()) +
                       "), }";
  // magic(6) + version(2) + header_len(2) + header + '\n' padded to 64 bytes
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write feature file " + path);
  }
  out.write(kMagic, 6);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const auto len = static_cast<std::uint16_t>(header.size());
  const char len_bytes[2] = {static_cast<char>(len & 0xFF), static_cast<char>(len >> 8)};
  out.write(len_bytes, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const auto values = features.values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!out) {
    throw LoadError("failed writing feature file " + path);
  }
}

FeatureMatrix read_npy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("feature file not found: " + path);
  }
  char magic[6];
  char version[2];
  in.read(magic, 6);
  in.read(version, 2);
  if (!in || std::memcmp(magic, kMagic, 6) != 0) {
    throw LoadError("not an npy file: " + path);
  }
  std::uint32_t header_len = 0;
  if (version[0] == 1) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    header_len = b[0] | (b[1] << 8);
  } else if (version[0] == 2 || version[0] == 3) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    header_len = b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  } else {
    throw LoadError("unsupported npy version in " + path);
  }
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) {
    throw LoadError("truncated npy header in " + path);
  }

  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(\s*(\d+)\s*,\s*(\d+)\s*,?\s*\))");
  std::smatch m;
  if (!std::regex_search(header, m, descr_re) || m[1] != "<f4") {
    throw LoadError("npy file " + path + " must hold little-endian float32 ('<f4')");
  }
  if (!std::regex_search(header, m, order_re) || m[1] != "False") {
    throw LoadError("npy file " + path + " must be C-ordered");
  }
  if (!std::regex_search(header, m, shape_re)) {
    throw LoadError("npy file " + path + " must hold a 2-D array");
  }
  const auto frames = static_cast<std::size_t>(std::stoull(m[1]));
  const auto bins = static_cast<std::size_t>(std::stoull(m[2]));
  std::vector<float> data(frames * bins);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!in) {
    throw LoadError("truncated npy data in " + path);
  }
  return FeatureMatrix(frames, bins, std::move(data));
}

}  // namespace dac::corpus
