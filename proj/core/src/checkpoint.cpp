#include "vton/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "vton/common.hpp"

namespace vton::io {

namespace {
constexpr char kMagic[4] = {'V', 'T', 'C', 'K'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ParseError("checkpoint: truncated file");
  return v;
}
}  // namespace

void save_tensors(const std::string& path,
                  const std::vector<std::pair<std::string, Tensor>>& tensors) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put(os, kVersion);
  put(os, static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put(os, static_cast<uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put(os, static_cast<uint32_t>(t.ndim()));
    for (int d : t.shape()) put(os, static_cast<int32_t>(d));
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(t.numel() * sizeof(Real)));
  }
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError("checkpoint: bad magic in " + path);
  const auto version = get<uint32_t>(is);
  if (version != kVersion) throw ParseError("checkpoint: unsupported version");
  const auto count = get<uint32_t>(is);
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    const auto name_len = get<uint32_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const auto ndim = get<uint32_t>(is);
    std::vector<int> shape(ndim);
    for (auto& d : shape) d = get<int32_t>(is);
    Tensor t(shape);
    is.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(Real)));
    if (!is) throw ParseError("checkpoint: truncated tensor data");
    out.emplace_back(std::move(name), std::move(t));
  }
  return out;
}

}  // namespace vton::io
