#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <cstring>
#include <fstream>
#include <iterator>

#include "reviewscope/embedding.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'S'};

template <typename T>
void put_le(std::string& buf, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  buf.append(reinterpret_cast<const char*>(bits.data()), bits.size());
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  template <typename T>
  T get(const char* what) {
    if (remaining() < sizeof(T)) throw FormatError(std::string("truncated ") + what, pos_);
    std::array<unsigned char, sizeof(T)> raw;
    std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    pos_ += sizeof(T);
    return std::bit_cast<T>(raw);
  }

  std::string get_string(std::size_t n) {
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_store(const EmbeddingStore& store, std::ostream& out) {
  std::string buf(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(buf, kStoreVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(store.dim()));
  put_le<std::uint64_t>(buf, store.size());
  for (const auto& [key, vec] : store.entries()) {
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(key.size()));
    buf += key;
    for (double v : vec.values()) put_le<float>(buf, static_cast<float>(v));
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw EmbeddingError("failed writing store");
}

void write_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EmbeddingError("cannot write store " + path.string());
  write_store(store, out);
}

EmbeddingStore read_store(std::span<const std::byte> bytes, std::size_t expected_dim) {
  Reader r(bytes);
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("bad magic, expected EMBS", 0);
  }
  r.get_string(sizeof(kMagic));
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kStoreVersion) {
    throw FormatError("unsupported store version " + std::to_string(version), version_at);
  }
  const std::size_t dim_at = r.offset();
  const auto dim = r.get<std::uint32_t>("dim");
  if (dim == 0) throw FormatError("dim must be >= 1", dim_at);
  if (expected_dim != 0 && dim != expected_dim) {
    throw FormatError("dim mismatch: store has " + std::to_string(dim) + ", expected " + std::to_string(expected_dim),
                      dim_at);
  }
  const auto count = r.get<std::uint64_t>("count");

  EmbeddingStore store(dim);
  std::vector<double> values(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t record_at = r.offset();
    const auto key_len = r.get<std::uint32_t>("key length");
    if (key_len > r.remaining()) {
      throw FormatError("key length " + std::to_string(key_len) + " exceeds remaining bytes", record_at);
    }
    std::string key = r.get_string(key_len);
    if (r.remaining() < static_cast<std::size_t>(dim) * sizeof(float)) {
      throw FormatError("truncated vector for record " + std::to_string(i), r.offset());
    }
    const std::size_t vector_at = r.offset();
    for (std::uint32_t d = 0; d < dim; ++d) {
      const float f = r.get<float>("component");
      if (!std::isfinite(f)) throw FormatError("non-finite component in record " + std::to_string(i), vector_at);
      values[d] = f;
    }
    if (store.find(key) != nullptr) throw FormatError("duplicate key \"" + key + "\"", record_at);
    store.add(std::move(key), EmbeddingVector(values));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last record", r.offset());
  return store;
}

EmbeddingStore load_store(const std::filesystem::path& path, std::size_t expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open store " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_store(std::as_bytes(std::span<const char>(raw)), expected_dim);
}

}  // namespace reviewscope
