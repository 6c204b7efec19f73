#include "driftforge/vectorize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "driftforge/error.hpp"
#include "driftforge/lexswap.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

namespace {

constexpr char kMagic[4] = {'D', 'F', 'E', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8;

template <typename T>
T read_le(const std::byte* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
    std::reverse(raw.begin(), raw.end());
    value = std::bit_cast<T>(raw);
  }
  return value;
}

template <typename T>
void append_le(std::vector<std::byte>& out, T value) {
  auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.insert(out.end(), raw.begin(), raw.end());
}

}  // namespace

HashingVectorizer::HashingVectorizer(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw Error("hashing vectorizer dimension must be at least 1");
}

std::uint64_t HashingVectorizer::hash(std::string_view token) const {
  // FNV-1a, then a SplitMix finalizer keyed by the seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : token) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix_seed(h ^ mix_seed(seed_));
}

std::size_t HashingVectorizer::bucket(std::string_view token) const {
  return static_cast<std::size_t>((hash(token) & 0xffffffffULL) % dim_);
}

bool HashingVectorizer::negative(std::string_view token) const { return (hash(token) >> 63) != 0; }

Vector HashingVectorizer::transform(std::string_view text) const {
  Vector v(dim_, 0.0f);
  for (const auto& tok : tokenize(text)) {
    if (!tok.is_word) continue;
    const std::uint64_t h = hash(tok.norm);
    const auto index = static_cast<std::size_t>((h & 0xffffffffULL) % dim_);
    v[index] += (h >> 63) ? -1.0f : 1.0f;
  }
  l2_normalize(v);
  return v;
}

Vector hash_vectorize(std::string_view text, std::size_t dim, std::uint64_t seed) {
  return HashingVectorizer(dim, seed).transform(text);
}

void l2_normalize(std::span<float> v) {
  double norm = 0.0;
  for (const float x : v) norm += static_cast<double>(x) * x;
  if (norm <= 0.0) return;
  const double inv = 1.0 / std::sqrt(norm);
  for (float& x : v) x = static_cast<float>(x * inv);
}

EmbeddingSet parse_embeddings(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize)
    throw Error(fmt::format("embedding file truncated at offset {}: header needs {} bytes", bytes.size(), kHeaderSize));
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error("embedding file magic mismatch at offset 0");
  const auto dim = read_le<std::uint32_t>(bytes.data() + 4);
  const auto count = read_le<std::uint64_t>(bytes.data() + 8);
  if (dim == 0) throw Error("embedding file declares dim = 0 at offset 4");

  const std::uint64_t payload = bytes.size() - kHeaderSize;
  const std::uint64_t row_bytes = std::uint64_t{dim} * sizeof(float);
  if (count > payload / row_bytes)
    throw Error(fmt::format("embedding file truncated at offset {}: header declares {} x {} floats",
                            bytes.size(), count, dim));
  if (payload != count * row_bytes)
    throw Error(fmt::format("embedding file has trailing bytes at offset {}", kHeaderSize + count * row_bytes));

  EmbeddingSet set;
  set.dim = dim;
  set.vectors.reserve(count);
  const std::byte* p = bytes.data() + kHeaderSize;
  for (std::uint64_t row = 0; row < count; ++row) {
    Vector v(dim);
    for (std::uint32_t j = 0; j < dim; ++j, p += sizeof(float)) {
      v[j] = read_le<float>(p);
      if (!std::isfinite(v[j]))
        throw Error(fmt::format("non-finite float at offset {}", p - bytes.data()));
    }
    set.vectors.push_back(std::move(v));
  }
  return set;
}

EmbeddingSet load_embedding_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open embedding file \"{}\"", path));
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_embeddings(std::as_bytes(std::span<const char>(raw)));
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

std::vector<std::byte> serialize_embeddings(std::size_t dim, const std::vector<Vector>& vectors) {
  if (dim == 0 || dim > 0xffffffffULL) throw Error("embedding dim must be in [1, 2^32)");
  std::vector<std::byte> out;
  out.reserve(kHeaderSize + vectors.size() * dim * sizeof(float));
  for (const char c : kMagic) out.push_back(static_cast<std::byte>(c));
  append_le(out, static_cast<std::uint32_t>(dim));
  append_le(out, static_cast<std::uint64_t>(vectors.size()));
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(fmt::format("vector of length {} in a dim-{} embedding set", v.size(), dim));
    for (const float x : v) append_le(out, x);
  }
  return out;
}

void write_embedding_file(const std::string& path, std::size_t dim, const std::vector<Vector>& vectors) {
  const auto bytes = serialize_embeddings(dim, vectors);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write embedding file \"{}\"", path));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(fmt::format("write failed for \"{}\"", path));
}

}  // namespace driftforge
