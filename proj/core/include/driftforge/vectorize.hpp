#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace driftforge {

using Vector = std::vector<float>;

// Maps a text to a fixed-dimension dense vector. Implementations are
// immutable after construction; transform may be called concurrently.
class Vectorizer {
 public:
  virtual ~Vectorizer() = default;
  virtual std::size_t dim() const = 0;
  virtual Vector transform(std::string_view text) const = 0;
};

// Signed feature hashing over lowercased word unigrams, L2-normalized when
// the result is nonzero.
class HashingVectorizer final : public Vectorizer {
 public:
  static constexpr std::size_t kDefaultDim = 384;

  explicit HashingVectorizer(std::size_t dim = kDefaultDim, std::uint64_t seed = 0);

  std::size_t dim() const override { return dim_; }
  Vector transform(std::string_view text) const override;

  // Bucket and sign for a single normalized token.
  std::size_t bucket(std::string_view token) const;
  bool negative(std::string_view token) const;

 private:
  std::uint64_t hash(std::string_view token) const;

  std::size_t dim_;
  std::uint64_t seed_;
};

Vector hash_vectorize(std::string_view text, std::size_t dim = HashingVectorizer::kDefaultDim,
                      std::uint64_t seed = 0);

void l2_normalize(std::span<float> v);

// Binary embedding file: "DFE1", u32 dim, u64 count, count * dim float32,
// all little-endian, row-major.
struct EmbeddingSet {
  std::size_t dim = 0;
  std::vector<Vector> vectors;
};

EmbeddingSet load_embedding_file(const std::string& path);
EmbeddingSet parse_embeddings(std::span<const std::byte> bytes);
void write_embedding_file(const std::string& path, std::size_t dim, const std::vector<Vector>& vectors);
std::vector<std::byte> serialize_embeddings(std::size_t dim, const std::vector<Vector>& vectors);

}  // namespace driftforge
