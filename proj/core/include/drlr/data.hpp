#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "drlr/model.hpp"

namespace drlr {

/// Deterministic random stream: std::mt19937_64 (fully specified by the
/// standard) with uniforms built from the top 53 bits and Gaussians from the
/// Box-Muller transform, so generated data is identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  double gaussian();
  // Uniform integer in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::optional<double> spare_;
};

class DataError : public std::runtime_error {
 public:
  enum class Kind { EmptyDataset, BadLabel, BadIndex, DuplicateIndex, MalformedToken, Io };

  DataError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct LibsvmOptions {
  // Feature dimension; indices above it are an error. Unset: max index seen.
  std::optional<Index> dimension;
};

/// Parses LIBSVM text: one "<label> <idx>:<val> ..." sample per nonempty line,
/// labels +1/-1 only, 1-based strictly ascending indices. '#' starts a comment.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& opts = {});
Dataset parse_libsvm(std::string_view text, const LibsvmOptions& opts = {});
Dataset load_libsvm(const std::string& path, const LibsvmOptions& opts = {});

// Writes nonzeros with 17 significant digits so the output reparses exactly.
void write_libsvm(std::ostream& out, const Dataset& data);

struct SyntheticData {
  Dataset data;
  Vector beta_star;
};

/// Draws beta ~ N(0, I_n) normalized to unit l2 norm, then rows x_i ~ N(0, I_n),
/// then z_i ~ U[0, 1), and sets y_i = +1 iff z_i < sigmoid(beta*^T x_i).
SyntheticData generate_synthetic(Index num_samples, Index num_features, Rng& rng);

/// Uniform random permutation (Fisher-Yates); the first ceil(fraction N) rows
/// are the training side. Throws std::invalid_argument if either side is empty.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, Rng& rng);

// Flips each label independently with the given probability.
Dataset flip_labels(const Dataset& data, double probability, Rng& rng);

}  // namespace drlr
