#include "drlr/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/SparseCore>

#include "drlr/loss.hpp"

namespace drlr {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // 1 - uniform() lies in (0, 1], keeping the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  return r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

namespace {

struct ParseError {
  DataError::Kind kind;
  std::string message;
};

[[noreturn]] void fail(DataError::Kind kind, std::size_t line, std::size_t column,
                       const std::string& what) {
  std::ostringstream os;
  os << "libsvm line " << line << ", column " << column << ": " << what;
  throw DataError(kind, os.str());
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

template <class T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& opts) {
  using Triplet = Eigen::Triplet<double, Index>;
  std::vector<Triplet> entries;
  std::vector<double> labels;
  Index max_index = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::size_t pos = 0;
    auto next_token = [&](std::size_t& column) -> std::string_view {
      while (pos < line.size() && is_space(line[pos])) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && !is_space(line[pos])) ++pos;
      column = start + 1;
      return line.substr(start, pos - start);
    };

    std::size_t column = 0;
    const std::string_view label_tok = next_token(column);
    if (label_tok.empty()) continue;

    double label = 0.0;
    if (!parse_number(label_tok, label)) {
      fail(DataError::Kind::MalformedToken, line_no, column,
           "malformed label '" + std::string(label_tok) + "'");
    }
    if (label != 1.0 && label != -1.0) {
      fail(DataError::Kind::BadLabel, line_no, column,
           "label must be +1 or -1, got '" + std::string(label_tok) + "'");
    }
    const Index row = static_cast<Index>(labels.size());
    labels.push_back(label);

    Index prev = 0;
    for (;;) {
      const std::string_view tok = next_token(column);
      if (tok.empty()) break;
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        fail(DataError::Kind::MalformedToken, line_no, column,
             "expected <index>:<value>, got '" + std::string(tok) + "'");
      }
      long long idx = 0;
      double value = 0.0;
      if (!parse_number(tok.substr(0, colon), idx)) {
        fail(DataError::Kind::MalformedToken, line_no, column,
             "malformed index in '" + std::string(tok) + "'");
      }
      if (!parse_number(tok.substr(colon + 1), value) || !std::isfinite(value)) {
        fail(DataError::Kind::MalformedToken, line_no, column + colon + 1,
             "malformed value in '" + std::string(tok) + "'");
      }
      if (idx < 1) {
        fail(DataError::Kind::BadIndex, line_no, column, "indices are 1-based, got " + std::to_string(idx));
      }
      if (idx == prev) {
        fail(DataError::Kind::DuplicateIndex, line_no, column, "duplicate index " + std::to_string(idx));
      }
      if (idx < prev) {
        fail(DataError::Kind::BadIndex, line_no, column,
             "indices must be ascending, " + std::to_string(idx) + " after " + std::to_string(prev));
      }
      if (opts.dimension && idx > *opts.dimension) {
        fail(DataError::Kind::BadIndex, line_no, column,
             "index " + std::to_string(idx) + " exceeds dimension " + std::to_string(*opts.dimension));
      }
      prev = static_cast<Index>(idx);
      max_index = std::max(max_index, prev);
      if (value != 0.0) entries.emplace_back(row, prev - 1, value);
    }
  }
  if (in.bad()) throw DataError(DataError::Kind::Io, "libsvm: read error");
  if (labels.empty()) throw DataError(DataError::Kind::EmptyDataset, "libsvm: no samples");

  const Index cols = opts.dimension.value_or(max_index);
  if (cols < 1) throw DataError(DataError::Kind::EmptyDataset, "libsvm: no features");
  SparseRowMatrix x(static_cast<Index>(labels.size()), cols);
  x.setFromTriplets(entries.begin(), entries.end());
  x.makeCompressed();
  return Dataset(std::move(x), Eigen::Map<const Vector>(labels.data(), static_cast<Index>(labels.size())));
}

Dataset parse_libsvm(std::string_view text, const LibsvmOptions& opts) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, opts);
}

Dataset load_libsvm(const std::string& path, const LibsvmOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError(DataError::Kind::Io, "cannot open " + path);
  return parse_libsvm(in, opts);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  char buf[64];
  auto put = [&](double v) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.write(buf, len);
  };
  const Vector& y = data.labels();
  std::visit(
      [&](const auto& x) {
        using M = std::decay_t<decltype(x)>;
        for (Index i = 0; i < x.rows(); ++i) {
          out << (y[i] > 0 ? "+1" : "-1");
          if constexpr (std::is_same_v<M, SparseRowMatrix>) {
            for (typename M::InnerIterator it(x, i); it; ++it) {
              if (it.value() == 0.0) continue;
              out << ' ' << it.col() + 1 << ':';
              put(it.value());
            }
          } else {
            for (Index j = 0; j < x.cols(); ++j) {
              if (x(i, j) == 0.0) continue;
              out << ' ' << j + 1 << ':';
              put(x(i, j));
            }
          }
          out << '\n';
        }
      },
      data.features());
}

SyntheticData generate_synthetic(Index num_samples, Index num_features, Rng& rng) {
  if (num_samples < 1 || num_features < 1) {
    throw std::invalid_argument("generate_synthetic: N and n must be >= 1");
  }
  Vector beta(num_features);
  for (Index j = 0; j < num_features; ++j) beta[j] = rng.gaussian();
  const double norm = beta.norm();
  if (norm > 0.0) beta /= norm;

  DenseMatrix x(num_samples, num_features);
  for (Index i = 0; i < num_samples; ++i) {
    for (Index j = 0; j < num_features; ++j) x(i, j) = rng.gaussian();
  }
  Vector labels(num_samples);
  for (Index i = 0; i < num_samples; ++i) {
    const double z = rng.uniform();
    labels[i] = z < sigmoid(x.row(i).dot(beta)) ? 1.0 : -1.0;
  }
  return {Dataset(std::move(x), std::move(labels)), std::move(beta)};
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must be in (0, 1)");
  }
  const Index n = data.num_samples();
  const auto n_train = static_cast<Index>(std::ceil(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    throw std::invalid_argument("split: fraction " + std::to_string(train_fraction) + " of " +
                                std::to_string(n) + " samples leaves one side empty");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  const std::span<const Index> all(perm);
  return {data.subset(all.first(static_cast<std::size_t>(n_train))),
          data.subset(all.subspan(static_cast<std::size_t>(n_train)))};
}

Dataset flip_labels(const Dataset& data, double probability, Rng& rng) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("flip_labels: probability must be in [0, 1]");
  }
  Vector y = data.labels();
  for (Index i = 0; i < y.size(); ++i) {
    if (rng.uniform() < probability) y[i] = -y[i];
  }
  return data.with_labels(std::move(y));
}

}  // namespace drlr
