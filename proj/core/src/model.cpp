#include "drlr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "drlr/loss.hpp"

namespace drlr {

bool in_linf_ball(const Vector& beta, double radius) {
  return norm_inf(beta) <= radius + kFeasibilityTol * std::max(1.0, radius);
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(DenseMatrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  validate();
  build_signed_matrix();
}

Dataset::Dataset(SparseRowMatrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  std::get<SparseRowMatrix>(features_).makeCompressed();
  validate();
  build_signed_matrix();
}

Index Dataset::num_features() const {
  return std::visit([](const auto& m) { return m.cols(); }, features_);
}

void Dataset::validate() const {
  const Index rows = std::visit([](const auto& m) { return m.rows(); }, features_);
  if (labels_.size() < 1) throw std::invalid_argument("Dataset: need at least one sample");
  if (num_features() < 1) throw std::invalid_argument("Dataset: need at least one feature");
  if (rows != labels_.size()) {
    throw std::invalid_argument("Dataset: " + std::to_string(rows) + " feature rows but " +
                                std::to_string(labels_.size()) + " labels");
  }
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      throw std::invalid_argument("Dataset: label at row " + std::to_string(i) +
                                  " is not +1 or -1");
    }
  }
}

void Dataset::build_signed_matrix() {
  if (const auto* dense = std::get_if<DenseMatrix>(&features_)) {
    DenseMatrix z = labels_.asDiagonal() * (*dense);
    z_ = std::make_shared<const DataMatrix>(std::move(z));
  } else {
    const auto& sparse = std::get<SparseRowMatrix>(features_);
    SparseColMatrix z = labels_.asDiagonal() * sparse;
    z_ = std::make_shared<const DataMatrix>(std::move(z));
  }
}

Vector Dataset::scores(const Vector& beta) const {
  if (beta.size() != num_features()) throw std::invalid_argument("Dataset::scores: dimension mismatch");
  return std::visit([&](const auto& m) -> Vector { return m * beta; }, features_);
}

Dataset Dataset::subset(std::span<const Index> rows) const {
  Vector labels(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= num_samples()) throw std::out_of_range("Dataset::subset: row index");
    labels[static_cast<Index>(k)] = labels_[rows[k]];
  }
  if (const auto* dense = std::get_if<DenseMatrix>(&features_)) {
    DenseMatrix out(static_cast<Index>(rows.size()), dense->cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = dense->row(rows[k]);
    return Dataset(std::move(out), std::move(labels));
  }
  const auto& sparse = std::get<SparseRowMatrix>(features_);
  std::vector<Eigen::Triplet<double, Index>> triplets;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (SparseRowMatrix::InnerIterator it(sparse, rows[k]); it; ++it) {
      triplets.emplace_back(static_cast<Index>(k), it.col(), it.value());
    }
  }
  SparseRowMatrix out(static_cast<Index>(rows.size()), sparse.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return Dataset(std::move(out), std::move(labels));
}

Dataset Dataset::with_labels(Vector labels) const {
  return std::visit([&](const auto& m) { return Dataset(m, std::move(labels)); }, features_);
}

// ---------------------------------------------------------------------------
// DrlrConfig

void DrlrConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be > 0");
  require(kappa > 0.0, "kappa must be > 0");
  require(rho0 > 0.0 && std::isfinite(rho0), "rho0 must be > 0");
  require(gamma >= 1.0 && std::isfinite(gamma), "gamma must be >= 1");
  require(primal_tol > 0.0, "primal_tol must be > 0");
  require(max_iter > 0, "max_iter must be positive");
  require(!outer_tol || *outer_tol > 0.0, "outer_tol must be > 0");
  require(inner_tol > 0.0, "inner_tol must be > 0");
  require(inner_max_iter > 0, "inner_max_iter must be positive");
}

// ---------------------------------------------------------------------------
// SubproblemInstance

SubproblemInstance::SubproblemInstance(std::shared_ptr<const DataMatrix> z, double lambda,
                                       double kappa)
    : z_(std::move(z)), lambda_(lambda), kappa_(kappa) {
  if (!z_) throw std::invalid_argument("SubproblemInstance: null matrix");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw std::invalid_argument("SubproblemInstance: lambda must be >= 0");
  }
  if (!(kappa_ > 0.0)) throw std::invalid_argument("SubproblemInstance: kappa must be > 0");
  lipschitz_f_ = 1.0 / (4.0 * static_cast<double>(z_->rows()));
}

SubproblemInstance::SubproblemInstance(const Dataset& data, double lambda, double kappa)
    : SubproblemInstance(data.signed_matrix_ptr(), lambda, kappa) {}

SubproblemInstance SubproblemInstance::with_lambda(double lambda) const {
  return SubproblemInstance(z_, lambda, kappa_);
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxIter: return "MaxIter";
    case Status::Diverged: return "Diverged";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Objectives

double margin_loss(const Vector& mu, double center) {
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) acc += logloss(mu[i]) + std::max(mu[i] - center, 0.0);
  return acc / static_cast<double>(mu.size());
}

double drlr_objective(const Vector& beta, double lambda, const Dataset& data,
                      const DrlrConfig& cfg) {
  if (beta.size() != data.num_features()) {
    throw std::invalid_argument("drlr_objective: beta has " + std::to_string(beta.size()) +
                                " entries, data has " + std::to_string(data.num_features()) +
                                " features");
  }
  if (lambda < 0.0) throw std::invalid_argument("drlr_objective: lambda must be >= 0");
  if (!in_linf_ball(beta, lambda)) return kInfeasible;
  const Vector margins = data.signed_matrix().apply(beta);
  return lambda * cfg.epsilon + margin_loss(margins, lambda * cfg.kappa);
}

double subproblem_objective(const Vector& beta, const Vector& mu, const SubproblemInstance& inst) {
  if (beta.size() != inst.num_features() || mu.size() != inst.num_samples()) {
    throw std::invalid_argument("subproblem_objective: dimension mismatch");
  }
  if (!in_linf_ball(beta, inst.lambda())) return kInfeasible;
  return margin_loss(mu, inst.center());
}

double subproblem_value(const Vector& beta, const SubproblemInstance& inst) {
  if (beta.size() != inst.num_features()) throw std::invalid_argument("subproblem_value: dimension mismatch");
  if (!in_linf_ball(beta, inst.lambda())) return kInfeasible;
  return margin_loss(inst.z().apply(beta), inst.center());
}

// ---------------------------------------------------------------------------
// KKT

double KktResiduals::max() const { return std::max({primal, mu_stationarity, beta_stationarity}); }

KktResiduals kkt_residuals(const Vector& beta, const Vector& mu, const Vector& w,
                           const SubproblemInstance& inst) {
  const Index n_samples = inst.num_samples();
  if (beta.size() != inst.num_features() || mu.size() != n_samples || w.size() != n_samples) {
    throw std::invalid_argument("kkt_residual: dimension mismatch");
  }
  KktResiduals out;
  out.primal = (inst.z().apply(beta) - mu).norm();

  // -w_i in grad_i f(mu) + (1/(2N)) * sign(mu_i - c), interval-valued at the kink.
  const double half_weight = 1.0 / (2.0 * static_cast<double>(n_samples));
  const double center = inst.center();
  const double kink_tol = kFeasibilityTol * std::max(1.0, std::abs(center));
  const Vector gf = grad_f(mu);
  for (Index i = 0; i < n_samples; ++i) {
    const double target = -w[i] - gf[i];
    const double d = mu[i] - center;
    double dist;
    if (std::abs(d) <= kink_tol) {
      dist = std::max(std::abs(target) - half_weight, 0.0);
    } else {
      dist = std::abs(target - (d > 0.0 ? half_weight : -half_weight));
    }
    out.mu_stationarity = std::max(out.mu_stationarity, dist);
  }

  // Z^T w in the normal cone of {||beta||_inf <= lambda}.
  const double lambda = inst.lambda();
  if (lambda > 0.0) {
    const Vector v = inst.z().apply_transpose(w);
    for (Index j = 0; j < v.size(); ++j) {
      double dist;
      if (beta[j] >= lambda) {
        dist = std::max(-v[j], 0.0);
      } else if (beta[j] <= -lambda) {
        dist = std::max(v[j], 0.0);
      } else {
        dist = std::abs(v[j]);
      }
      out.beta_stationarity = std::max(out.beta_stationarity, dist);
    }
  }
  return out;
}

double kkt_residual(const Vector& beta, const Vector& mu, const Vector& w,
                    const SubproblemInstance& inst) {
  return kkt_residuals(beta, mu, w, inst).max();
}

double lambda_stationarity(const Vector& mu, const Vector& w, const SubproblemInstance& inst,
                           double epsilon) {
  const double n = static_cast<double>(inst.num_samples());
  double theta_sum = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    const double theta = -n * w[i] - sigmoid(mu[i]) + 1.0;
    theta_sum += std::clamp(theta, 0.0, 1.0);
  }
  const double ball = inst.z().apply_transpose(w).lpNorm<1>();
  return std::abs(epsilon - inst.kappa() * theta_sum / n - ball);
}

}  // namespace drlr
