#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drlr/linalg.hpp"

namespace drlr {

// Objective value returned when beta leaves the l-infinity ball of radius lambda.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// Slack used by the ball-membership test. Solvers clamp exactly, so this only
// absorbs rounding in externally constructed points such as convex combinations.
inline constexpr double kFeasibilityTol = 1e-12;

inline bool is_infeasible(double objective) { return objective == kInfeasible; }

bool in_linf_ball(const Vector& beta, double radius);

/// Binary classification data: N samples with n features and labels in {-1, +1}.
///
/// The feature matrix is kept in the layout it was supplied in (dense or sparse
/// rows). The signed matrix Z, whose i-th row is y_i x_i^T, is built once at
/// construction and shared with every solver working on this dataset.
class Dataset {
 public:
  Dataset(DenseMatrix features, Vector labels);
  Dataset(SparseRowMatrix features, Vector labels);

  Index num_samples() const { return labels_.size(); }
  Index num_features() const;
  bool is_sparse() const { return std::holds_alternative<SparseRowMatrix>(features_); }

  const Vector& labels() const { return labels_; }
  const std::variant<DenseMatrix, SparseRowMatrix>& features() const { return features_; }

  // Z with row i equal to labels[i] * features[i].
  const DataMatrix& signed_matrix() const { return *z_; }
  std::shared_ptr<const DataMatrix> signed_matrix_ptr() const { return z_; }

  // X beta (unsigned scores).
  Vector scores(const Vector& beta) const;

  Dataset subset(std::span<const Index> rows) const;
  Dataset with_labels(Vector labels) const;

 private:
  void validate() const;
  void build_signed_matrix();

  std::variant<DenseMatrix, SparseRowMatrix> features_;
  Vector labels_;
  std::shared_ptr<const DataMatrix> z_;
};

struct DrlrConfig {
  double epsilon = 0.1;
  double kappa = 1.0;
  double rho0 = 0.001;
  double gamma = 1.05;
  double primal_tol = 1e-6;
  int max_iter = 20000;
  // Golden-section interval width. Unset means 1e-4 * lambda upper bound.
  std::optional<double> outer_tol;
  std::uint64_t seed = 42;

  double inner_tol = 1e-8;
  int inner_max_iter = 5000;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  bool adaptive() const { return gamma > 1.0; }
};

/// The fixed-lambda beta-subproblem
///   min_{beta, mu} f(mu) + P(mu) + g(beta)  s.t.  Z beta = mu
/// with f(mu) = (1/N) sum [h(mu_i) + (mu_i - lambda kappa)/2],
///      P(mu) = (1/(2N)) sum |mu_i - lambda kappa|,
///      g     = indicator of ||beta||_inf <= lambda.
class SubproblemInstance {
 public:
  SubproblemInstance(std::shared_ptr<const DataMatrix> z, double lambda, double kappa);
  SubproblemInstance(const Dataset& data, double lambda, double kappa);

  const DataMatrix& z() const { return *z_; }
  const std::shared_ptr<const DataMatrix>& z_ptr() const { return z_; }
  double lambda() const { return lambda_; }
  double kappa() const { return kappa_; }
  // Location of the hinge kink, lambda * kappa.
  double center() const { return lambda_ * kappa_; }
  // Lipschitz constant of grad f, exactly 1/(4N).
  double lipschitz_f() const { return lipschitz_f_; }
  Index num_samples() const { return z_->rows(); }
  Index num_features() const { return z_->cols(); }

  SubproblemInstance with_lambda(double lambda) const;

 private:
  std::shared_ptr<const DataMatrix> z_;
  double lambda_;
  double kappa_;
  double lipschitz_f_;
};

enum class Status { Converged, MaxIter, Diverged };

std::string_view to_string(Status s);

struct Solution {
  Vector beta;
  double lambda = 0.0;
  double objective = kInfeasible;
  double kkt_residual = kInfeasible;
  Status status = Status::MaxIter;
  int iterations = 0;
  // Split variable and multiplier at termination, when the solver has them.
  std::optional<Vector> mu;
  std::optional<Vector> w;
  std::vector<std::string> warnings;
};

// Omega(lambda, beta) = lambda eps + (1/N) sum (h(m_i) + max(m_i - lambda kappa, 0)),
// m = Z beta; kInfeasible outside the ball.
double drlr_objective(const Vector& beta, double lambda, const Dataset& data,
                      const DrlrConfig& cfg);

// (1/N) sum (h(mu_i) + max(mu_i - c, 0)) for a given kink location c.
double margin_loss(const Vector& mu, double center);

// F(beta, mu) = f(mu) + P(mu) + g(beta).
double subproblem_objective(const Vector& beta, const Vector& mu, const SubproblemInstance& inst);

// F(beta, Z beta): the beta-subproblem value of a primal point.
double subproblem_value(const Vector& beta, const SubproblemInstance& inst);

struct KktResiduals {
  double primal = 0.0;         // ||Z beta - mu||_2
  double mu_stationarity = 0.0;    // max_i dist(-w_i, grad_i f(mu) + dP_i(mu_i))
  double beta_stationarity = 0.0;  // max_j dist((Z^T w)_j, normal cone of the ball at beta)
  double max() const;
};

KktResiduals kkt_residuals(const Vector& beta, const Vector& mu, const Vector& w,
                           const SubproblemInstance& inst);
double kkt_residual(const Vector& beta, const Vector& mu, const Vector& w,
                    const SubproblemInstance& inst);

// |eps - (kappa/N) sum theta_i - ||Z^T w||_1| where theta_i in [0, 1] is the
// hinge multiplier recovered from (mu, w). Zero at an interior optimal lambda.
double lambda_stationarity(const Vector& mu, const Vector& w, const SubproblemInstance& inst,
                           double epsilon);

}  // namespace drlr
