#pragma once

#include <map>
#include <string>
#include <string_view>

#include "drlr/model.hpp"

namespace drlr {

enum class ModelKind { LR, RLR, DRLR };

std::string_view to_string(ModelKind k);

struct LinearClassifier {
  Vector beta;
  ModelKind kind = ModelKind::LR;
  std::map<std::string, double> hyperparams;
  bool converged = true;
  int iterations = 0;
  std::vector<std::string> warnings;
};

// (1/N) sum h(Z beta)_i
double lr_objective(const Vector& beta, const Dataset& data);
// lr_objective + eps ||beta||_inf
double rlr_objective(const Vector& beta, const Dataset& data, double epsilon);

/// Plain logistic regression by accelerated gradient descent with adaptive
/// restart, step 4N / lambda_max(Z^T Z). Returns once ||grad||_2 <= tol; on
/// separable data this may never happen and the max_iter iterate is returned
/// with converged = false.
LinearClassifier train_lr(const Dataset& data, double tol = 1e-8, int max_iter = 100000);

/// l-infinity regularized logistic regression by accelerated proximal gradient.
/// The prox of t eps ||.||_inf is v - P_{l1 ball, t eps}(v). Stops when the
/// fixed-point residual ||beta - prox(beta - t grad)|| / t <= tol.
LinearClassifier train_rlr(const Dataset& data, double epsilon, double tol = 1e-8,
                           int max_iter = 100000);

// Fixed-point residual used by train_rlr as its optimality certificate.
double rlr_prox_residual(const Vector& beta, const Dataset& data, double epsilon);

/// Fraction of samples with sign(x_i^T beta) == y_i, where sign(0) = +1.
double accuracy(const LinearClassifier& model, const Dataset& data);
double accuracy(const Vector& beta, const Dataset& data);

}  // namespace drlr
