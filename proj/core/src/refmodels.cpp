#include "drlr/refmodels.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "drlr/boxqp.hpp"
#include "drlr/loss.hpp"

namespace drlr {

namespace {

Vector lr_gradient(const Vector& beta, const Dataset& data) {
  const DataMatrix& z = data.signed_matrix();
  const Vector m = z.apply(beta);
  Vector d(m.size());
  for (Index i = 0; i < m.size(); ++i) d[i] = logloss_derivative(m[i]);
  return z.apply_transpose(d) / static_cast<double>(m.size());
}

double step_size(const Dataset& data) {
  const double bound = estimate_spectral_bound(data.signed_matrix());
  return 4.0 * static_cast<double>(data.num_samples()) / std::max(bound, 1e-300);
}

Vector prox_linf(const Vector& v, double radius) { return v - project_l1_ball(v, radius); }

struct ProxGradResult {
  Vector x;
  bool converged = false;
  int iterations = 0;
};

// Accelerated proximal gradient with function-value restart. `residual`
// measures optimality of a point; `prox` is the prox of t * (nonsmooth part).
ProxGradResult accelerated_prox_gradient(const Dataset& data, double t,
                                         const std::function<Vector(const Vector&)>& prox,
                                         const std::function<double(const Vector&)>& objective,
                                         const std::function<double(const Vector&)>& residual,
                                         double tol, int max_iter) {
  ProxGradResult out;
  Vector x = Vector::Zero(data.num_features());
  Vector y = x;
  double theta = 1.0;
  double fx = objective(x);
  for (int k = 0; k < max_iter; ++k) {
    if (residual(x) <= tol) {
      out.converged = true;
      out.iterations = k;
      out.x = std::move(x);
      return out;
    }
    Vector x_new = prox(y - t * lr_gradient(y, data));
    const double f_new = objective(x_new);
    if (f_new > fx) {
      // Momentum overshoot: restart from a plain step at x.
      theta = 1.0;
      x_new = prox(x - t * lr_gradient(x, data));
      y = x_new;
      x = std::move(x_new);
      fx = objective(x);
      continue;
    }
    const double theta_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    y = x_new + ((theta - 1.0) / theta_new) * (x_new - x);
    theta = theta_new;
    x = std::move(x_new);
    fx = f_new;
  }
  out.converged = residual(x) <= tol;
  out.iterations = max_iter;
  out.x = std::move(x);
  return out;
}

}  // namespace

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::LR: return "lr";
    case ModelKind::RLR: return "rlr";
    case ModelKind::DRLR: return "drlr";
  }
  return "unknown";
}

double lr_objective(const Vector& beta, const Dataset& data) {
  const Vector m = data.signed_matrix().apply(beta);
  double acc = 0.0;
  for (Index i = 0; i < m.size(); ++i) acc += logloss(m[i]);
  return acc / static_cast<double>(m.size());
}

double rlr_objective(const Vector& beta, const Dataset& data, double epsilon) {
  return lr_objective(beta, data) + epsilon * norm_inf(beta);
}

double rlr_prox_residual(const Vector& beta, const Dataset& data, double epsilon) {
  const double t = step_size(data);
  const Vector p = prox_linf(beta - t * lr_gradient(beta, data), t * epsilon);
  return (beta - p).norm() / t;
}

LinearClassifier train_lr(const Dataset& data, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("train_lr: tol must be > 0");
  const double t = step_size(data);
  const auto res = accelerated_prox_gradient(
      data, t, [](const Vector& v) { return v; },
      [&](const Vector& b) { return lr_objective(b, data); },
      [&](const Vector& b) { return lr_gradient(b, data).norm(); }, tol, max_iter);
  LinearClassifier out;
  out.beta = res.x;
  out.kind = ModelKind::LR;
  out.converged = res.converged;
  out.iterations = res.iterations;
  if (!res.converged) {
    out.warnings.push_back("train_lr: gradient tolerance not reached in " +
                           std::to_string(max_iter) + " iterations (data may be separable)");
  }
  return out;
}

LinearClassifier train_rlr(const Dataset& data, double epsilon, double tol, int max_iter) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("train_rlr: epsilon must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("train_rlr: tol must be > 0");
  const double t = step_size(data);
  const auto res = accelerated_prox_gradient(
      data, t, [&](const Vector& v) { return prox_linf(v, t * epsilon); },
      [&](const Vector& b) { return rlr_objective(b, data, epsilon); },
      [&](const Vector& b) { return rlr_prox_residual(b, data, epsilon); }, tol, max_iter);
  LinearClassifier out;
  out.beta = res.x;
  out.kind = ModelKind::RLR;
  out.hyperparams["epsilon"] = epsilon;
  out.converged = res.converged;
  out.iterations = res.iterations;
  if (!res.converged) {
    out.warnings.push_back("train_rlr: fixed-point tolerance not reached in " +
                           std::to_string(max_iter) + " iterations");
  }
  return out;
}

double accuracy(const Vector& beta, const Dataset& data) {
  if (beta.size() != data.num_features()) {
    throw std::invalid_argument("accuracy: model has " + std::to_string(beta.size()) +
                                " features, data has " + std::to_string(data.num_features()));
  }
  const Vector s = data.scores(beta);
  Index hits = 0;
  for (Index i = 0; i < s.size(); ++i) {
    const double predicted = s[i] >= 0.0 ? 1.0 : -1.0;
    if (predicted == data.labels()[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(s.size());
}

double accuracy(const LinearClassifier& model, const Dataset& data) {
  return accuracy(model.beta, data);
}

}  // namespace drlr
