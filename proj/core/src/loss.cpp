#include "drlr/loss.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace drlr {

double logloss(double u) {
  if (std::isnan(u)) throw std::invalid_argument("logloss: NaN input");
  return std::max(-u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double logloss_derivative(double u) { return -sigmoid(-u); }

double logloss_curvature(double u) {
  const double s = sigmoid(u);
  return s * (1.0 - s);
}

double phi(double t) {
  // t / (e^t + 1) = t e^{-t} / (1 + e^{-t}); the second form is safe for large t.
  if (t > 0.0) return t * std::exp(-t) / (1.0 + std::exp(-t));
  return t / (std::exp(t) + 1.0);
}

Vector grad_f(const Vector& mu) {
  const double inv_n = 1.0 / static_cast<double>(mu.size());
  return mu.unaryExpr([inv_n](double m) { return inv_n * (sigmoid(m) - 0.5); });
}

Vector grad_f(const Vector& mu, const SubproblemInstance& inst) {
  if (mu.size() != inst.num_samples()) throw std::invalid_argument("grad_f: dimension mismatch");
  return grad_f(mu);
}

double smooth_part(const Vector& mu, double center) {
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) acc += logloss(mu[i]) + 0.5 * (mu[i] - center);
  return acc / static_cast<double>(mu.size());
}

double bregman_f(const Vector& x, const Vector& y, double center) {
  return smooth_part(x, center) - smooth_part(y, center) - grad_f(y).dot(x - y);
}

ProxShiftedAbs::ProxShiftedAbs(double center, double weight, double rho)
    : center(center), weight(weight), rho(rho) {
  if (!(weight > 0.0)) throw std::invalid_argument("ProxShiftedAbs: weight must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("ProxShiftedAbs: rho must be > 0");
}

double ProxShiftedAbs::operator()(double v) const {
  const double c = threshold();
  if (v > center + c) return v - c;
  if (v < center - c) return v + c;
  return center;
}

Vector ProxShiftedAbs::apply(const Vector& v) const {
  return v.unaryExpr([this](double x) { return (*this)(x); });
}

Vector prox_P(const Vector& v, const SubproblemInstance& inst, double rho) {
  if (v.size() != inst.num_samples()) throw std::invalid_argument("prox_P: dimension mismatch");
  const double weight = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  return ProxShiftedAbs(inst.center(), weight, rho).apply(v);
}

Vector project_linf_ball(const Vector& v, double radius) {
  Vector out = v;
  clamp_inplace(out, radius);
  return out;
}

void clamp_inplace(Vector& v, double radius) {
  if (radius < 0.0) throw std::invalid_argument("project_linf_ball: negative radius");
  v = v.cwiseMax(-radius).cwiseMin(radius);
}

Vector project_l1_ball(const Vector& v, double radius) {
  if (radius < 0.0) throw std::invalid_argument("project_l1_ball: negative radius");
  if (v.lpNorm<1>() <= radius) return v;
  if (radius == 0.0) return Vector::Zero(v.size());

  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // Largest k with mags[k-1] > (sum_{j<k} mags[j] - radius) / k.
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    cumsum += mags[k];
    const double t = (cumsum - radius) / static_cast<double>(k + 1);
    if (mags[k] > t) tau = t;
  }
  return v.unaryExpr([tau](double x) {
    const double m = std::max(std::abs(x) - tau, 0.0);
    return std::copysign(m, x);
  });
}

}  // namespace drlr
