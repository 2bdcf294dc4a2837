#pragma once

#include "drlr/linalg.hpp"
#include "drlr/model.hpp"

namespace drlr {

// h(u) = log(1 + exp(-u)), evaluated without overflow for any finite double.
// Throws std::invalid_argument on NaN.
double logloss(double u);

// 1 / (1 + exp(-u)), stable in both tails.
double sigmoid(double u);

// h'(u) = sigmoid(u) - 1.
double logloss_derivative(double u);

// h''(u) = sigmoid(u) (1 - sigmoid(u)).
double logloss_curvature(double u);

// phi(t) = t / (exp(t) + 1); its supremum bounds the optimal lambda.
double phi(double t);

// grad f(mu)_i = (sigmoid(mu_i) - 1/2) / N.
Vector grad_f(const Vector& mu, const SubproblemInstance& inst);
Vector grad_f(const Vector& mu);

// f(mu) = (1/N) sum [h(mu_i) + (mu_i - center)/2].
double smooth_part(const Vector& mu, double center);

// Bregman divergence of f: f(x) - f(y) - <grad f(y), x - y>.
double bregman_f(const Vector& x, const Vector& y, double center);

/// Proximal map of t -> weight * |t - center| with penalty rho:
///   argmin_t (rho/2)(t - v)^2 + weight |t - center|,
/// a soft-threshold of width weight/rho shifted to center.
struct ProxShiftedAbs {
  double center;
  double weight;
  double rho;

  ProxShiftedAbs(double center, double weight, double rho);
  double threshold() const { return weight / rho; }
  double operator()(double v) const;
  Vector apply(const Vector& v) const;
};

// prox_{P/rho}(v) with weight 1/(2N) and center lambda * kappa.
Vector prox_P(const Vector& v, const SubproblemInstance& inst, double rho);

// Coordinate clamp to [-radius, radius]. Negative radius throws.
Vector project_linf_ball(const Vector& v, double radius);
void clamp_inplace(Vector& v, double radius);

// Euclidean projection onto the l1 ball via full sort and threshold.
Vector project_l1_ball(const Vector& v, double radius);

}  // namespace drlr
