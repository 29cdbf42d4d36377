#include "relspace/directional_stats.hpp"

#include "relspace/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace relspace {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Below this argument the power series is used, above it the asymptotic
// expansion; at 30 the smallest asymptotic term is ~exp(-60).
constexpr double kBesselSeriesLimit = 30.0;

double bessel_series_scaled(int order, double x) {
  const double q = 0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum * std::exp(-x);
}

double bessel_asymptotic_scaled(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(kTwoPi * x);
}

double bessel_scaled(int order, double x) {
  x = std::abs(x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  return x <= kBesselSeriesLimit ? bessel_series_scaled(order, x)
                                 : bessel_asymptotic_scaled(order, x);
}

// dA/dkappa for the circle.
double mean_resultant_length_derivative(double kappa, double a) {
  if (kappa < 1e-6) return 0.5 - 3.0 * kappa * kappa / 16.0;
  return 1.0 - a / kappa - a * a;
}

Eigen::LLT<Mat2> cholesky(const Mat2& covariance) {
  Eigen::LLT<Mat2> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "covariance is not positive definite");
  }
  return llt;
}

}  // namespace

double bessel_i0e(double x) { return bessel_scaled(0, x); }
double bessel_i1e(double x) { return std::copysign(bessel_scaled(1, x), x); }

double mean_resultant_length(double kappa) {
  if (kappa <= 0.0) return 0.0;
  if (kappa < 1e-6) return 0.5 * kappa - kappa * kappa * kappa / 16.0;
  return bessel_i1e(kappa) / bessel_i0e(kappa);
}

double solve_concentration(double rbar) {
  if (!(rbar > 0.0)) return 0.0;
  if (rbar >= mean_resultant_length(kKappaMax)) return kKappaMax;

  double lo = 0.0;
  double hi = kKappaMax;
  double kappa = rbar * (2.0 - rbar * rbar) / (1.0 - rbar * rbar);
  kappa = std::clamp(kappa, 1e-300, kKappaMax);

  for (int step = 0; step < 8; ++step) {
    const double a = mean_resultant_length(kappa);
    const double residual = a - rbar;
    if (residual == 0.0) break;
    (residual > 0.0 ? hi : lo) = kappa;
    double next = kappa - residual / mean_resultant_length_derivative(kappa, a);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool converged = std::abs(next - kappa) <= 4.0 * std::numeric_limits<double>::epsilon() * kappa;
    kappa = next;
    if (converged) break;
  }
  return std::min(kappa, kKappaMax);
}

double gaussian_log_pdf(const Gaussian2D& g, const Vec2& x) {
  const auto llt = cholesky(g.covariance);
  const Mat2 l = llt.matrixL();
  const Vec2 z = llt.matrixL().solve(x - g.mean);
  const double log_det = 2.0 * (std::log(l(0, 0)) + std::log(l(1, 1)));
  return -0.5 * z.squaredNorm() - 0.5 * log_det - std::log(kTwoPi);
}

double gaussian_pdf(const Gaussian2D& g, const Vec2& x) { return std::exp(gaussian_log_pdf(g, x)); }

double vonmises_log_pdf(const VonMises& v, double phi) {
  // Scaled Bessel keeps large concentrations finite.
  const double kappa = v.concentration;
  return kappa * (std::cos(phi - v.mean_angle) - 1.0) - std::log(kTwoPi * bessel_i0e(kappa));
}

double vonmises_pdf(const VonMises& v, double phi) { return std::exp(vonmises_log_pdf(v, phi)); }

double log_pdf(const CylindricalDistribution& dist, const CylCoords& c) {
  return gaussian_log_pdf(dist.rh, Vec2(c.r, c.h)) + vonmises_log_pdf(dist.phi, c.phi);
}

double pdf(const CylindricalDistribution& dist, const CylCoords& c) {
  return std::exp(log_pdf(dist, c));
}

double sample_vonmises(const VonMises& v, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double kappa = v.concentration;
  if (kappa < 1e-8) return wrap_angle(-kPi + kTwoPi * uniform(rng));

  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double s = (1.0 + rho * rho) / (2.0 * rho);

  while (true) {
    const double u1 = uniform(rng);
    const double u2 = uniform(rng);
    const double u3 = uniform(rng);
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + s * z) / (s + z);
    const double c = kappa * (s - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return wrap_angle(v.mean_angle + (u3 > 0.5 ? theta : -theta));
    }
  }
}

CylCoords sample(const CylindricalDistribution& dist, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z0 = normal(rng);
  const double z1 = normal(rng);
  const Mat2 l = cholesky(dist.rh.covariance).matrixL();
  const Vec2 rh = dist.rh.mean + l * Vec2(z0, z1);
  CylCoords c;
  c.r = std::max(0.0, rh.x());
  c.h = rh.y();
  c.phi = sample_vonmises(dist.phi, rng);
  return c;
}

Gaussian2D mle_gaussian(std::span<const Vec2> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples,
                "Gaussian MLE needs at least 2 samples, got " + std::to_string(samples.size()));
  }
  const double n = static_cast<double>(samples.size());
  Vec2 mean = Vec2::Zero();
  for (const auto& x : samples) mean += x;
  mean /= n;
  Mat2 scatter = Mat2::Zero();
  for (const auto& x : samples) {
    const Vec2 d = x - mean;
    scatter += d * d.transpose();
  }
  return {mean, scatter / n + kCovarianceRegularization * Mat2::Identity()};
}

VonMises vonmises_from_direction_sum(const Vec2& direction_sum, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::EmptyAccumulator, "no angles accumulated");
  const double length = direction_sum.norm();
  if (length <= 1e-9) {
    throw Error(ErrorKind::DegenerateDirections, "direction vectors cancel out");
  }
  const double rbar = std::min(1.0, length / static_cast<double>(n));
  return {std::atan2(direction_sum.y(), direction_sum.x()), solve_concentration(rbar)};
}

VonMises mle_vonmises(std::span<const double> angles) {
  if (angles.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples,
                "von Mises MLE needs at least 2 angles, got " + std::to_string(angles.size()));
  }
  Vec2 sum = Vec2::Zero();
  for (double phi : angles) sum += Vec2(std::cos(phi), std::sin(phi));
  return vonmises_from_direction_sum(sum, angles.size());
}

GaussianAccumulator accumulate_gaussian(GaussianAccumulator acc, const Vec2& x) {
  acc.n += 1;
  if (acc.n == 1) {
    acc.mean = x;
    acc.compensation.setZero();
    acc.m2.setZero();
    return acc;
  }
  const double n = static_cast<double>(acc.n);
  const Vec2 d = (x - acc.mean) - acc.compensation;
  const Vec2 step = d / n + acc.compensation;
  for (int i = 0; i < 2; ++i) {
    // Knuth two-sum: hi + lo == mean + step exactly.
    const double hi = acc.mean[i] + step[i];
    const double b = hi - acc.mean[i];
    acc.compensation[i] = (acc.mean[i] - (hi - b)) + (step[i] - b);
    acc.mean[i] = hi;
  }
  acc.m2 += ((n - 1.0) / n) * (d * d.transpose());
  return acc;
}

VonMisesAccumulator accumulate_vonmises(VonMisesAccumulator acc, double phi) {
  acc.n += 1;
  acc.direction_sum += Vec2(std::cos(phi), std::sin(phi));
  return acc;
}

Gaussian2D finalize_gaussian(const GaussianAccumulator& g) {
  if (g.n == 0) throw Error(ErrorKind::EmptyAccumulator, "no samples accumulated");
  return {g.mean + g.compensation, g.m2 / static_cast<double>(g.n) + kCovarianceRegularization * Mat2::Identity()};
}

CylindricalDistribution finalize(const GaussianAccumulator& g, const VonMisesAccumulator& v) {
  if (g.n != v.n) {
    throw Error(ErrorKind::InvalidArgument, "accumulator counts differ: " + std::to_string(g.n) +
                                                " vs " + std::to_string(v.n));
  }
  return {finalize_gaussian(g), vonmises_from_direction_sum(v.direction_sum, v.n)};
}

}  // namespace relspace
