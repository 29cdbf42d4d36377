#pragma once

#include "relspace/geometry.hpp"
#include "relspace/random.hpp"

#include <cstddef>
#include <span>

namespace relspace {

inline constexpr double kKappaMax = 1e4;
inline constexpr double kCovarianceRegularization = 1e-12;

struct Gaussian2D {
  Vec2 mean = Vec2::Zero();
  Mat2 covariance = Mat2::Identity();
};

struct VonMises {
  double mean_angle = 0.0;
  double concentration = 0.0;
};

/// Gaussian over (r, h) times von Mises over phi.
struct CylindricalDistribution {
  Gaussian2D rh;
  VonMises phi;
};

/// Running mean and scatter matrix (sum of centered outer products).
struct GaussianAccumulator {
  std::size_t n = 0;
  Vec2 mean = Vec2::Zero();
  /// Low-order part of the running mean (two-sum residue); the mean is mean + compensation.
  Vec2 compensation = Vec2::Zero();
  Mat2 m2 = Mat2::Zero();
};

/// Running sum of unit direction vectors.
struct VonMisesAccumulator {
  std::size_t n = 0;
  Vec2 direction_sum = Vec2::Zero();
};

// Modified Bessel functions of the first kind, scaled by exp(-x) (x >= 0).
double bessel_i0e(double x);
double bessel_i1e(double x);

/// Mean resultant length of a von Mises(kappa) on the circle, I1(kappa)/I0(kappa).
double mean_resultant_length(double kappa);

/// Solves A2(kappa) = rbar for kappa, capped at kKappaMax.
double solve_concentration(double rbar);

double gaussian_pdf(const Gaussian2D& g, const Vec2& x);
double gaussian_log_pdf(const Gaussian2D& g, const Vec2& x);
double vonmises_pdf(const VonMises& v, double phi);
double vonmises_log_pdf(const VonMises& v, double phi);

double pdf(const CylindricalDistribution& dist, const CylCoords& c);
double log_pdf(const CylindricalDistribution& dist, const CylCoords& c);

/// Best-Fisher rejection sampler.
double sample_vonmises(const VonMises& v, Rng& rng);
CylCoords sample(const CylindricalDistribution& dist, Rng& rng);

Gaussian2D mle_gaussian(std::span<const Vec2> samples);
VonMises mle_vonmises(std::span<const double> angles);

/// Estimate from a direction sum over n angles; shared by the batch and
/// incremental paths.
VonMises vonmises_from_direction_sum(const Vec2& direction_sum, std::size_t n);

GaussianAccumulator accumulate_gaussian(GaussianAccumulator acc, const Vec2& x);
VonMisesAccumulator accumulate_vonmises(VonMisesAccumulator acc, double phi);

Gaussian2D finalize_gaussian(const GaussianAccumulator& g);
CylindricalDistribution finalize(const GaussianAccumulator& g, const VonMisesAccumulator& v);

}  // namespace relspace
