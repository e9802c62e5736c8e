#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "reebmm/complex.hpp"

namespace reebmm {

/// Finitely supported probability measure on R^k: points with nonnegative masses
/// summing to 1. Zero-mass points are kept.
class EmpiricalMeasure {
public:
    EmpiricalMeasure() = default;
    /// `coords` is row-major (size = dim * n). Weights are normalized to sum 1;
    /// throws std::invalid_argument on negative weights, zero total or size mismatch.
    EmpiricalMeasure(int dim, std::vector<double> coords, std::vector<double> weights);
    static EmpiricalMeasure uniform(int dim, std::vector<double> coords);
    static EmpiricalMeasure dirac(std::span<const double> point);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return masses_.size(); }
    bool empty() const noexcept { return masses_.empty(); }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    double mass(std::size_t i) const { return masses_[i]; }
    std::span<const double> masses() const noexcept { return masses_; }
    std::span<const double> all_coords() const noexcept { return coords_; }

    /// Same measure with zero coordinates appended up to `dim`.
    EmpiricalMeasure padded_to(int dim) const;

private:
    int dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> masses_;
};

enum class KernelFamily { gaussian };

/// Gaussian kernel K(x, y) = exp(-|x - y|^2 / (2 sigma^2)).
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;

    static KernelSpec gaussian(double sigma);
    double operator()(std::span<const double> x, std::span<const double> y) const;
};

/// Continuous piecewise-linear CDF. Knots strictly increase, values are
/// nondecreasing from 0 to 1, and evaluation clamps outside the knot range.
class ContinuousCDF {
public:
    ContinuousCDF() = default;
    /// Throws std::invalid_argument if the invariants do not hold.
    ContinuousCDF(std::vector<double> knots, std::vector<double> values);
    static ContinuousCDF identity_on_unit_interval();

    double operator()(double x) const;
    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Largest slope over consecutive knots; the CDF is flat elsewhere.
    double lipschitz() const;
    /// True iff every segment meeting [lo, hi] has positive slope.
    bool strictly_increasing_on(double lo, double hi) const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// delta_{mu,s}(x) = inf{r > 0 : mu(closed ball(x, r)) > s}, for s in [0, 1).
double quantile_radius(const EmpiricalMeasure& mu, double s, std::span<const double> x);

/// Distance to a measure d_{mu,m}(x) = sqrt((1/m) int_0^m delta_{mu,s}(x)^2 ds), closed form.
double dtm(const EmpiricalMeasure& mu, double m, std::span<const double> x);

/// Kernel distance D_K(mu, nu) = sqrt(k(mu,mu) + k(nu,nu) - 2 k(mu,nu)).
double kernel_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const KernelSpec& kernel);

/// Kernel distance to a measure D_{mu,K}(x) = D_K(mu, delta_x).
double kdist_to_measure(const EmpiricalMeasure& mu, const KernelSpec& kernel, std::span<const double> x);

/// Largest support handled by wasserstein2.
inline constexpr std::size_t kMaxTransportSupport = 64;

/// Exact 2-Wasserstein distance by minimum-cost flow. Throws GuardError when either
/// support exceeds kMaxTransportSupport.
double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// PL surrogate of the CDF of sum_i masses[i] delta_{samples[i]}: a knot at each
/// distinct sample carrying the cumulative mass, preceded by a zero knot one
/// first-gap below the smallest sample.
ContinuousCDF empirical_cdf(std::span<const double> samples, std::span<const double> masses);
/// CDF of a measure on R (dim must be 1).
ContinuousCDF empirical_cdf(const EmpiricalMeasure& mu);

/// sup_x |F(x) - G(x)|, exact.
double ks_distance(const ContinuousCDF& F, const ContinuousCDF& G);

/// 1e-6 times the complex diameter (or 1e-6 for a degenerate complex).
double default_floor(const SimplicialComplex& complex);

/// d_{mu,m} at every vertex, lifted to at least `floor`.
ScalarField dtm_field(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m, double floor);
/// D_{mu,K} at every vertex, lifted to at least `floor`.
ScalarField kdist_field(const SimplicialComplex& complex, const EmpiricalMeasure& mu, const KernelSpec& kernel,
                        double floor);

}  // namespace reebmm
