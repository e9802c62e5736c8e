#include "reebmm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "reebmm/error.hpp"
#include "transport.hpp"

namespace reebmm {

EmpiricalMeasure::EmpiricalMeasure(int dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), masses_(std::move(weights)) {
    if (dim < 1) throw std::invalid_argument("measure dimension must be >= 1");
    if (coords_.size() != masses_.size() * static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("measure has mismatched point and weight counts");
    }
    if (masses_.empty()) throw std::invalid_argument("measure has no points");
    double total = 0.0;
    for (double w : masses_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("measure weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("measure has zero total mass");
    for (double c : coords_) {
        if (!std::isfinite(c)) throw std::invalid_argument("measure point has a non-finite coordinate");
    }
    for (double& w : masses_) w /= total;
}

EmpiricalMeasure EmpiricalMeasure::uniform(int dim, std::vector<double> coords) {
    const std::size_t n = dim > 0 ? coords.size() / dim : 0;
    return EmpiricalMeasure(dim, std::move(coords), std::vector<double>(n, 1.0));
}

EmpiricalMeasure EmpiricalMeasure::dirac(std::span<const double> point) {
    return EmpiricalMeasure(static_cast<int>(point.size()), std::vector<double>(point.begin(), point.end()), {1.0});
}

EmpiricalMeasure EmpiricalMeasure::padded_to(int dim) const {
    if (dim < dim_) {
        throw std::invalid_argument("measure has " + std::to_string(dim_) + " coordinates, space has " +
                                    std::to_string(dim));
    }
    if (dim == dim_) return *this;
    std::vector<double> coords;
    coords.reserve(size() * dim);
    for (std::size_t i = 0; i < size(); ++i) {
        auto p = point(i);
        coords.insert(coords.end(), p.begin(), p.end());
        coords.insert(coords.end(), static_cast<std::size_t>(dim - dim_), 0.0);
    }
    EmpiricalMeasure out;
    out.dim_ = dim;
    out.coords_ = std::move(coords);
    out.masses_ = masses_;
    return out;
}

KernelSpec KernelSpec::gaussian(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("kernel bandwidth must be positive");
    return KernelSpec{KernelFamily::gaussian, sigma};
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
    return std::exp(-d2 / (2.0 * bandwidth * bandwidth));
}

ContinuousCDF::ContinuousCDF(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size() || knots_.size() < 2) {
        throw std::invalid_argument("CDF needs at least two knots with one value each");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) throw std::invalid_argument("non-finite CDF knot");
        if (i > 0 && !(knots_[i] > knots_[i - 1])) throw std::invalid_argument("CDF knots must strictly increase");
        if (i > 0 && values_[i] < values_[i - 1]) throw std::invalid_argument("CDF values must not decrease");
    }
    if (std::abs(values_.front()) > 1e-12 || std::abs(values_.back() - 1.0) > 1e-12) {
        throw std::invalid_argument("CDF values must run from 0 to 1");
    }
    values_.front() = 0.0;
    values_.back() = 1.0;
    for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
}

ContinuousCDF ContinuousCDF::identity_on_unit_interval() { return ContinuousCDF({0.0, 1.0}, {0.0, 1.0}); }

double ContinuousCDF::operator()(double x) const {
    if (x <= knots_.front()) return values_.front();
    if (x >= knots_.back()) return values_.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double ContinuousCDF::lipschitz() const {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        best = std::max(best, (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]));
    }
    return best;
}

bool ContinuousCDF::strictly_increasing_on(double lo, double hi) const {
    if (lo < knots_.front() || hi > knots_.back()) return false;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const bool meets = knots_[i + 1] >= lo && knots_[i] <= hi;
        if (meets && !(values_[i + 1] > values_[i])) return false;
    }
    return true;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(d2);
}

namespace {

void require_query(const EmpiricalMeasure& mu, std::span<const double> x) {
    if (mu.empty()) throw std::invalid_argument("measure is empty");
    if (static_cast<int>(x.size()) != mu.dim()) throw std::invalid_argument("query point dimension mismatch");
}

struct RankedMass {
    double distance;
    double mass;
};

// Support points with positive mass, ordered by distance to x (index order on ties).
std::vector<RankedMass> by_distance(const EmpiricalMeasure& mu, std::span<const double> x) {
    std::vector<RankedMass> out;
    out.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.mass(i) > 0.0) out.push_back({euclidean_distance(mu.point(i), x), mu.mass(i)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedMass& a, const RankedMass& b) { return a.distance < b.distance; });
    return out;
}

}  // namespace

double quantile_radius(const EmpiricalMeasure& mu, double s, std::span<const double> x) {
    require_query(mu, x);
    if (s < 0.0) throw std::invalid_argument("mass level must be >= 0");
    double cumulative = 0.0;
    const auto ranked = by_distance(mu, x);
    for (const auto& r : ranked) {
        cumulative += r.mass;
        if (cumulative > s) return r.distance;
    }
    // Rounding can leave the total a hair under 1; levels below 1 still resolve.
    if (s < 1.0) return ranked.back().distance;
    return std::numeric_limits<double>::infinity();
}

double dtm(const EmpiricalMeasure& mu, double m, std::span<const double> x) {
    require_query(mu, x);
    if (!(m > 0.0) || m > 1.0) throw std::invalid_argument("mass parameter m must lie in (0, 1]");
    // delta_{mu,s}(x) equals the j-th smallest distance on s in [C_{j-1}, C_j).
    double integral = 0.0;
    double covered = 0.0;
    double last = 0.0;
    for (const auto& r : by_distance(mu, x)) {
        const double upto = std::min(covered + r.mass, m);
        if (upto > covered) integral += r.distance * r.distance * (upto - covered);
        covered += r.mass;
        last = r.distance;
        if (covered >= m) break;
    }
    if (covered < m) integral += last * last * (m - covered);
    return std::sqrt(integral / m);
}

namespace {

double cross_kernel(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const KernelSpec& kernel) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nu.size(); ++j) row += nu.mass(j) * kernel(mu.point(i), nu.point(j));
        total += mu.mass(i) * row;
    }
    return total;
}

double mean_kernel(const EmpiricalMeasure& mu, const KernelSpec& kernel, std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) total += mu.mass(i) * kernel(mu.point(i), x);
    return total;
}

double clamped_sqrt(double radicand) {
    if (radicand < 0.0) {
        if (radicand < -1e-12) throw std::logic_error("kernel distance radicand is negative");
        return 0.0;
    }
    return std::sqrt(radicand);
}

}  // namespace

double kernel_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const KernelSpec& kernel) {
    if (mu.empty() || nu.empty()) throw std::invalid_argument("measure is empty");
    if (mu.dim() != nu.dim()) throw std::invalid_argument("measures live in different dimensions");
    const double radicand =
        cross_kernel(mu, mu, kernel) + cross_kernel(nu, nu, kernel) - 2.0 * cross_kernel(mu, nu, kernel);
    return clamped_sqrt(radicand);
}

double kdist_to_measure(const EmpiricalMeasure& mu, const KernelSpec& kernel, std::span<const double> x) {
    require_query(mu, x);
    return clamped_sqrt(cross_kernel(mu, mu, kernel) + kernel(x, x) - 2.0 * mean_kernel(mu, kernel, x));
}

double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.empty() || nu.empty()) throw std::invalid_argument("measure is empty");
    if (mu.dim() != nu.dim()) throw std::invalid_argument("measures live in different dimensions");
    if (mu.size() > kMaxTransportSupport || nu.size() > kMaxTransportSupport) {
        throw GuardError("wasserstein2 supports at most " + std::to_string(kMaxTransportSupport) +
                         " support points per measure; subsample the input");
    }
    std::vector<double> cost(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const double d = euclidean_distance(mu.point(i), nu.point(j));
            cost[i * nu.size() + j] = d * d;
        }
    }
    const double total = detail::min_cost_transport(mu.masses(), nu.masses(), cost);
    return std::sqrt(std::max(0.0, total));
}

ContinuousCDF empirical_cdf(std::span<const double> samples, std::span<const double> masses) {
    if (samples.size() != masses.size()) throw std::invalid_argument("samples and masses differ in length");
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });

    double total = 0.0;
    for (double w : masses) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("CDF masses must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("CDF masses sum to zero");

    std::vector<double> knots;
    std::vector<double> values;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double x = samples[order[k]];
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite CDF sample");
        cumulative += masses[order[k]];
        if (!knots.empty() && knots.back() == x) {
            values.back() = cumulative / total;
        } else {
            knots.push_back(x);
            values.push_back(cumulative / total);
        }
    }
    if (knots.size() < 2) throw std::invalid_argument("empirical CDF needs at least two distinct sample values");
    values.back() = 1.0;

    const double lead = knots[0] - (knots[1] - knots[0]);
    knots.insert(knots.begin(), lead);
    values.insert(values.begin(), 0.0);
    return ContinuousCDF(std::move(knots), std::move(values));
}

ContinuousCDF empirical_cdf(const EmpiricalMeasure& mu) {
    if (mu.dim() != 1) throw std::invalid_argument("CDF requires a measure on the real line");
    return empirical_cdf(mu.all_coords(), mu.masses());
}

double ks_distance(const ContinuousCDF& F, const ContinuousCDF& G) {
    // |F - G| is piecewise linear between merged knots, so the sup sits on a knot.
    double best = 0.0;
    for (double x : F.knots()) best = std::max(best, std::abs(F(x) - G(x)));
    for (double x : G.knots()) best = std::max(best, std::abs(F(x) - G(x)));
    return std::min(best, 1.0);
}

double default_floor(const SimplicialComplex& complex) {
    const double d = complex.diameter();
    return d > 0.0 ? 1e-6 * d : 1e-6;
}

ScalarField dtm_field(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m, double floor) {
    const auto padded = mu.padded_to(complex.coord_dim());
    std::vector<double> values(complex.num_vertices());
    for (std::size_t v = 0; v < values.size(); ++v) {
        values[v] = std::max(dtm(padded, m, complex.coords(static_cast<VertexId>(v))), floor);
    }
    return ScalarField(std::move(values));
}

ScalarField kdist_field(const SimplicialComplex& complex, const EmpiricalMeasure& mu, const KernelSpec& kernel,
                        double floor) {
    const auto padded = mu.padded_to(complex.coord_dim());
    const double self = cross_kernel(padded, padded, kernel);
    std::vector<double> values(complex.num_vertices());
    for (std::size_t v = 0; v < values.size(); ++v) {
        auto x = complex.coords(static_cast<VertexId>(v));
        values[v] = std::max(clamped_sqrt(self + kernel(x, x) - 2.0 * mean_kernel(padded, kernel, x)), floor);
    }
    return ScalarField(std::move(values));
}

}  // namespace reebmm
