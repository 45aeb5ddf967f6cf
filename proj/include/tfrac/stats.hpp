#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfrac/covmodel.hpp"
#include "tfrac/hermite_spec.hpp"
#include "tfrac/sampler.hpp"

namespace tfrac::stats {

class DegenerateVariance : public std::runtime_error {
  public:
    explicit DegenerateVariance(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic summation, independent of chunking order.
double pairwise_sum(std::span<const double> values);

// Standard normal CDF.
double norm_cdf(double z);

// V_n = n^{-1/2} sum_k f(X_k / C_1).
double hermite_variation(const NoisePath& noise, const CovarianceModel& model,
                         const HermiteSpec& f);

// F_n = V_n / sigma_n with the exact finite-n variance from the model.
double normalized_statistic(double v_n, const CovarianceModel& model, const HermiteSpec& f,
                            long n);

// Unbiased k-statistics with delete-one jackknife standard errors.
struct CumulantEstimate {
    long n = 0;
    double k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double se_k2 = 0.0, se_k3 = 0.0, se_k4 = 0.0;
};
CumulantEstimate sample_cumulants(std::span<const double> samples);

// S_beta = sum |X(t_{i+stride}) - X(t_i)|^beta over the path grid; stride > 1
// evaluates the same path on the coarser nested partition.
double p_variation(const SamplePath& path, double beta, long stride = 1);

enum class Target { StdNormal };

// sup-distance between the empirical CDF and Phi.
double ks_distance(std::span<const double> samples, Target target);

// least-squares slope of log(value) on log(n); all values must be positive.
struct RateFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};
RateFit rate_regression(const std::vector<std::pair<double, double>>& points);

// M independent replicates of V_n for f = H_q, one RNG substream per
// replicate; slot-ordered so the result is thread-count invariant.
// F_n = v[r] / sqrt(sigma_n2).
struct McVariations {
    std::vector<double> v;
    double sigma_n2 = 0.0;
};
McVariations replicate_variations(const CovarianceModel& model, unsigned q, long n,
                                  long replicates, std::uint64_t seed, int threads);

struct EdgeworthCell {
    double z = 0.0;
    double estimate = 0.0;   // sqrt(n) (P(F_n <= z) - Phi(z))
    double stderr_ = 0.0;    // binomial MC error, same sqrt(n) units
    double target = 0.0;     // limiting profile
    bool pass = false;       // |estimate - target| <= 3 stderr
};
struct EdgeworthResult {
    long n = 0;
    std::vector<EdgeworthCell> cells;
};

// MC profile of the CDF error against the exact limiting profile, evaluated
// on each n of the grid; the acceptance comparison reads the largest n.
std::vector<EdgeworthResult> edgeworth_check(const CovarianceModel& model, unsigned q,
                                             const std::vector<double>& z_grid,
                                             const std::vector<long>& n_grid, long replicates,
                                             std::uint64_t seed, int threads);

}  // namespace tfrac::stats
