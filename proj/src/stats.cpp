#include "tfrac/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tfrac/rng.hpp"
#include "tfrac/specfun.hpp"
#include "tfrac/threadpool.hpp"

namespace tfrac::stats {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 32) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

void check_same_params(const ProcessParams& a, const ProcessParams& b) {
    if (a.kind != b.kind || a.hurst != b.hurst || a.lambda != b.lambda)
        throw std::invalid_argument("noise was generated under different process parameters");
}

// f(y) = sum_q a_q H_q(y) in one recurrence pass
double hermite_apply(const HermiteSpec& f, double y) {
    double hm = 1.0, h = y;
    double acc = 0.0;
    unsigned qmax = f.qmax();
    if (qmax >= 1 && f.coeffs[1] != 0.0) acc += f.coeffs[1] * h;
    for (unsigned q = 2; q <= qmax; ++q) {
        double hn = y * h - (q - 1) * hm;
        hm = h;
        h = hn;
        if (f.coeffs[q] != 0.0) acc += f.coeffs[q] * h;
    }
    return acc;
}

}  // namespace

double hermite_variation(const NoisePath& noise, const CovarianceModel& model,
                         const HermiteSpec& f) {
    f.validate();
    check_same_params(noise.params, model.params());
    if (noise.n != static_cast<long>(noise.values.size()))
        throw std::invalid_argument("hermite_variation: noise length mismatch");
    double c1 = std::sqrt(model.c1_squared());
    std::vector<double> terms(noise.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = hermite_apply(f, noise.values[i] / c1);
    return pairwise_sum(terms) / std::sqrt(static_cast<double>(noise.n));
}

double normalized_statistic(double v_n, const CovarianceModel& model, const HermiteSpec& f,
                            long n) {
    double sigma_n2 = model.finite_n_variance(f, n);
    if (sigma_n2 <= 1e-14)
        throw DegenerateVariance("normalized_statistic: finite-n variance below 1e-14");
    return v_n / std::sqrt(sigma_n2);
}

CumulantEstimate sample_cumulants(std::span<const double> samples) {
    const long n = static_cast<long>(samples.size());
    if (n < 30) throw std::invalid_argument("sample_cumulants: need at least 30 samples");
    const double dn = static_cast<double>(n);
    // center once; k2..k4 are translation invariant, and centered power sums
    // keep the jackknife update free of large cancellations
    double mean = pairwise_sum(samples) / dn;
    std::vector<double> x(samples.begin(), samples.end());
    for (double& v : x) v -= mean;
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    for (double v : x) {
        double v2 = v * v;
        p1 += v;
        p2 += v2;
        p3 += v2 * v;
        p4 += v2 * v2;
    }
    auto kstats = [](double m, double q1, double q2, double q3, double q4, double& k2,
                     double& k3, double& k4) {
        // central sums from raw power sums of the (m)-subset
        double mu = q1 / m;
        double s2 = q2 - m * mu * mu;
        double s3 = q3 - 3.0 * mu * q2 + 2.0 * m * mu * mu * mu;
        double s4 = q4 - 4.0 * mu * q3 + 6.0 * mu * mu * q2 - 3.0 * m * mu * mu * mu * mu;
        k2 = s2 / (m - 1.0);
        k3 = m * s3 / ((m - 1.0) * (m - 2.0));
        k4 = (m * (m + 1.0) * s4 - 3.0 * (m - 1.0) * s2 * s2) /
             ((m - 1.0) * (m - 2.0) * (m - 3.0));
    };
    CumulantEstimate est;
    est.n = n;
    kstats(dn, p1, p2, p3, p4, est.k2, est.k3, est.k4);
    if (est.k2 == 0.0)
        throw DegenerateVariance("sample_cumulants: zero variance, k3/k4 undefined");
    // delete-one jackknife
    std::vector<double> j2(n), j3(n), j4(n);
    for (long i = 0; i < n; ++i) {
        double v = x[i];
        double v2 = v * v;
        kstats(dn - 1.0, p1 - v, p2 - v2, p3 - v2 * v, p4 - v2 * v2, j2[i], j3[i], j4[i]);
    }
    auto jack_se = [&](const std::vector<double>& theta) {
        double m = pairwise_sum(theta) / dn;
        double ss = 0.0;
        for (double t : theta) ss += (t - m) * (t - m);
        return std::sqrt((dn - 1.0) / dn * ss);
    };
    est.se_k2 = jack_se(j2);
    est.se_k3 = jack_se(j3);
    est.se_k4 = jack_se(j4);
    return est;
}

double p_variation(const SamplePath& path, double beta, long stride) {
    if (!(beta >= 1.0)) throw std::invalid_argument("p_variation: beta must be >= 1");
    if (stride < 1) throw std::invalid_argument("p_variation: stride must be >= 1");
    const auto& v = path.values;
    if (v.size() < 2) return 0.0;
    std::vector<double> terms;
    terms.reserve(v.size() / stride + 1);
    for (std::size_t i = 0; i + stride < v.size(); i += stride)
        terms.push_back(std::pow(std::fabs(v[i + stride] - v[i]), beta));
    return pairwise_sum(terms);
}

double ks_distance(std::span<const double> samples, Target target) {
    if (target != Target::StdNormal)
        throw std::invalid_argument("ks_distance: unsupported target");
    const std::size_t m = samples.size();
    if (m < 100) throw std::invalid_argument("ks_distance: need at least 100 samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double cdf = norm_cdf(x[i]);
        double hi = static_cast<double>(i + 1) / m - cdf;
        double lo = cdf - static_cast<double>(i) / m;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

RateFit rate_regression(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs, ys;
    for (const auto& [n, value] : points) {
        if (!(value > 0.0))
            throw std::invalid_argument("rate_regression: values must be positive");
        xs.push_back(std::log(n));
        ys.push_back(std::log(value));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4)
        throw std::invalid_argument("rate_regression: need at least 4 distinct n");
    const double m = static_cast<double>(xs.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= m;
    ybar /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    double interc = ybar - fit.slope * xbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (interc + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.stderr_ = xs.size() > 2 ? std::sqrt(ss / (m - 2.0) / sxx) : 0.0;
    return fit;
}

McVariations replicate_variations(const CovarianceModel& model, unsigned q, long n,
                                  long replicates, std::uint64_t seed, int threads) {
    HermiteSpec f = HermiteSpec::single(q);
    NoiseSampler plan(model, n);
    McVariations out;
    out.sigma_n2 = model.finite_n_variance(f, n);
    if (out.sigma_n2 <= 1e-14)
        throw DegenerateVariance("replicate_variations: finite-n variance below 1e-14");
    double c1 = std::sqrt(model.c1_squared());
    double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    out.v.resize(static_cast<std::size_t>(replicates));
    parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        std::vector<double> x = plan.draw(rng::substream_seed(seed, r));
        std::vector<double> terms(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            terms[i] = specfun::hermite_eval(q, x[i] / c1);
        out.v[r] = pairwise_sum(terms) * inv_sqrt_n;
    });
    return out;
}

std::vector<EdgeworthResult> edgeworth_check(const CovarianceModel& model, unsigned q,
                                             const std::vector<double>& z_grid,
                                             const std::vector<long>& n_grid, long replicates,
                                             std::uint64_t seed, int threads) {
    if (q % 2 != 0 || q < 2)
        throw std::invalid_argument("edgeworth_check: q must be even and >= 2");
    std::vector<EdgeworthResult> results;
    const double m = static_cast<double>(replicates);
    for (long n : n_grid) {
        McVariations mc = replicate_variations(model, q, n, replicates, seed, threads);
        std::vector<double> f = std::move(mc.v);
        double inv_sigma = 1.0 / std::sqrt(mc.sigma_n2);
        for (double& val : f) val *= inv_sigma;
        EdgeworthResult res;
        res.n = n;
        double sqn = std::sqrt(static_cast<double>(n));
        for (double z : z_grid) {
            long count = 0;
            for (double v : f)
                if (v <= z) ++count;
            double p = static_cast<double>(count) / m;
            EdgeworthCell cell;
            cell.z = z;
            cell.estimate = sqn * (p - norm_cdf(z));
            cell.stderr_ = sqn * std::sqrt(std::max(p * (1.0 - p), 1.0 / m) / m);
            cell.target = model.exact_asymptotic_profile(q, z).profile;
            cell.pass = std::fabs(cell.estimate - cell.target) <= 3.0 * cell.stderr_;
            res.cells.push_back(cell);
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace tfrac::stats
