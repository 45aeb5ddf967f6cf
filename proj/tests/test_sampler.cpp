#include <doctest.h>

#include <cmath>

#include "tfrac/rng.hpp"
#include "tfrac/sampler.hpp"
#include "tfrac/specfun.hpp"

using namespace tfrac;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("seed determinism") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    NoisePath a = sample_noise(m, 512, 0xC0FFEE);
    NoisePath b = sample_noise(m, 512, 0xC0FFEE);
    CHECK(a.values == b.values);
    CHECK(a.method == SampleMethod::Circulant);
    NoisePath c = sample_noise(m, 512, 0xC0FFEF);
    CHECK(a.values != c.values);
}

TEST_CASE("pooled sample mean is centered") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    NoiseSampler plan(m, 1 << 14);
    double pool_sum = 0.0;
    double pool_sq = 0.0;
    long count = 0;
    for (int r = 0; r < 64; ++r) {
        auto x = plan.draw(rng::substream_seed(11, r));
        for (double v : x) {
            pool_sum += v;
            pool_sq += v * v;
            ++count;
        }
    }
    double mean = pool_sum / count;
    double sd = std::sqrt(pool_sq / count);
    // dependent within a path; 4 iid-sd is still ~3 effective sd here
    CHECK(std::fabs(mean) <= 4.0 * sd / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("lag-1 autocovariance over replicates") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    const long n = 1 << 14;
    NoiseSampler plan(m, n);
    const int reps = 200;
    std::vector<double> lag1(reps);
    for (int r = 0; r < reps; ++r) {
        auto x = plan.draw(rng::substream_seed(5150, r));
        double s = 0.0;
        for (long i = 0; i + 1 < n; ++i) s += x[i] * x[i + 1];
        lag1[r] = s / static_cast<double>(n - 1);
    }
    double mean = mean_of(lag1);
    double ss = 0.0;
    for (double v : lag1) ss += (v - mean) * (v - mean);
    double se = std::sqrt(ss / (reps - 1.0) / reps);
    CHECK(std::fabs(mean - m.noise_autocov(1)) <= 3.0 * se);
}

TEST_CASE("path start and scaling") {
    CovarianceModel m(ProcessParams(Kind::I, 0.7, 1.0));
    SamplePath p = sample_path(m, 1, 0.5, 99);
    CHECK(p.values.size() == 2);
    CHECK(p.values[0] == 0.0);
    CHECK(p.time_at(1) == 0.5);
    SamplePath q = sample_path(m, 256, 0.25, 123);
    CHECK(q.values[0] == 0.0);
    CHECK(q.values.size() == 257);
}

TEST_CASE("terminal path variance approaches the kind-I plateau") {
    // nDelta = 20, H = 0.5, lambda = 1: Var X(20) ~ 2 Gamma(2H)/(2 lambda)^{2H} = 1
    ProcessParams params(Kind::I, 0.5, 1.0);
    CovarianceModel m(params);
    const int reps = 500;
    const long n = 512;
    const double delta = 20.0 / n;
    CovarianceModel fine(ProcessParams(Kind::I, 0.5, delta));
    NoiseSampler plan(fine, n);
    double scale = std::pow(delta, 0.5);
    std::vector<double> ends(reps);
    for (int r = 0; r < reps; ++r) {
        auto noise = plan.draw(rng::substream_seed(31, r));
        double acc = 0.0;
        for (double v : noise) acc += v;
        ends[r] = scale * acc;
    }
    double m2 = 0.0;
    for (double v : ends) m2 += v * v;
    m2 /= reps;
    double se = m2 * std::sqrt(2.0 / reps);
    CHECK(std::fabs(m2 - 1.0) <= 3.0 * se);
}

TEST_CASE("terminal path variance growth for kind II") {
    // Var X(t)/t -> lambda^{1-2H} Gamma(H+1/2)^2 at t = nDelta = 50
    ProcessParams params(Kind::II, 0.7, 1.0);
    const int reps = 500;
    const long n = 512;
    const double delta = 50.0 / n;
    CovarianceModel fine(ProcessParams(Kind::II, 0.7, delta));
    NoiseSampler plan(fine, n);
    double scale = std::pow(delta, 0.7);
    std::vector<double> ends(reps);
    for (int r = 0; r < reps; ++r) {
        auto noise = plan.draw(rng::substream_seed(77, r));
        double acc = 0.0;
        for (double v : noise) acc += v;
        ends[r] = scale * acc;
    }
    double m2 = 0.0;
    for (double v : ends) m2 += v * v;
    m2 /= reps;
    double target = 50.0 * std::pow(specfun::gamma_fn(1.2), 2);
    double se = m2 * std::sqrt(2.0 / reps);
    CHECK(std::fabs(m2 - target) <= 3.0 * se);
}

TEST_CASE("pooled marginal passes a KS test against N(0, gamma(0))") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    const long n = 1 << 12;
    NoiseSampler plan(m, n);
    double sd = std::sqrt(m.c1_squared());
    std::vector<double> pool;
    for (int r = 0; r < 100; ++r) {
        auto x = plan.draw(rng::substream_seed(8080, r));
        for (long i = 0; i < n; i += 16) pool.push_back(x[i] / sd);  // decorrelating stride
    }
    std::sort(pool.begin(), pool.end());
    double d = 0.0;
    const double mm = static_cast<double>(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double cdf = 0.5 * std::erfc(-pool[i] / std::sqrt(2.0));
        d = std::max(d, std::fabs((i + 1) / mm - cdf));
        d = std::max(d, std::fabs(cdf - i / mm));
    }
    // Kolmogorov critical value at level 1e-3
    CHECK(d <= 1.9494746035043753 / std::sqrt(mm));
}

TEST_CASE("circulant embedding is nonnegative definite on the guaranteed half") {
    for (double H : {0.3, 0.5}) {
        CovarianceModel m(ProcessParams(Kind::I, H, 1.0));
        NoiseSampler plan(m, 1 << 12);
        CHECK(plan.method() == SampleMethod::Circulant);
    }
    for (double H : {0.5001, 0.7, 1.2}) {
        CovarianceModel m(ProcessParams(Kind::II, H, 1.0));
        NoiseSampler plan(m, 1 << 12);
        CHECK(plan.method() == SampleMethod::Circulant);
    }
    // the large-length claim, one point per kind
    CovarianceModel mi(ProcessParams(Kind::I, 0.3, 1.0));
    NoiseSampler pi(mi, 1 << 16);
    CHECK(pi.method() == SampleMethod::Circulant);
    CovarianceModel mii(ProcessParams(Kind::II, 0.7, 1.0));
    NoiseSampler pii(mii, 1 << 16);
    CHECK(pii.method() == SampleMethod::Circulant);
}

TEST_CASE("cholesky route reproduces the covariance") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    NoiseSampler plan(m, 256, SampleMethod::Cholesky);
    CHECK(plan.method() == SampleMethod::Cholesky);
    auto a = plan.draw(4242);
    auto b = plan.draw(4242);
    CHECK(a == b);
    const int reps = 800;
    double var = 0.0, lag1 = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto x = plan.draw(rng::substream_seed(2, r));
        for (double v : x) var += v * v;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) lag1 += x[i] * x[i + 1];
    }
    var /= reps * 256.0;
    lag1 /= reps * 255.0;
    CHECK(std::fabs(var - m.c1_squared()) < 0.01);
    CHECK(std::fabs(lag1 - m.noise_autocov(1)) < 0.01);
}

TEST_CASE("normal stream moments") {
    rng::NormalStream s(987654321);
    const long n = 1 << 20;
    std::vector<double> z(n);
    s.fill(z.data(), n);
    double m1 = 0, m2 = 0, m4 = 0;
    for (double v : z) {
        m1 += v;
        m2 += v * v;
        m4 += v * v * v * v;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    CHECK(std::fabs(m1) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(m4 / (m2 * m2) - 3.0) < 4.0 * std::sqrt(96.0 / n));
    // random-access agrees with sequential fill
    CHECK(s.at(0) == z[0]);
    CHECK(s.at(12345) == z[12345]);
    CHECK(s.at(n - 1) == z[n - 1]);
}

TEST_CASE("substream seeds are distinct and stable") {
    CHECK(rng::substream_seed(1, 0) != rng::substream_seed(1, 1));
    CHECK(rng::substream_seed(1, 0) != rng::substream_seed(2, 0));
    CHECK(rng::substream_seed(42, 17) == rng::substream_seed(42, 17));
}

TEST_CASE("sampler argument validation") {
    CovarianceModel m(ProcessParams(Kind::I, 0.5, 1.0));
    CHECK_THROWS_AS(sample_noise(m, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(m, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(m, 16, 0.0, 1), std::invalid_argument);
}
