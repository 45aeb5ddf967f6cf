#include "tfrac/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "tfrac/fft.hpp"
#include "tfrac/rng.hpp"

namespace tfrac {

namespace {

std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

}  // namespace

NoiseSampler::NoiseSampler(const CovarianceModel& model, long n,
                           std::optional<SampleMethod> force)
    : params_(model.params()), n_(n) {
    if (n < 1) throw std::invalid_argument("NoiseSampler: n must be >= 1");
    if (force == SampleMethod::Cholesky)
        method_ = SampleMethod::Cholesky;
    else
        build_circulant(model);
    if (force == SampleMethod::Circulant && method_ != SampleMethod::Circulant)
        throw CovarianceNotPsd("NoiseSampler: embedding has negative eigenvalues");
    if (method_ == SampleMethod::Cholesky && !build_cholesky(model))
        throw CovarianceNotPsd("NoiseSampler: Cholesky failed at maximal jitter");
}

void NoiseSampler::build_circulant(const CovarianceModel& model) {
    std::size_t M = next_pow2(static_cast<std::size_t>(2 * n_));
    std::size_t L = 2 * M;
    std::vector<std::complex<double>> row(L);
    for (std::size_t k = 0; k <= M; ++k) row[k] = model.noise_autocov(static_cast<long>(k));
    for (std::size_t k = 1; k < M; ++k) row[L - k] = row[k];
    detail::fft_radix2(row, false);
    double dmax = row[0].real(), dmin = row[0].real();
    for (std::size_t k = 1; k < L; ++k) {
        double d = row[k].real();
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    min_eig_ = dmin;
    if (dmin >= -1e-10 * dmax) {
        scale_.resize(L);
        for (std::size_t k = 0; k < L; ++k)
            scale_[k] = std::sqrt(std::max(row[k].real(), 0.0) / static_cast<double>(L));
        method_ = SampleMethod::Circulant;
    } else {
        method_ = SampleMethod::Cholesky;
    }
}

bool NoiseSampler::build_cholesky(const CovarianceModel& model) {
    const long n = n_;
    std::vector<double> gamma(n);
    for (long k = 0; k < n; ++k) gamma[k] = model.noise_autocov(k);
    const double jitters[] = {0.0, 1e-14, 1e-12, 1e-10};
    for (double eps : jitters) {
        std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
        bool ok = true;
        for (long i = 0; i < n && ok; ++i) {
            for (long j = 0; j <= i; ++j) {
                double sum = gamma[i - j] + (i == j ? eps * gamma[0] : 0.0);
                for (long k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
                if (i == j) {
                    if (sum <= 0.0) {
                        ok = false;
                        break;
                    }
                    a[i * n + i] = std::sqrt(sum);
                } else {
                    a[i * n + j] = sum / a[j * n + j];
                }
            }
        }
        if (ok) {
            chol_ = std::move(a);
            return true;
        }
    }
    return false;
}

std::vector<double> NoiseSampler::draw(std::uint64_t seed) const {
    rng::NormalStream stream(seed);
    std::vector<double> out(static_cast<std::size_t>(n_));
    if (method_ == SampleMethod::Circulant) {
        std::size_t L = scale_.size();
        std::vector<double> normals(2 * L);
        stream.fill(normals.data(), 2 * L);
        std::vector<std::complex<double>> v(L);
        for (std::size_t k = 0; k < L; ++k)
            v[k] = std::complex<double>(normals[2 * k], normals[2 * k + 1]) * scale_[k];
        detail::fft_radix2(v, false);
        for (long j = 0; j < n_; ++j) out[j] = v[j].real();
    } else {
        std::vector<double> z(static_cast<std::size_t>(n_));
        stream.fill(z.data(), z.size());
        for (long i = 0; i < n_; ++i) {
            double sum = 0.0;
            for (long k = 0; k <= i; ++k) sum += chol_[i * n_ + k] * z[k];
            out[i] = sum;
        }
    }
    return out;
}

NoisePath sample_noise(const CovarianceModel& model, long n, std::uint64_t seed) {
    NoiseSampler plan(model, n);
    NoisePath path;
    path.params = model.params();
    path.n = n;
    path.seed = seed;
    path.method = plan.method();
    path.values = plan.draw(seed);
    return path;
}

SamplePath sample_path(const CovarianceModel& model, long n, double delta, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_path: n must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("sample_path: delta must be > 0");
    const ProcessParams& p = model.params();
    SamplePath path;
    path.params = p;
    path.n = n;
    path.delta = delta;
    path.seed = seed;
    double scale = std::pow(delta, p.hurst);
    std::vector<double> noise;
    if (delta == 1.0) {
        NoisePath np = sample_noise(model, n, seed);
        path.method = np.method;
        noise = std::move(np.values);
    } else {
        CovarianceModel rescaled(ProcessParams(p.kind, p.hurst, p.lambda * delta));
        NoisePath np = sample_noise(rescaled, n, seed);
        path.method = np.method;
        noise = std::move(np.values);
    }
    path.values.resize(static_cast<std::size_t>(n) + 1);
    path.values[0] = 0.0;
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        acc += scale * noise[i];
        path.values[i + 1] = acc;
    }
    return path;
}

}  // namespace tfrac
