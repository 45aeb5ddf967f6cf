#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "tfrac/hermite_spec.hpp"
#include "tfrac/params.hpp"

namespace tfrac {

class TruncationError : public std::runtime_error {
  public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Variance scale C_t^2 = E[(X_{H,lambda|t|}(1))^2], t != 0.
// Kind I: Bessel-K closed form; kind II: 2F3 closed form in double-double,
// delegating to the quadrature oracle for lambda|t| > 20 where the two 2F3
// terms cancel past double-double range.
double variance_scale(const ProcessParams& p, double t);

// psi(t) = E[X(t)^2] = |t|^{2H} C_t^2, psi(0) = 0.
double variance(const ProcessParams& p, double t);

// Cov[X(s), X(t)] = (psi(|t|) + psi(|s|) - psi(|t-s|)) / 2.
double cov(const ProcessParams& p, double s, double t);

// Leading-order gamma^J(j) for j >= 1.
// Kind I:  -2 Gamma(a+1) (cosh l - 1) (2l)^{-a-1} e^{-l j} j^a.
// Kind II:  2 a (e^l - 1)(1 - e^{-l}) l^{-1} (2l)^{-a-1} Gamma(a+1) e^{-l j} j^{a-1}.
double noise_autocov_asymptote(const ProcessParams& p, long j);

// Closed-form psi''(t) for kind I, t > 0, via K_{H-1}, K_{H-2}.
double psi_second_derivative(const ProcessParams& p, double t);

// Immutable second-order model with a thread-safe memo of gamma^J(k).
class CovarianceModel {
  public:
    explicit CovarianceModel(const ProcessParams& p);

    const ProcessParams& params() const { return params_; }
    double c1_squared() const { return c1_squared_; }

    // gamma^J(k) = [psi(|k|+1) - 2 psi(|k|) + psi(|k|-1)] / 2, even in k.
    double noise_autocov(long k) const;

    // Smallest K with |gamma(K)/C_1^2|^d < 1e-16 (tail threshold of every
    // infinite sum). Throws TruncationError past 10^6.
    long truncation_lag(unsigned d) const;

    // sigma^2 = sum_q q! a_q^2 sum_k (gamma(k)/C_1^2)^q.
    double bm_limit_variance(const HermiteSpec& f) const;

    // Exact finite-n variance of V_n:
    // sum_q q! a_q^2 C_1^{-2q} sum_{|k|<n} (1-|k|/n) gamma(k)^q.
    double finite_n_variance(const HermiteSpec& f, long n) const;

    // h(omega) = (1/2pi) sum_{|k|<=K} gamma(k) cos(k omega), clamped at 0.
    double spectral_density(double omega) const;
    std::uint64_t spectral_clamp_count() const { return clamp_count_.load(); }

    struct AsymptoticProfile {
        double rho = 0.0;
        double profile = 0.0;
    };
    // Limit of sqrt(n) (P(F_n <= z) - Phi(z)) for the rank-q Hermite
    // variation: rho and rho/(3 sqrt(2 pi)) (z^2-1) e^{-z^2/2}; rho = 0 for
    // odd q, negative for even q (positive skew of the quadratic form).
    AsymptoticProfile exact_asymptotic_profile(unsigned q, double z) const;

  private:
    double compute_autocov(long k) const;

    ProcessParams params_;
    double c1_squared_ = 0.0;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<long, double> gamma_memo_;
    mutable std::atomic<std::uint64_t> clamp_count_{0};
};

}  // namespace tfrac
