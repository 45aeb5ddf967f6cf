#include "tfrac/covmodel.hpp"

#include <cmath>
#include <mutex>

#include "tfrac/dd.hpp"
#include "tfrac/oracle.hpp"
#include "tfrac/specfun.hpp"

namespace tfrac {

using detail::Dd;
using detail::dd_add;
using detail::dd_mul;
using detail::dd_sub;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Kind-II closed form needs lambda|t| <= this; past it the two series terms
// cancel beyond double-double range and the quadrature route takes over.
constexpr double kKindIIClosedLimit = 20.0;

// psi(t) for kind I written with the constant split off:
//   psi(t) = 2 Gamma(2H)/(2 lambda)^{2H} - bessel_part(t),
//   bessel_part(t) = 2 Gamma(H+1/2)/(sqrt(pi) 2^H lambda^{2H}) (lambda t)^H K_H(lambda t).
double kind1_limit_constant(const ProcessParams& p) {
    return 2.0 * specfun::gamma_fn(2.0 * p.hurst) / std::pow(2.0 * p.lambda, 2.0 * p.hurst);
}

double kind1_bessel_part(const ProcessParams& p, double t) {
    double z = p.lambda * t;
    if (z == 0.0) return kind1_limit_constant(p);  // (z^H K_H)(0+) via duplication
    if (z > 700.0) return 0.0;  // K_H(z) below double underflow after scaling
    double pref = 2.0 * specfun::gamma_fn(p.hurst + 0.5) /
                  (kSqrtPi * std::pow(2.0, p.hurst) * std::pow(p.lambda, 2.0 * p.hurst));
    return pref * std::pow(z, p.hurst) * specfun::bessel_k(p.hurst, z);
}

struct KindIIResult {
    Dd psi;
    double cancellation;  // largest intermediate magnitude over |psi|
};

KindIIResult kind2_psi_dd(const ProcessParams& p, double t) {
    double H = p.hurst;
    double z = 0.25 * p.lambda * p.lambda * t * t;
    double peak1 = 1.0, peak2 = 1.0;
    // one_minus_f1 = 1 - 2F3({1,-1/2},{1-H,1/2,1}; z), summed without the unit term
    Dd f1m = specfun::detail::hyp2f3_dd(1.0, -0.5, 1.0 - H, 0.5, 1.0, z, true, &peak1);
    Dd one_minus_f1{-f1m.hi, -f1m.lo};
    Dd f2 = specfun::detail::hyp2f3_dd(1.0, H - 0.5, 1.0, H + 1.0, H + 0.5, z, false, &peak2);
    double gamma_h_half = specfun::gamma_fn(H + 0.5);
    double pref1 = (1.0 - 2.0 * H) * gamma_h_half * specfun::gamma_fn(H) / kSqrtPi;
    double pref2 = specfun::detail::gamma_lanczos(1.0 - H) * gamma_h_half /
                   (kSqrtPi * H * std::pow(2.0, 2.0 * H));
    // psi = lambda^{-2H} pref1 (1-F1) + t^{2H} pref2 F2
    Dd term1 = dd_mul(one_minus_f1, pref1 * std::pow(p.lambda, -2.0 * H));
    Dd term2 = dd_mul(f2, pref2 * std::pow(t, 2.0 * H));
    Dd psi = dd_add(term1, term2);
    double big = std::max(std::fabs(peak1 * pref1 * std::pow(p.lambda, -2.0 * H)),
                          std::fabs(peak2 * pref2 * std::pow(t, 2.0 * H)));
    double denom = std::max(std::fabs(psi.value()), 1e-300);
    return {psi, big / denom};
}

Dd kind2_psi(const ProcessParams& p, double t, double closed_window) {
    if (t == 0.0) return Dd{0.0};
    if (p.lambda * t <= closed_window) {
        KindIIResult r = kind2_psi_dd(p, t);
        if (r.cancellation < 1e20) return r.psi;
        // cancellation guard tripped: double-double has ~32 digits
    }
    return Dd{oracle::cov_quadrature(p, t, t).value};
}

// The second difference of psi cancels to e^{-lambda k} while the series
// pieces carry t-dependent double factors (t^{2H} and the z powers) whose
// rounding leaves an absolute residue ~ e^{lambda t} * 1e-16. Keep the
// difference on the series route only while that residue is negligible.
constexpr double kKindIIDiffWindow = 16.0;

}  // namespace

double variance(const ProcessParams& p, double t) {
    t = std::fabs(t);
    if (t == 0.0) return 0.0;
    if (p.kind == Kind::I) return kind1_limit_constant(p) - kind1_bessel_part(p, t);
    return kind2_psi(p, t, kKindIIClosedLimit).value();
}

double variance_scale(const ProcessParams& p, double t) {
    if (t == 0.0) throw std::domain_error("variance_scale: t must be nonzero");
    t = std::fabs(t);
    return variance(p, t) / std::pow(t, 2.0 * p.hurst);
}

double cov(const ProcessParams& p, double s, double t) {
    return 0.5 * (variance(p, t) + variance(p, s) - variance(p, t - s));
}

double noise_autocov_asymptote(const ProcessParams& p, long j) {
    if (j < 1) throw std::invalid_argument("noise_autocov_asymptote: j must be >= 1");
    double a = p.alpha();
    double l = p.lambda;
    double jd = static_cast<double>(j);
    double decay = std::exp(-l * jd);
    if (p.kind == Kind::I) {
        return -2.0 * specfun::gamma_fn(a + 1.0) * (std::cosh(l) - 1.0) /
               std::pow(2.0 * l, a + 1.0) * decay * std::pow(jd, a);
    }
    return 2.0 * a * (std::exp(l) - 1.0) * (1.0 - std::exp(-l)) / l *
           std::pow(2.0 * l, -a - 1.0) * specfun::gamma_fn(a + 1.0) * decay *
           std::pow(jd, a - 1.0);
}

double psi_second_derivative(const ProcessParams& p, double t) {
    if (p.kind != Kind::I)
        throw std::invalid_argument("psi_second_derivative: closed form covers kind I only");
    if (!(t > 0.0)) throw std::domain_error("psi_second_derivative: t must be > 0");
    double H = p.hurst;
    double z = p.lambda * t;
    double pref = 2.0 * specfun::gamma_fn(H + 0.5) /
                  (kSqrtPi * std::pow(2.0, H) * std::pow(p.lambda, 2.0 * H - 2.0));
    return pref * std::pow(z, H - 1.0) *
           (specfun::bessel_k(H - 1.0, z) - z * specfun::bessel_k(H - 2.0, z));
}

CovarianceModel::CovarianceModel(const ProcessParams& p) : params_(p) {
    c1_squared_ = variance(params_, 1.0);
    if (!(c1_squared_ > 0.0))
        throw std::runtime_error("CovarianceModel: C_1^2 must be positive");
}

double CovarianceModel::compute_autocov(long k) const {
    if (k == 0) return c1_squared_;
    double l = params_.lambda;
    double kd = static_cast<double>(k);
    if (params_.kind == Kind::I) {
        if (l * (kd - 1.0) > 650.0) return 0.0;
        // with the limit constant cancelled analytically, only the Bessel
        // parts enter the second difference
        double sm = kind1_bessel_part(params_, kd - 1.0);
        double s0 = kind1_bessel_part(params_, kd);
        double sp = kind1_bessel_part(params_, kd + 1.0);
        return -0.5 * (sp - 2.0 * s0 + sm);
    }
    // kind II, three regimes by what stays accurate in absolute terms:
    // series differences while e^{lambda t} rounding residue is negligible,
    // the exponentially small leading-order tail, and direct kernel
    // quadrature (absolute 1e-12) in the band between them.
    if (l * (kd + 1.0) <= kKindIIDiffWindow) {
        Dd sm = kind2_psi(params_, kd - 1.0, kKindIIDiffWindow);
        Dd s0 = kind2_psi(params_, kd, kKindIIDiffWindow);
        Dd sp = kind2_psi(params_, kd + 1.0, kKindIIDiffWindow);
        Dd diff = dd_add(dd_sub(sp, dd_mul(s0, 2.0)), sm);
        return 0.5 * diff.value();
    }
    if (k >= 2 && l * (kd - 1.0) > kKindIIClosedLimit) {
        double a = noise_autocov_asymptote(params_, k);
        return std::isfinite(a) ? a : 0.0;
    }
    return oracle::noise_autocov_quadrature(params_, k).value;
}

double CovarianceModel::noise_autocov(long k) const {
    k = std::labs(k);
    {
        std::shared_lock lock(mutex_);
        auto it = gamma_memo_.find(k);
        if (it != gamma_memo_.end()) return it->second;
    }
    double value = compute_autocov(k);
    {
        std::unique_lock lock(mutex_);
        gamma_memo_.emplace(k, value);
    }
    return value;
}

long CovarianceModel::truncation_lag(unsigned d) const {
    if (d < 1) throw std::invalid_argument("truncation_lag: d must be >= 1");
    double threshold = std::pow(1e-16, 1.0 / static_cast<double>(d));
    for (long k = 1; k <= 1000000; ++k) {
        if (std::fabs(noise_autocov(k)) / c1_squared_ < threshold) return k;
    }
    throw TruncationError("truncation_lag: no lag below threshold within 10^6");
}

double CovarianceModel::bm_limit_variance(const HermiteSpec& f) const {
    f.validate();
    long K = truncation_lag(f.rank);
    double total = 0.0;
    for (unsigned q = f.rank; q <= f.qmax(); ++q) {
        double aq = f.coeffs[q];
        if (aq == 0.0) continue;
        double sum = 1.0;  // k = 0 term of (gamma(k)/C1^2)^q
        for (long k = 1; k <= K; ++k)
            sum += 2.0 * std::pow(noise_autocov(k) / c1_squared_, static_cast<double>(q));
        total += std::tgamma(q + 1.0) * aq * aq * sum;
    }
    return std::max(total, 0.0);
}

double CovarianceModel::finite_n_variance(const HermiteSpec& f, long n) const {
    f.validate();
    if (n < 1) throw std::invalid_argument("finite_n_variance: n must be >= 1");
    long K = std::min(n - 1, truncation_lag(f.rank));
    double total = 0.0;
    for (unsigned q = f.rank; q <= f.qmax(); ++q) {
        double aq = f.coeffs[q];
        if (aq == 0.0) continue;
        double sum = 1.0;
        for (long k = 1; k <= K; ++k) {
            double w = 1.0 - static_cast<double>(k) / static_cast<double>(n);
            sum += 2.0 * w * std::pow(noise_autocov(k) / c1_squared_, static_cast<double>(q));
        }
        total += std::tgamma(q + 1.0) * aq * aq * sum;
    }
    return total;
}

double CovarianceModel::spectral_density(double omega) const {
    if (std::fabs(omega) > M_PI + 1e-12)
        throw std::domain_error("spectral_density: |omega| must be <= pi");
    long K = truncation_lag(1);
    double sum = c1_squared_;
    for (long k = 1; k <= K; ++k)
        sum += 2.0 * noise_autocov(k) * std::cos(static_cast<double>(k) * omega);
    double h = sum / (2.0 * M_PI);
    if (h < 0.0) {
        clamp_count_.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return h;
}

CovarianceModel::AsymptoticProfile CovarianceModel::exact_asymptotic_profile(unsigned q,
                                                                             double z) const {
    if (q < 2) throw std::invalid_argument("exact_asymptotic_profile: q must be >= 2");
    AsymptoticProfile out;
    if (q % 2 == 1) return out;  // odd cumulants vanish: rho = 0
    double sigma2 = bm_limit_variance(HermiteSpec::single(q));
    if (!(sigma2 > 1e-14))
        throw std::runtime_error("exact_asymptotic_profile: degenerate limit variance");
    unsigned half = q / 2;
    long K = truncation_lag(half);
    // triple-product sum over (gamma/C1^2)^{q/2}
    std::vector<double> rpow(2 * K + 1);
    for (long k = -K; k <= K; ++k)
        rpow[k + K] = std::pow(noise_autocov(k) / c1_squared_, static_cast<double>(half));
    auto rp = [&](long k) -> double {
        return (k < -K || k > K) ? 0.0 : rpow[k + K];
    };
    double sum = 0.0;
    for (long k = -K; k <= K; ++k)
        for (long l = -K; l <= K; ++l) sum += rp(k) * rp(l) * rp(l - k);
    double comb = 1.0;
    {
        // binom(q-1, q/2-1)
        double num = std::tgamma(q);  // (q-1)!
        double den = std::tgamma(half) * std::tgamma(q - half + 1.0);
        comb = num / den;
    }
    double coef = q * std::tgamma(q + 1.0) * std::tgamma(half + 1.0) * comb * comb /
                  std::pow(sigma2, 1.5);
    // The CDF correction has the sign opposite to the third cumulant; with a
    // positive triple-product sum that makes rho negative.
    out.rho = -coef * sum;
    out.profile = out.rho / (3.0 * std::sqrt(2.0 * M_PI)) * (z * z - 1.0) *
                  std::exp(-0.5 * z * z);
    return out;
}

}  // namespace tfrac
