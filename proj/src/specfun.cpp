#include "tfrac/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tfrac::specfun {

using tfrac::detail::Dd;
using tfrac::detail::dd_add;
using tfrac::detail::dd_div;
using tfrac::detail::dd_mul;

SeriesControl::SeriesControl(double rel_tol_, std::size_t max_terms_)
    : rel_tol(rel_tol_), max_terms(max_terms_) {
    if (!(rel_tol > 0.0) || rel_tol > 1e-3)
        throw std::invalid_argument("SeriesControl: rel_tol must be in (0, 1e-3]");
    if (max_terms < 32)
        throw std::invalid_argument("SeriesControl: max_terms must be >= 32");
}

namespace {

// Godfrey's 15-term Lanczos coefficients, g = 607/128.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczos[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

double lanczos_positive(double x) {
    // x > 0
    double sum = kLanczos[0];
    for (int i = 1; i < 15; ++i) sum += kLanczos[i] / (x - 1.0 + i);
    double t = x - 0.5 + kLanczosG;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * sum;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be > 0");
    return lanczos_positive(x);
}

double detail::gamma_lanczos(double x) {
    if (x > 0.0) return lanczos_positive(x);
    if (x == std::floor(x)) throw std::domain_error("gamma: pole at non-positive integer");
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    return M_PI / (std::sin(M_PI * x) * lanczos_positive(1.0 - x));
}

namespace {

// Temme's auxiliary functions:
//   gamma1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)
//   gamma2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
// for |mu| <= 1/2. Near mu = 0 the difference cancels, so switch to the
// Taylor series of 1/Gamma(1+x) there.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    constexpr double c1 = 0.57721566490153286061;   // gammaE
    constexpr double c3 = -0.04200263503409523553;  // x^3 coeff of 1/Gamma(1+x)
    constexpr double c5 = -0.00962197152787697356;
    constexpr double c2 = -0.65587807152025388108;
    constexpr double c4 = 0.16653861138229148950;
    if (std::fabs(mu) < 1e-3) {
        double m2 = mu * mu;
        gam1 = -(c1 + m2 * (c3 + m2 * c5));
        gam2 = 1.0 + m2 * (c2 + m2 * c4);
    } else {
        double rp = 1.0 / lanczos_positive(1.0 + mu);
        double rm = 1.0 / lanczos_positive(1.0 - mu);
        gam1 = (rm - rp) / (2.0 * mu);
        gam2 = (rm + rp) / 2.0;
    }
    gampl = gam2 - mu * gam1;  // 1/Gamma(1+mu)
    gammi = gam2 + mu * gam1;  // 1/Gamma(1-mu)
}

constexpr int kBesselMaxIter = 30000;
constexpr double kBesselEps = 1e-17;

// K_mu(x), K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2 (Temme 1975 series).
void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
    double x2 = 0.5 * x;
    double pimu = M_PI * mu;
    double fact = (std::fabs(pimu) < 1e-15) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    double fact2 = (std::fabs(e) < 1e-15) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    double d2 = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kBesselMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d2 / i;
        p /= (i - mu);
        q /= (i + mu);
        double del = c * ff;
        sum += del;
        double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * kBesselEps) break;
    }
    if (i > kBesselMaxIter) throw NonConvergence("bessel_k: Temme series stalled");
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// exp(x)*K_mu(x), exp(x)*K_{mu+1}(x) for |mu| <= 1/2, x > 2 (CF2, Steed).
void bessel_k_cf2(double mu, double x, double& ekmu, double& ekmu1) {
    double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kBesselMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kBesselEps) break;
    }
    if (i > kBesselMaxIter) throw NonConvergence("bessel_k: continued fraction stalled");
    h = a1 * h;
    ekmu = std::sqrt(M_PI / (2.0 * x)) / s;
    ekmu1 = ekmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
    if (x > 740.0)
        throw std::overflow_error("bessel_k: exp scaling range exceeded (x > 740)");
    nu = std::fabs(nu);  // K_{-nu} = K_nu
    int nl = static_cast<int>(nu + 0.5);
    double mu = nu - nl;  // in [-1/2, 1/2]
    double kmu, kmu1;
    if (x <= 2.0) {
        bessel_k_temme(mu, x, kmu, kmu1);
    } else {
        bessel_k_cf2(mu, x, kmu, kmu1);
        double ex = std::exp(-x);
        kmu *= ex;
        kmu1 *= ex;
    }
    for (int j = 1; j <= nl; ++j) {
        double knext = 2.0 * (mu + j) / x * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;  // K_{mu+nl} = K_nu
}

namespace {

bool is_nonpositive_integer(double b) {
    return b <= 0.0 && b == std::floor(b);
}

}  // namespace

Dd detail::hyp2f3_dd(double a1, double a2, double b1, double b2, double b3, double z,
                     bool drop_unit_term, double* peak, const SeriesControl& ctrl) {
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2) || is_nonpositive_integer(b3))
        throw std::domain_error("hyp2f3: lower parameter is a non-positive integer");
    Dd sum{drop_unit_term ? 0.0 : 1.0};
    Dd term{1.0};
    double maxterm = 1.0;
    // Terms grow until k ~ sqrt(z) before decaying; never stop on the rising flank.
    double kmin = 2.0 * std::sqrt(std::max(0.0, z)) + 8.0;
    for (std::size_t k = 0; k < ctrl.max_terms; ++k) {
        double dk = static_cast<double>(k);
        Dd ratio = dd_div(dd_mul(Dd{a1 + dk}, Dd{a2 + dk}),
                          dd_mul(dd_mul(Dd{b1 + dk}, Dd{b2 + dk}), Dd{b3 + dk}));
        term = dd_mul(term, ratio);
        term = dd_mul(term, Dd{z});
        term = dd_div(term, Dd{dk + 1.0});
        sum = dd_add(sum, term);
        double at = std::fabs(term.hi);
        maxterm = std::max(maxterm, at);
        if (dk > kmin && at <= ctrl.rel_tol * 1e-16 * maxterm) {
            if (peak) *peak = maxterm;
            return sum;
        }
    }
    throw NonConvergence("hyp2f3: max_terms reached before the term criterion");
}

double hyp2f3(double a1, double a2, double b1, double b2, double b3, double z,
              const SeriesControl& ctrl) {
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2) || is_nonpositive_integer(b3))
        throw std::domain_error("hyp2f3: lower parameter is a non-positive integer");
    double sum = 1.0, comp = 0.0;
    double term = 1.0;
    double maxterm = 1.0;
    double kmin = 2.0 * std::sqrt(std::max(0.0, z)) + 8.0;
    for (std::size_t k = 0; k < ctrl.max_terms; ++k) {
        double dk = static_cast<double>(k);
        term *= (a1 + dk) * (a2 + dk) / ((b1 + dk) * (b2 + dk) * (b3 + dk)) * z / (dk + 1.0);
        // Kahan update
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        double at = std::fabs(term);
        maxterm = std::max(maxterm, at);
        if (dk > kmin && at <= ctrl.rel_tol * std::max(std::fabs(sum), maxterm * 1e-12))
            return sum;
    }
    throw NonConvergence("hyp2f3: max_terms reached before the term criterion");
}

double hermite_eval(unsigned q, double x) {
    if (q == 0) return 1.0;
    double hm = 1.0, h = x;
    for (unsigned j = 1; j < q; ++j) {
        double hn = x * h - j * hm;
        hm = h;
        h = hn;
    }
    return h;
}

double abs_gaussian_moment(double p) {
    if (!(p > 0.0)) throw std::domain_error("abs_gaussian_moment: p must be > 0");
    return std::pow(2.0, 0.5 * p) * gamma_fn(0.5 * (p + 1.0)) / std::sqrt(M_PI);
}

}  // namespace tfrac::specfun
