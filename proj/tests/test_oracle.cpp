#include <doctest.h>

#include <cmath>

#include "tfrac/covmodel.hpp"
#include "tfrac/oracle.hpp"
#include "tfrac/specfun.hpp"

using namespace tfrac;
using oracle::QuadratureControl;

TEST_CASE("kernel pointwise values") {
    ProcessParams p(Kind::I, 0.5, 1.0);
    CHECK(oracle::kernel(p, 1.0, 2.0) == 0.0);   // x beyond t
    CHECK(oracle::kernel(p, 0.0, -0.7) == 0.0);  // g_{., 0} vanishes
    // H = 1/2, x in (0, t): e^{-lambda(1-x)} (1-x)^0, with 0^0 = 0 elsewhere
    for (double lam : {0.5, 1.0, 2.0}) {
        ProcessParams ph(Kind::I, 0.5, lam);
        CHECK(oracle::kernel(ph, 1.0, 0.5) == doctest::Approx(std::exp(-0.5 * lam)).epsilon(1e-14));
        CHECK(oracle::kernel(ph, 1.0, 0.0) == doctest::Approx(std::exp(-lam)).epsilon(1e-14));
    }
    // kind II at H = 1/2 is the Brownian indicator kernel
    ProcessParams pb(Kind::II, 0.5, 1.0);
    CHECK(oracle::kernel(pb, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(oracle::kernel(pb, 1.0, -0.8)) < 1e-12);
}

TEST_CASE("cov_quadrature matches the closed H=1/2 covariance") {
    ProcessParams p(Kind::I, 0.5, 1.0);
    CHECK(oracle::cov_quadrature(p, 0.0, 0.0).value == 0.0);
    auto r = oracle::cov_quadrature(p, 1.0, 2.0);
    CHECK(std::fabs(r.value - 0.43233235838169365) < 1e-8);
    CHECK(r.error < 1e-8);
    // symmetry to quadrature tolerance
    for (auto [s, t] : {std::pair{0.5, 2.0}, {0.25, 5.0}}) {
        auto a = oracle::cov_quadrature(p, s, t);
        auto b = oracle::cov_quadrature(p, t, s);
        CHECK(std::fabs(a.value - b.value) <= a.error + b.error + 1e-13);
    }
    CHECK_THROWS_AS(oracle::cov_quadrature(p, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cov_quadrature agrees with the closed forms across kinds") {
    for (Kind kind : {Kind::I, Kind::II}) {
        for (double H : {0.3, 0.7, 1.2}) {
            for (double lam : {0.5, 2.0}) {
                ProcessParams p(kind, H, lam);
                for (auto [s, t] : {std::pair{0.5, 1.0}, {1.0, 2.0}}) {
                    double closed = cov(p, s, t);
                    auto q = oracle::cov_quadrature(p, s, t);
                    CHECK(std::fabs(closed - q.value) <= 1e-6 * std::max(1.0, std::fabs(q.value)));
                }
            }
        }
    }
}

TEST_CASE("noise_autocov_quadrature values and bilinearity") {
    ProcessParams p(Kind::I, 0.5, 1.0);
    auto g2 = oracle::noise_autocov_quadrature(p, 2);
    CHECK(std::fabs(g2.value - (-0.073497971533040440)) < 1e-8);
    // bilinearity: gamma(k) = cov(k+1,1) - cov(k,1) (cov(.,0) = 0)
    for (long k : {0L, 1L, 3L}) {
        double lhs = oracle::noise_autocov_quadrature(p, k).value;
        double rhs = oracle::cov_quadrature(p, k + 1.0, 1.0).value -
                     (k == 0 ? 0.0 : oracle::cov_quadrature(p, static_cast<double>(k), 1.0).value);
        CHECK(std::fabs(lhs - rhs) < 1e-8);
    }
    ProcessParams p3(Kind::I, 0.3, 1.0);
    CHECK(std::fabs(oracle::noise_autocov_quadrature(p3, 1).value - (-0.59447109185058434)) < 1e-7);
    // kind II at H = 1/2 has vanishing off-diagonal autocovariance
    ProcessParams pb(Kind::II, 0.5, 1.0);
    CHECK(std::fabs(oracle::noise_autocov_quadrature(pb, 3).value) < 1e-9);
    ProcessParams pII(Kind::II, 0.7, 1.0);
    CHECK(std::fabs(oracle::noise_autocov_quadrature(pII, 3).value - 0.0037139852692370426) <
          1e-9);
    CHECK_THROWS_AS(oracle::noise_autocov_quadrature(p, -1), std::invalid_argument);
}

TEST_CASE("squared tail integral") {
    auto v = oracle::squared_tail_integral(0.5, 1.0);
    CHECK(std::fabs(v.value - 1.38629436111989062) < 1e-7);  // = 2 ln 2
    // H = 1/2 bound from the split at x = 1
    double b_small = 2.0 * std::pow(std::pow(2.0, 0.25) * specfun::gamma_fn(0.25), 2);
    CHECK(v.value <= b_small + 1.0);
    // monotone in lambda
    CHECK(oracle::squared_tail_integral(0.5, 2.0).value < v.value);
    // H > 1/2 bound 2^{2H-1} lambda^{-2H} Gamma(H-1/2)^2
    auto v75 = oracle::squared_tail_integral(0.75, 1.0);
    CHECK(std::fabs(v75.value - 0.779633527018218101) < 1e-6);
    CHECK(v75.value <= std::pow(2.0, 0.5) * std::pow(specfun::gamma_fn(0.25), 2));
    // H < 1/2 bound (H-1/2)^{-2} (2 lambda)^{-2H} Gamma(2H)
    auto v3 = oracle::squared_tail_integral(0.3, 1.0);
    CHECK(std::fabs(v3.value - 3.04785063324643285) < 1e-6);
    CHECK(v3.value <= std::pow(0.2, -2.0) * std::pow(2.0, -0.6) * specfun::gamma_fn(0.6));
    CHECK_THROWS_AS(oracle::squared_tail_integral(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("quadrature error estimates are honest") {
    // halving the tolerances moves the value by less than the prior estimate
    // on at least 95% of a mixed grid
    int ok = 0, total = 0;
    for (Kind kind : {Kind::I, Kind::II}) {
        for (double H : {0.3, 0.7}) {
            for (auto [s, t] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {2.0, 5.0}}) {
                ProcessParams p(kind, H, 1.0);
                QuadratureControl loose = QuadratureControl::for_lambda(1.0);
                loose.abs_tol = 1e-9;
                loose.rel_tol = 1e-7;
                QuadratureControl tight = loose;
                tight.abs_tol *= 0.5;
                tight.rel_tol *= 0.5;
                auto a = oracle::cov_quadrature(p, s, t, loose);
                auto b = oracle::cov_quadrature(p, s, t, tight);
                ++total;
                if (std::fabs(a.value - b.value) <= a.error + 1e-15) ++ok;
            }
        }
    }
    CHECK(ok * 100 >= total * 95);
}

TEST_CASE("quadrature failure reporting") {
    QuadratureControl ctrl(1e-12, 1e-12, 3, 30.0);
    auto nasty = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.3141)); };
    CHECK_THROWS_AS(oracle::detail::integrate_adaptive(nasty, 0.0, 1.0, ctrl),
                    oracle::QuadratureError);
    CHECK_THROWS_AS(QuadratureControl(0.0, 1e-9, 100, 30.0), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureControl(1e-9, 1e-2, 100, 30.0), std::invalid_argument);
}

TEST_CASE("power_exp_integral against the incomplete-gamma reference") {
    // int_0^3 u^{-0.2} e^{-u} du = 1.1262694654706546 (50-digit oracle)
    CHECK(std::fabs(oracle::detail::power_exp_integral(-0.2, 1.0, 3.0) - 1.1262694654706546) <
          1e-12);
    // additivity over subranges
    double whole = oracle::detail::power_exp_integral(0.4, 2.0, 5.0);
    double split = oracle::detail::power_exp_integral(0.4, 2.0, 2.0) +
                   (oracle::detail::power_exp_integral(0.4, 2.0, 5.0) -
                    oracle::detail::power_exp_integral(0.4, 2.0, 2.0));
    CHECK(whole == doctest::Approx(split).epsilon(1e-14));
}
