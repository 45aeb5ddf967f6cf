#pragma once

#include <cstddef>
#include <stdexcept>

#include "tfrac/dd.hpp"

namespace tfrac::specfun {

// Termination policy for power-series evaluation (hyp2f3).
struct SeriesControl {
    double rel_tol = 1e-14;
    std::size_t max_terms = 10000;

    SeriesControl() = default;
    SeriesControl(double rel_tol_, std::size_t max_terms_);
};

class NonConvergence : public std::runtime_error {
  public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Gamma(x) for x > 0. Lanczos approximation, relative error well under 1e-12.
double gamma_fn(double x);

// Modified Bessel function of the second kind K_nu(x), x > 0, |nu| <= 3.
// Temme series for x <= 2, Steed/Thompson-Barnett continued fraction with
// exp(x) scaling for x > 2.
double bessel_k(double nu, double x);

// 2F3(a1,a2; b1,b2,b3; z) by direct series summation.
double hyp2f3(double a1, double a2, double b1, double b2, double b3, double z,
              const SeriesControl& ctrl = SeriesControl{});

// Probabilists' Hermite polynomial H_q(x) via the three-term recurrence.
double hermite_eval(unsigned q, double x);

// E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi), Z ~ N(0,1), p > 0.
double abs_gaussian_moment(double p);

namespace detail {

// Series evaluation in double-double with the leading k=0 term optionally
// dropped (sums 1 - 2F3 without cancellation at small z). `peak` reports the
// largest |term| seen, which bounds the cancellation depth for the caller.
tfrac::detail::Dd hyp2f3_dd(double a1, double a2, double b1, double b2, double b3,
                            double z, bool drop_unit_term, double* peak,
                            const SeriesControl& ctrl = SeriesControl{});

// Gamma through the same Lanczos kernel without the positivity guard;
// x may be any non-pole real (used for reflection at negative arguments).
double gamma_lanczos(double x);

}  // namespace detail

}  // namespace tfrac::specfun
