#pragma once

#include <functional>
#include <stdexcept>

#include "tfrac/params.hpp"

namespace tfrac::oracle {

// Tolerances and truncation for the brute-force quadrature route.
struct QuadratureControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    double tail_cut = 30.0;  // lower-tail length; e^{-2 lambda tail_cut} < abs_tol

    QuadratureControl() = default;
    QuadratureControl(double at, double rt, int ms, double tc);

    // tail_cut sized for the given tempering rate.
    static QuadratureControl for_lambda(double lambda);
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double value, double error)
        : std::runtime_error(what), value(value), error(error) {}
    double value;
    double error;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Pointwise moving-average kernel g^J_{H,lambda,t}(x) with the 0^0 = 0
// convention. For kind II the inner ds-integral is evaluated by quadrature.
double kernel(const ProcessParams& p, double t, double x);

// Noise kernel g^J_{lambda,alpha,j}(x) of the increment sequence.
double noise_kernel(const ProcessParams& p, long j, double x);

// E[X(s)X(t)] = int kernel(s,x) kernel(t,x) dx by adaptive Gauss-Kronrod with
// endpoint grading at the x^{H-1/2} singularities. Requires s,t >= 0.
QuadResult cov_quadrature(const ProcessParams& p, double s, double t,
                          const QuadratureControl& ctrl);
QuadResult cov_quadrature(const ProcessParams& p, double s, double t);

// gamma^J(k) as the direct inner product of noise kernels, k >= 0.
QuadResult noise_autocov_quadrature(const ProcessParams& p, long k,
                                    const QuadratureControl& ctrl);
QuadResult noise_autocov_quadrature(const ProcessParams& p, long k);

// I = int_0^inf ( int_x^inf u^{H-3/2} e^{-lambda u} du )^2 dx, finite for H > 0.
QuadResult squared_tail_integral(double hurst, double lambda, const QuadratureControl& ctrl);
QuadResult squared_tail_integral(double hurst, double lambda);

namespace detail {

// Adaptive GK15 over [a,b]; throws QuadratureError past max_subdivisions.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureControl& ctrl);

// Same, but substitutes x = b - w^grade (grade >= 1) to absorb an algebraic
// singularity at the right endpoint.
QuadResult integrate_right_graded(const std::function<double(double)>& f, double a, double b,
                                  double grade, const QuadratureControl& ctrl);

// int_0^U u^alpha e^{-lambda u} du, alpha > -1: Taylor head panel plus
// composite 64-point Gauss-Legendre on geometrically growing panels.
double power_exp_integral(double alpha, double lambda, double upper);

}  // namespace detail

}  // namespace tfrac::oracle
