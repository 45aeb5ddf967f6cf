#include "tfrac/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace tfrac::oracle {

QuadratureControl::QuadratureControl(double at, double rt, int ms, double tc)
    : abs_tol(at), rel_tol(rt), max_subdivisions(ms), tail_cut(tc) {
    if (!(abs_tol > 0.0) || abs_tol > 1e-4)
        throw std::invalid_argument("QuadratureControl: abs_tol must be in (0, 1e-4]");
    if (!(rel_tol > 0.0) || rel_tol > 1e-4)
        throw std::invalid_argument("QuadratureControl: rel_tol must be in (0, 1e-4]");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureControl: max_subdivisions must be positive");
    if (!(tail_cut > 0.0))
        throw std::invalid_argument("QuadratureControl: tail_cut must be positive");
}

QuadratureControl QuadratureControl::for_lambda(double lambda) {
    QuadratureControl c;
    c.tail_cut = 30.0 / lambda;  // e^{-2 lambda tail_cut} = e^{-60} << abs_tol
    return c;
}

namespace detail {

namespace {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double fsum = f(c - dx) + f(c + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// 64-point Gauss-Legendre nodes on [0,1], built once by Newton iteration.
struct Gl64 {
    std::array<double, 64> x{}, w{};
    Gl64() {
        const int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                double z1 = z;
                z = z1 - p1 / pp;
                if (std::fabs(z - z1) < 1e-16) break;
            }
            x[i] = 0.5 * (1.0 - z);
            x[n - 1 - i] = 0.5 * (1.0 + z);
            w[i] = w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const Gl64& gl64() {
    static const Gl64 table;
    return table;
}

template <typename F>
double gl64_panel(const F& f, double a, double b) {
    const Gl64& t = gl64();
    double s = 0.0;
    double len = b - a;
    for (int i = 0; i < 64; ++i) s += t.w[i] * f(a + len * t.x[i]);
    return s * len;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureControl& ctrl) {
    if (!(b > a)) return {0.0, 0.0};
    std::priority_queue<Segment> queue;
    PanelEstimate first = gk15(f, a, b);
    queue.push({a, b, first.value, first.error});
    double total_val = first.value;
    double total_err = first.error;
    int splits = 0;
    while (total_err > std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(total_val))) {
        if (splits >= ctrl.max_subdivisions)
            throw QuadratureError("quadrature failed to converge", total_val, total_err);
        Segment s = queue.top();
        queue.pop();
        double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b)  // interval exhausted at double resolution
            throw QuadratureError("quadrature interval exhausted", total_val, total_err);
        PanelEstimate left = gk15(f, s.a, m);
        PanelEstimate right = gk15(f, m, s.b);
        total_val += left.value + right.value - s.value;
        total_err += left.error + right.error - s.error;
        queue.push({s.a, m, left.value, left.error});
        queue.push({m, s.b, right.value, right.error});
        ++splits;
    }
    return {total_val, total_err};
}

QuadResult integrate_right_graded(const std::function<double(double)>& f, double a, double b,
                                  double grade, const QuadratureControl& ctrl) {
    if (!(b > a)) return {0.0, 0.0};
    if (grade <= 1.0) return integrate_adaptive(f, a, b, ctrl);
    // x = b - w^grade, w in [0, (b-a)^{1/grade}]
    double wmax = std::pow(b - a, 1.0 / grade);
    auto g = [&, grade, b](double w) {
        double step = std::pow(w, grade);
        return f(b - step) * grade * step / w;  // grade * w^{grade-1}
    };
    return integrate_adaptive(g, 0.0, wmax, ctrl);
}

double power_exp_integral(double alpha, double lambda, double upper) {
    if (upper <= 0.0) return 0.0;
    double cap = 55.0 / lambda;
    double u1 = std::min(upper, cap);
    double head = std::min({u1, 0.5 / lambda, 1.0});
    // Taylor head: int_0^h u^a e^{-lu} du = sum (-l)^m h^{a+1+m} / (m! (a+1+m))
    double result = 0.0;
    double coef = std::pow(head, alpha + 1.0);
    for (int m = 0; m <= 24; ++m) {
        result += coef / (alpha + 1.0 + m);
        coef *= -lambda * head / (m + 1.0);
    }
    auto f = [alpha, lambda](double u) { return std::pow(u, alpha) * std::exp(-lambda * u); };
    double lo = head;
    while (lo < u1) {
        double hi = std::min(u1, 2.0 * lo);
        result += gl64_panel(f, lo, hi);
        lo = hi;
    }
    return result;
}

namespace {

// int_x^inf u^alpha e^{-lambda u} du for x > 0 (alpha may be <= -1).
double power_exp_tail(double alpha, double lambda, double x) {
    double cap = x + 58.0 / lambda;
    auto f = [alpha, lambda](double u) { return std::pow(u, alpha) * std::exp(-lambda * u); };
    double result = 0.0;
    double lo = x;
    while (lo < cap) {
        double hi = std::min(cap, 2.0 * lo);
        if (hi <= lo) break;
        result += gl64_panel(f, lo, hi);
        lo = hi;
    }
    return result;
}

double power_piece(double u, double alpha, double lambda) {
    if (u > 0.0) return std::exp(-lambda * u) * std::pow(u, alpha);
    return 0.0;  // includes 0^0 = 0
}

}  // namespace detail-local

}  // namespace detail

double kernel(const ProcessParams& p, double t, double x) {
    using detail::power_exp_integral;
    double a = p.alpha();
    if (t == 0.0) return 0.0;
    double base = detail::power_piece(t - x, a, p.lambda) - detail::power_piece(-x, a, p.lambda);
    if (p.kind == Kind::I) return base;
    // kind II: + lambda int_0^t (s-x)_+^a e^{-lambda(s-x)_+} ds
    double hi = t - x;
    if (hi <= 0.0) return base;
    double lo = std::max(0.0, -x);
    double inner = power_exp_integral(a, p.lambda, hi) - power_exp_integral(a, p.lambda, lo);
    return base + p.lambda * inner;
}

double noise_kernel(const ProcessParams& p, long j, double x) {
    using detail::power_exp_integral;
    double a = p.alpha();
    double base =
        detail::power_piece(j + 1 - x, a, p.lambda) - detail::power_piece(j - x, a, p.lambda);
    if (p.kind == Kind::I) return base;
    double hi = j + 1 - x;
    if (hi <= 0.0) return base;
    double lo = std::max(0.0, static_cast<double>(j) - x);
    double inner = power_exp_integral(a, p.lambda, hi) - power_exp_integral(a, p.lambda, lo);
    return base + p.lambda * inner;
}

namespace {

// Integrate f over [lo, hi] splitting at the given interior points; panels
// whose right end touches a kernel singularity are graded when H < 1/2.
QuadResult integrate_piecewise(const std::function<double(double)>& f, ProcessParams p,
                               std::vector<double> pts, const QuadratureControl& ctrl) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double grade = p.hurst < 0.5 ? 1.0 / (2.0 * p.hurst) : 1.0;
    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = detail::integrate_right_graded(f, pts[i], pts[i + 1], grade, ctrl);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

}  // namespace

QuadResult cov_quadrature(const ProcessParams& p, double s, double t,
                          const QuadratureControl& ctrl) {
    if (s < 0.0 || t < 0.0)
        throw std::invalid_argument("cov_quadrature: s, t must be >= 0");
    if (s == 0.0 || t == 0.0) return {0.0, 0.0};
    double m = std::min(s, t);
    auto f = [&p, s, t](double x) { return kernel(p, s, x) * kernel(p, t, x); };
    // kernels vanish for x > min(s,t); singular points at x = 0 and x = m
    return integrate_piecewise(f, p, {-ctrl.tail_cut, 0.0, m}, ctrl);
}

QuadResult cov_quadrature(const ProcessParams& p, double s, double t) {
    return cov_quadrature(p, s, t, QuadratureControl::for_lambda(p.lambda));
}

QuadResult noise_autocov_quadrature(const ProcessParams& p, long k,
                                    const QuadratureControl& ctrl) {
    if (k < 0) throw std::invalid_argument("noise_autocov_quadrature: k must be >= 0");
    auto f = [&p, k](double x) { return noise_kernel(p, k, x) * noise_kernel(p, 0, x); };
    // g_0 vanishes for x > 1; singular points at 0 and 1
    return integrate_piecewise(f, p, {-ctrl.tail_cut, 0.0, 1.0}, ctrl);
}

QuadResult noise_autocov_quadrature(const ProcessParams& p, long k) {
    return noise_autocov_quadrature(p, k, QuadratureControl::for_lambda(p.lambda));
}

QuadResult squared_tail_integral(double hurst, double lambda, const QuadratureControl& ctrl) {
    if (!(hurst > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("squared_tail_integral: H and lambda must be > 0");
    auto inner_sq = [hurst, lambda](double x) {
        double tail = detail::power_exp_tail(hurst - 1.5, lambda, x);
        return tail * tail;
    };
    // T(x)^2 ~ x^{2H-1} as x -> 0 for H < 1/2; reuse the kernel grading.
    double upper = 40.0 / lambda;
    double grade = hurst < 0.5 ? 1.0 / (2.0 * hurst) : 1.0;
    // integrate [0, 1] with left-end singularity via reversal, then [1, upper]
    auto reversed = [&inner_sq](double y) { return inner_sq(1.0 - y); };
    QuadResult left = detail::integrate_right_graded(reversed, 0.0, 1.0, grade, ctrl);
    QuadResult right = detail::integrate_adaptive(inner_sq, 1.0, upper, ctrl);
    return {left.value + right.value, left.error + right.error};
}

QuadResult squared_tail_integral(double hurst, double lambda) {
    return squared_tail_integral(hurst, lambda, QuadratureControl::for_lambda(lambda));
}

}  // namespace tfrac::oracle
