#include "tfrac/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "tfrac/covmodel.hpp"
#include "tfrac/oracle.hpp"
#include "tfrac/rng.hpp"
#include "tfrac/specfun.hpp"
#include "tfrac/stats.hpp"
#include "tfrac/threadpool.hpp"

namespace tfrac::experiments {

namespace {

std::string describe(const ProcessParams& p) {
    std::ostringstream s;
    s << "kind=" << to_string(p.kind) << " H=" << p.hurst << " lambda=" << p.lambda;
    return s.str();
}

long pick_n(const ExperimentConfig& c, long fallback) {
    return c.n_grid.empty() ? fallback : c.n_grid.back();
}

long pick_replicates(const ExperimentConfig& c, long fallback) {
    return c.replicates > 0 ? c.replicates : fallback;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

double kolmogorov_critical(double alpha, long m) {
    auto tail = [](double x) {
        double s = 0.0;
        for (int k = 1; k <= 64; ++k) {
            double term = std::exp(-2.0 * k * k * x * x);
            s += (k % 2 == 1 ? term : -term);
            if (term < 1e-18) break;
        }
        return 2.0 * s;
    };
    double lo = 0.2, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (tail(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(m));
}

double pvar_constant_plus(double hurst) {
    double ch = specfun::gamma_fn(hurst + 0.5) /
                std::sqrt(specfun::gamma_fn(2.0 * hurst + 1.0) * std::sin(M_PI * hurst));
    return std::pow(ch, 1.0 / hurst) * specfun::abs_gaussian_moment(1.0 / hurst);
}

double pvar_constant_minus(double hurst) {
    double ch = specfun::gamma_fn(hurst + 0.5) /
                std::sqrt(specfun::gamma_fn(2.0 * hurst + 1.0) * std::sin(M_PI * hurst));
    return std::pow(ch, -1.0 / hurst) * specfun::abs_gaussian_moment(1.0 / hurst);
}

std::vector<Record> cov_table(const ExperimentConfig& c) {
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 5.0};
    std::vector<Record> out;
    for (double s : grid) {
        for (double t : grid) {
            Record r;
            r.name = "cov";
            std::ostringstream in;
            in << describe(c.params) << " s=" << s << " t=" << t;
            r.inputs = in.str();
            r.estimate = cov(c.params, s, t);
            r.target = r.estimate;
            r.pass = std::isfinite(r.estimate);
            r.provenance = "closed-form";
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<Record> sample(const ExperimentConfig& c) {
    long n = pick_n(c, 1024);
    CovarianceModel model(c.params);
    SamplePath path = sample_path(model, n, c.delta, c.seed);
    if (c.format == OutputFormat::Csv && !c.output_path.empty())
        emit_path_csv(path, c.output_path);
    std::vector<Record> out;
    Record start;
    start.name = "path_start";
    start.inputs = describe(c.params) + " n=" + std::to_string(n);
    start.estimate = path.values.front();
    start.target = 0.0;
    start.pass = path.values.front() == 0.0;
    start.provenance = "closed-form";
    out.push_back(start);
    Record fin;
    fin.name = "finite_values";
    fin.inputs = std::string("method=") + to_string(path.method);
    bool all = true;
    for (double v : path.values) all = all && std::isfinite(v);
    fin.estimate = all ? 1.0 : 0.0;
    fin.target = 1.0;
    fin.pass = all;
    fin.provenance = "MC-derived";
    out.push_back(fin);
    return out;
}

std::vector<Record> bm_clt(const ExperimentConfig& c) {
    long n = pick_n(c, 1 << 14);
    long m = pick_replicates(c, 2000);
    CovarianceModel model(c.params);
    stats::McVariations mc =
        stats::replicate_variations(model, c.hermite_q, n, m, c.seed, c.threads);
    std::vector<double> f = mc.v;
    double inv_sigma = 1.0 / std::sqrt(mc.sigma_n2);
    for (double& v : f) v *= inv_sigma;
    double d = stats::ks_distance(f, stats::Target::StdNormal);
    double crit = kolmogorov_critical(1e-3, m);
    std::ostringstream in;
    in << describe(c.params) << " q=" << c.hermite_q << " n=" << n << " M=" << m;

    std::vector<Record> out;
    Record ks;
    ks.name = "ks_normal";
    ks.inputs = in.str();
    ks.estimate = d;
    ks.target = 0.0;
    ks.tolerance = crit;
    ks.pass = d <= crit;
    ks.provenance = "MC-derived";
    out.push_back(ks);

    stats::CumulantEstimate cum = stats::sample_cumulants(mc.v);
    double sigma2 = model.bm_limit_variance(HermiteSpec::single(c.hermite_q));
    Record var;
    var.name = "variance_vs_limit";
    var.inputs = in.str();
    var.estimate = cum.k2;
    var.target = sigma2;
    var.tolerance = 0.05;  // relative
    var.stderr_ = cum.se_k2;
    var.pass = std::fabs(cum.k2 / sigma2 - 1.0) <= 0.05;
    var.provenance = "closed-form";
    out.push_back(var);
    return out;
}

std::vector<Record> cumulant_rates(const ExperimentConfig& c) {
    std::vector<long> ns = c.n_grid;
    if (ns.empty())
        for (int p = 8; p <= 14; ++p) ns.push_back(1L << p);
    long m = pick_replicates(c, 5000);
    CovarianceModel model(c.params);
    std::vector<Record> out;
    std::vector<std::pair<double, double>> pts3, pts4;
    long dropped3 = 0, dropped4 = 0;
    for (long n : ns) {
        stats::McVariations mc =
            stats::replicate_variations(model, c.hermite_q, n, m, c.seed, c.threads);
        double inv_sigma = 1.0 / std::sqrt(mc.sigma_n2);
        std::vector<double> f = mc.v;
        for (double& v : f) v *= inv_sigma;
        stats::CumulantEstimate cum = stats::sample_cumulants(f);
        std::ostringstream in;
        in << describe(c.params) << " q=" << c.hermite_q << " n=" << n << " M=" << m;
        Record rk3{"k3", in.str(), cum.k3, 0.0, 0.0, cum.se_k3, true, "MC-derived"};
        Record rk4{"k4", in.str(), cum.k4, 0.0, 0.0, cum.se_k4, true, "MC-derived"};
        out.push_back(rk3);
        out.push_back(rk4);
        if (std::fabs(cum.k3) > 0.0)
            pts3.emplace_back(static_cast<double>(n), std::fabs(cum.k3));
        else
            ++dropped3;
        if (cum.k4 > 0.0)
            pts4.emplace_back(static_cast<double>(n), cum.k4);
        else
            ++dropped4;
    }
    auto slope_record = [&](const char* name, const std::vector<std::pair<double, double>>& pts,
                            long dropped, double target, double tol) {
        Record r;
        r.name = name;
        std::ostringstream in;
        in << describe(c.params) << " q=" << c.hermite_q << " points=" << pts.size()
           << " dropped=" << dropped;
        r.inputs = in.str();
        r.target = target;
        r.tolerance = tol;
        r.provenance = "MC-derived";
        try {
            stats::RateFit fit = stats::rate_regression(pts);
            r.estimate = fit.slope;
            r.stderr_ = fit.stderr_;
            r.pass = std::fabs(fit.slope - target) <= tol;
        } catch (const std::exception& e) {
            r.inputs += std::string(" error=") + e.what();
            r.pass = false;
        }
        return r;
    };
    out.push_back(slope_record("k3_slope", pts3, dropped3, -0.5, 0.15));
    out.push_back(slope_record("k4_slope", pts4, dropped4, -1.0, 0.3));
    return out;
}

std::vector<Record> pvar(const ExperimentConfig& c) {
    long n = pick_n(c, 1 << 14);
    long m = pick_replicates(c, 500);
    CovarianceModel model(c.params);
    double delta = 1.0 / static_cast<double>(n);  // path on [0,1]
    std::vector<double> svals(m), ratios(m);
    // one rescaled plan shared by all replicates
    CovarianceModel fine(ProcessParams(c.params.kind, c.params.hurst, c.params.lambda * delta));
    NoiseSampler plan(fine, n);
    double scale = std::pow(delta, c.params.hurst);
    parallel_for(static_cast<std::size_t>(m), c.threads, [&](std::size_t r) {
        SamplePath path;
        path.params = c.params;
        path.n = n;
        path.delta = delta;
        std::vector<double> noise = plan.draw(rng::substream_seed(c.seed, r));
        path.values.resize(noise.size() + 1);
        path.values[0] = 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < noise.size(); ++i) {
            acc += scale * noise[i];
            path.values[i + 1] = acc;
        }
        double fine_var = stats::p_variation(path, c.beta);
        double coarse_var = stats::p_variation(path, c.beta, 4);
        svals[r] = fine_var;
        ratios[r] = std::fabs(fine_var / coarse_var - 1.0);
    });
    double mean = stats::pairwise_sum(svals) / static_cast<double>(m);
    double ss = 0.0;
    for (double v : svals) ss += (v - mean) * (v - mean);
    double se = std::sqrt(ss / (m - 1.0) / static_cast<double>(m));
    double target = pvar_constant_plus(c.params.hurst);

    std::vector<Record> out;
    Record rm;
    rm.name = "pvar_mean";
    std::ostringstream in;
    in << describe(c.params) << " beta=" << c.beta << " n=" << n << " M=" << m << " interval=[0,1]"
       << " c_plus=" << pvar_constant_plus(c.params.hurst)
       << " c_minus=" << pvar_constant_minus(c.params.hurst);
    rm.inputs = in.str();
    rm.estimate = mean;
    rm.target = target;
    rm.tolerance = 0.05;  // relative; the H=1/2 acceptance tightens to 0.03
    rm.stderr_ = se;
    rm.pass = std::fabs(mean / target - 1.0) <= rm.tolerance;
    rm.provenance = "closed-form";
    out.push_back(rm);

    Record rr;
    rr.name = "pvar_refinement";
    rr.inputs = in.str() + " coarse=n/4";
    rr.estimate = median(ratios);
    rr.target = 0.0;
    rr.tolerance = 0.05;
    rr.pass = rr.estimate <= 0.05;
    rr.provenance = "MC-derived";
    out.push_back(rr);
    return out;
}

std::vector<Record> spectral(const ExperimentConfig& c) {
    CovarianceModel model(c.params);
    std::vector<Record> out;
    Record zero;
    zero.name = "h_at_zero";
    zero.inputs = describe(c.params);
    zero.estimate = model.spectral_density(0.0);
    zero.target = 0.0;
    zero.tolerance = 1e-10;
    zero.pass = zero.estimate <= 1e-10;
    zero.provenance = "closed-form";
    out.push_back(zero);

    double rmin = 1e300, rmax = 0.0;
    double l2 = c.params.lambda * c.params.lambda;
    for (int i = 0; i <= 9; ++i) {
        double w = 0.01 + i * 0.01;
        double ratio = model.spectral_density(w) / (w * w / (l2 + w * w));
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    Record lo{"near_zero_ratio_min", describe(c.params) + " omega in [0.01,0.1]",
              rmin, 1.0, 0.0, 0.0, rmin >= 0.1, "closed-form"};
    Record hi{"near_zero_ratio_max", describe(c.params) + " omega in [0.01,0.1]",
              rmax, 1.0, 0.0, 0.0, rmax <= 10.0, "closed-form"};
    out.push_back(lo);
    out.push_back(hi);
    return out;
}

std::vector<Record> edgeworth(const ExperimentConfig& c) {
    std::vector<long> ns = c.n_grid;
    if (ns.empty()) ns.push_back(1L << 12);
    long m = pick_replicates(c, 200000);
    CovarianceModel model(c.params);
    auto results = stats::edgeworth_check(model, c.hermite_q, c.z_grid, ns, m, c.seed, c.threads);
    std::vector<Record> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        bool is_last = (i + 1 == results.size());
        for (const auto& cell : results[i].cells) {
            Record r;
            r.name = is_last ? "edgeworth_profile" : "edgeworth_trend";
            std::ostringstream in;
            in << describe(c.params) << " q=" << c.hermite_q << " z=" << cell.z
               << " n=" << results[i].n << " M=" << m;
            r.inputs = in.str();
            r.estimate = cell.estimate;
            r.target = cell.target;
            r.tolerance = 3.0 * cell.stderr_;
            r.stderr_ = cell.stderr_;
            r.pass = is_last ? cell.pass : true;
            r.provenance = "MC-derived";
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<Record> oracle_check(const ExperimentConfig& c) {
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 5.0};
    CovarianceModel model(c.params);
    oracle::QuadratureControl ctrl = oracle::QuadratureControl::for_lambda(c.params.lambda);

    double max_rel = 0.0;
    std::vector<std::pair<double, double>> cells;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i; j < grid.size(); ++j) cells.emplace_back(grid[i], grid[j]);
    std::vector<double> errs(cells.size());
    parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        auto [s, t] = cells[i];
        double closed = cov(c.params, s, t);
        oracle::QuadResult q = oracle::cov_quadrature(c.params, s, t, ctrl);
        errs[i] = std::fabs(closed - q.value) / std::max(1.0, std::fabs(q.value));
    });
    for (double e : errs) max_rel = std::max(max_rel, e);

    Record rc;
    rc.name = "cov_vs_quadrature_max_rel";
    rc.inputs = describe(c.params) + " s,t in {0.25,0.5,1,2,5}";
    rc.estimate = max_rel;
    rc.target = 0.0;
    rc.tolerance = 1e-6;
    rc.pass = max_rel <= 1e-6;
    rc.provenance = "oracle";

    long lags = std::max<long>(c.lags, 1);
    std::vector<double> gerrs(static_cast<std::size_t>(lags) + 1);
    parallel_for(gerrs.size(), c.threads, [&](std::size_t k) {
        double closed = model.noise_autocov(static_cast<long>(k));
        oracle::QuadResult q =
            oracle::noise_autocov_quadrature(c.params, static_cast<long>(k), ctrl);
        gerrs[k] = std::fabs(closed - q.value);
    });
    double max_abs = 0.0;
    for (double e : gerrs) max_abs = std::max(max_abs, e);

    Record rg;
    rg.name = "gamma_vs_quadrature_max_abs";
    rg.inputs = describe(c.params) + " lags 0.." + std::to_string(lags);
    rg.estimate = max_abs;
    rg.target = 0.0;
    rg.tolerance = 1e-7;
    rg.pass = max_abs <= 1e-7;
    rg.provenance = "oracle";

    return {rc, rg};
}

ExperimentReport run(const ExperimentConfig& c) {
    c.validate();
    ExperimentReport report;
    report.config = c;
    auto t0 = std::chrono::steady_clock::now();
    switch (c.experiment) {
        case ExperimentId::CovTable: report.records = cov_table(c); break;
        case ExperimentId::Sample: report.records = sample(c); break;
        case ExperimentId::BmClt: report.records = bm_clt(c); break;
        case ExperimentId::CumulantRates: report.records = cumulant_rates(c); break;
        case ExperimentId::PVar: report.records = pvar(c); break;
        case ExperimentId::Spectral: report.records = spectral(c); break;
        case ExperimentId::Edgeworth: report.records = edgeworth(c); break;
        case ExperimentId::OracleCheck: report.records = oracle_check(c); break;
    }
    auto t1 = std::chrono::steady_clock::now();
    report.wall_clock_sec = std::chrono::duration<double>(t1 - t0).count();
    bool sample_csv = c.experiment == ExperimentId::Sample && c.format == OutputFormat::Csv;
    if (!c.output_path.empty() && !sample_csv) report.write(c.output_path);
    return report;
}

}  // namespace tfrac::experiments
