#pragma once

#include "tfrac/report.hpp"

namespace tfrac::experiments {

// Kolmogorov statistic critical value at level alpha for m samples.
double kolmogorov_critical(double alpha, long m);

// c_H candidates for the 1/H-variation limit: C(H)^{+1/H} E|Z|^{1/H} (the
// decomposition constant) and C(H)^{-1/H} E|Z|^{1/H}. They coincide at H=1/2.
double pvar_constant_plus(double hurst);
double pvar_constant_minus(double hurst);

std::vector<Record> cov_table(const ExperimentConfig& c);
std::vector<Record> sample(const ExperimentConfig& c);
std::vector<Record> bm_clt(const ExperimentConfig& c);
std::vector<Record> cumulant_rates(const ExperimentConfig& c);
std::vector<Record> pvar(const ExperimentConfig& c);
std::vector<Record> spectral(const ExperimentConfig& c);
std::vector<Record> edgeworth(const ExperimentConfig& c);
std::vector<Record> oracle_check(const ExperimentConfig& c);

// Dispatches on c.experiment, stamps the wall clock, and writes the report
// (or, for `sample` in csv format, the path itself) to c.output_path.
ExperimentReport run(const ExperimentConfig& c);

}  // namespace tfrac::experiments
