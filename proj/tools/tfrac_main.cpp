#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tfrac/experiments.hpp"
#include "tfrac/version.hpp"

namespace {

using tfrac::ExperimentConfig;
using tfrac::ExperimentId;

struct CliState {
    ExperimentConfig config;
    std::string config_file;
    bool threads_set = false;
};

void add_common_options(CLI::App* sub, CliState& st) {
    sub->add_option_function<std::string>(
           "--kind", [&st](const std::string& v) { st.config.params.kind = tfrac::kind_from_string(v); },
           "process kind, I or II")
        ->default_str("I");
    sub->add_option("--hurst", st.config.params.hurst, "Hurst parameter H > 0");
    sub->add_option("--lambda", st.config.params.lambda, "tempering parameter lambda > 0");
    sub->add_option("--n", st.config.n_grid, "sample length(s); last entry is the working size");
    sub->add_option("--replicates", st.config.replicates, "Monte-Carlo replicates (0 = default)");
    sub->add_option("--seed", st.config.seed, "64-bit RNG seed");
    sub->add_option("--out", st.config.output_path, "output file for the report / path CSV");
    sub->add_option_function<std::string>(
        "--format",
        [&st](const std::string& v) {
            if (v == "json")
                st.config.format = tfrac::OutputFormat::Json;
            else if (v == "csv")
                st.config.format = tfrac::OutputFormat::Csv;
            else
                throw CLI::ValidationError("--format must be json or csv");
        },
        "report format: json or csv");
    sub->add_option_function<int>(
        "--threads",
        [&st](int v) {
            st.config.threads = v;
            st.threads_set = true;
        },
        "worker threads (0 = hardware)");
    sub->add_option("--q", st.config.hermite_q, "Hermite order of the test function");
    sub->add_option("--beta", st.config.beta, "variation exponent");
    sub->add_option("--delta", st.config.delta, "path grid step");
    sub->add_option("--z", st.config.z_grid, "z grid for the CDF profile");
    sub->add_option("--lags", st.config.lags, "autocovariance lags to check");
    sub->add_option("--config", st.config_file, "load an ExperimentConfig JSON instead of flags");
}

int run_experiment(CliState& st, ExperimentId id) {
    st.config.experiment = id;
    if (!st.config_file.empty()) {
        std::ifstream in(st.config_file);
        if (!in) {
            std::cerr << "tfrac: cannot open config file " << st.config_file << "\n";
            return 2;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        st.config = ExperimentConfig::from_json_string(buf.str());
    }
    if (!st.threads_set && st.config.threads == 0) {
        if (const char* env = std::getenv("TFRAC_THREADS")) st.config.threads = std::atoi(env);
    }
    // re-run the ProcessParams invariants on flag-assembled values
    st.config.params = tfrac::ProcessParams(st.config.params.kind, st.config.params.hurst,
                                            st.config.params.lambda);
    st.config.validate();
    tfrac::ExperimentReport report = tfrac::experiments::run(st.config);
    for (const auto& r : report.records) {
        std::printf("[%s] %s  estimate=%.10g target=%.10g tol=%.4g stderr=%.4g  (%s)\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.estimate, r.target, r.tolerance,
                    r.stderr_, r.inputs.c_str());
    }
    std::printf("%s: %s (%.2fs)\n", tfrac::to_string(st.config.experiment),
                report.all_pass() ? "all records pass" : "FAILURES present",
                report.wall_clock_sec);
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tempered fractional Brownian motion toolkit"};
    app.set_version_flag("--version", tfrac::kVersion);
    app.require_subcommand(1);

    CliState st;
    ExperimentId chosen = ExperimentId::CovTable;
    for (ExperimentId id :
         {ExperimentId::CovTable, ExperimentId::Sample, ExperimentId::BmClt,
          ExperimentId::CumulantRates, ExperimentId::PVar, ExperimentId::Spectral,
          ExperimentId::Edgeworth, ExperimentId::OracleCheck}) {
        CLI::App* sub = app.add_subcommand(tfrac::to_string(id));
        add_common_options(sub, st);
        sub->callback([&chosen, id]() { chosen = id; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "tfrac: " << e.what() << "\n";
        return 2;
    }

    try {
        return run_experiment(st, chosen);
    } catch (const std::invalid_argument& e) {
        std::cerr << "tfrac: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tfrac: experiment failed: " << e.what() << "\n";
        return 1;
    }
}
