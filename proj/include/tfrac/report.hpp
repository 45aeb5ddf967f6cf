#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tfrac/params.hpp"
#include "tfrac/sampler.hpp"

namespace tfrac {

enum class ExperimentId {
    CovTable,
    Sample,
    BmClt,
    CumulantRates,
    PVar,
    Spectral,
    Edgeworth,
    OracleCheck,
};

const char* to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string& s);

enum class OutputFormat { Json, Csv };

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEEull;
inline constexpr int kConfigSchema = 1;

// One runnable experiment. Serializes to a schema-versioned JSON object;
// unknown keys are rejected on load and every field round-trips losslessly.
struct ExperimentConfig {
    ExperimentId experiment = ExperimentId::CovTable;
    ProcessParams params;
    std::vector<long> n_grid;
    long replicates = 0;  // 0 = experiment default
    std::uint64_t seed = kDefaultSeed;
    std::string output_path;
    OutputFormat format = OutputFormat::Json;
    int threads = 0;  // 0 = auto
    unsigned hermite_q = 2;
    double beta = 2.0;
    double delta = 1.0;
    std::vector<double> z_grid{-2.0, 0.0, 2.0};
    long lags = 10;

    std::string to_json_string() const;
    static ExperimentConfig from_json_string(const std::string& text);
    void validate() const;
};

struct Record {
    std::string name;
    std::string inputs;
    double estimate = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    double stderr_ = 0.0;
    bool pass = false;
    std::string provenance;  // closed-form | asymptote | oracle | MC-derived
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<Record> records;
    double wall_clock_sec = 0.0;

    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }

    std::string to_json_string() const;
    std::string to_csv_string() const;
    void write(const std::string& path) const;  // honors config.format
};

// CSV with header index,t,value, 17 significant digits, LF line endings.
void emit_path_csv(const SamplePath& path, std::ostream& out);
void emit_path_csv(const SamplePath& path, const std::string& file);

}  // namespace tfrac
