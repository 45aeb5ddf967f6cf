#include "tfrac/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tfrac/version.hpp"

namespace tfrac {

using nlohmann::ordered_json;

const char* to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::CovTable: return "cov-table";
        case ExperimentId::Sample: return "sample";
        case ExperimentId::BmClt: return "bm-clt";
        case ExperimentId::CumulantRates: return "cumulant-rates";
        case ExperimentId::PVar: return "pvar";
        case ExperimentId::Spectral: return "spectral";
        case ExperimentId::Edgeworth: return "edgeworth";
        case ExperimentId::OracleCheck: return "oracle-check";
    }
    return "?";
}

ExperimentId experiment_from_string(const std::string& s) {
    for (ExperimentId id :
         {ExperimentId::CovTable, ExperimentId::Sample, ExperimentId::BmClt,
          ExperimentId::CumulantRates, ExperimentId::PVar, ExperimentId::Spectral,
          ExperimentId::Edgeworth, ExperimentId::OracleCheck}) {
        if (s == to_string(id)) return id;
    }
    throw std::invalid_argument("unknown experiment '" + s + "'");
}

namespace {

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["schema"] = kConfigSchema;
    j["experiment"] = to_string(c.experiment);
    j["kind"] = to_string(c.params.kind);
    j["hurst"] = c.params.hurst;
    j["lambda"] = c.params.lambda;
    j["n_grid"] = c.n_grid;
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["output_path"] = c.output_path;
    j["format"] = c.format == OutputFormat::Json ? "json" : "csv";
    j["threads"] = c.threads;
    j["q"] = c.hermite_q;
    j["beta"] = c.beta;
    j["delta"] = c.delta;
    j["z_grid"] = c.z_grid;
    j["lags"] = c.lags;
    return j;
}

const std::set<std::string> kKnownKeys = {
    "schema", "experiment", "kind",  "hurst", "lambda", "n_grid", "replicates", "seed",
    "output_path", "format", "threads", "q", "beta", "delta", "z_grid", "lags"};

ExperimentConfig config_from_json(const ordered_json& j) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKnownKeys.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "'");
    if (!j.contains("schema") || j.at("schema").get<int>() != kConfigSchema)
        throw std::invalid_argument("config: missing or unsupported schema version");
    ExperimentConfig c;
    c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
    Kind kind = j.contains("kind") ? kind_from_string(j.at("kind").get<std::string>()) : Kind::I;
    double hurst = j.value("hurst", 0.5);
    double lambda = j.value("lambda", 1.0);
    c.params = ProcessParams(kind, hurst, lambda);
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<long>>();
    c.replicates = j.value("replicates", 0L);
    c.seed = j.value("seed", kDefaultSeed);
    c.output_path = j.value("output_path", std::string{});
    std::string fmt = j.value("format", std::string{"json"});
    if (fmt == "json")
        c.format = OutputFormat::Json;
    else if (fmt == "csv")
        c.format = OutputFormat::Csv;
    else
        throw std::invalid_argument("config: format must be json or csv");
    c.threads = j.value("threads", 0);
    c.hermite_q = j.value("q", 2u);
    c.beta = j.value("beta", 2.0);
    c.delta = j.value("delta", 1.0);
    if (j.contains("z_grid")) c.z_grid = j.at("z_grid").get<std::vector<double>>();
    c.lags = j.value("lags", 10L);
    c.validate();
    return c;
}

}  // namespace

std::string ExperimentConfig::to_json_string() const {
    return config_to_json(*this).dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    return config_from_json(ordered_json::parse(text));
}

void ExperimentConfig::validate() const {
    for (long n : n_grid)
        if (n < 1) throw std::invalid_argument("config: n_grid entries must be >= 1");
    if (replicates < 0) throw std::invalid_argument("config: replicates must be >= 0");
    if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
    if (!(beta >= 1.0)) throw std::invalid_argument("config: beta must be >= 1");
    if (hermite_q < 1) throw std::invalid_argument("config: q must be >= 1");
    if (lags < 0) throw std::invalid_argument("config: lags must be >= 0");
}

namespace {

ordered_json record_to_json(const Record& r) {
    ordered_json j;
    j["name"] = r.name;
    j["inputs"] = r.inputs;
    j["estimate"] = r.estimate;
    j["target"] = r.target;
    j["tolerance"] = r.tolerance;
    j["stderr"] = r.stderr_;
    j["pass"] = r.pass;
    j["provenance"] = r.provenance;
    return j;
}

}  // namespace

std::string ExperimentReport::to_json_string() const {
    ordered_json j;
    j["schema"] = kConfigSchema;
    j["config"] = config_to_json(config);
    j["library_version"] = kVersion;
    j["rng"] = kRngId;
    j["records"] = ordered_json::array();
    for (const auto& r : records) j["records"].push_back(record_to_json(r));
    j["pass"] = all_pass();
    j["wall_clock_sec"] = wall_clock_sec;
    return j.dump(2) + "\n";
}

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string ExperimentReport::to_csv_string() const {
    std::ostringstream out;
    out << "name,inputs,estimate,target,tolerance,stderr,pass,provenance\n";
    for (const auto& r : records) {
        out << csv_quote(r.name) << ',' << csv_quote(r.inputs) << ',' << g17(r.estimate) << ','
            << g17(r.target) << ',' << g17(r.tolerance) << ',' << g17(r.stderr_) << ','
            << (r.pass ? "true" : "false") << ',' << csv_quote(r.provenance) << '\n';
    }
    return out.str();
}

void ExperimentReport::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << (config.format == OutputFormat::Json ? to_json_string() : to_csv_string());
    if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_path_csv(const SamplePath& path, std::ostream& out) {
    out << "index,t,value\n";
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        out << i << ',' << g17(path.time_at(static_cast<long>(i))) << ','
            << g17(path.values[i]) << '\n';
    }
}

void emit_path_csv(const SamplePath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + file);
    emit_path_csv(path, out);
    if (!out) throw std::runtime_error("write failed: " + file);
}

}  // namespace tfrac
