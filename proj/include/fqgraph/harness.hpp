#pragma once

#include "fqgraph/bounds.hpp"
#include "fqgraph/counting.hpp"
#include "fqgraph/ensembles.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fqg {

using OrderedJson = nlohmann::ordered_json;

/// What to count on a job's graph.
struct CountRequest {
    std::vector<unsigned> cycles;
    std::vector<unsigned> paths;
    bool nondegenerate = false;
    bool tree_bound = false; // degenerate-cycle bound for each requested n
    bool pairs = false;
    bool oracle = false; // brute-force recount and equality assertion
};

/// One theorem to verify on a job, with its parameters.
struct TheoremRequest {
    TheoremId id = TheoremId::EdgeIdentity;
    unsigned n = 4;
    unsigned k = 2;
    unsigned r = 2; // tree edge count for tree_embed
    double delta = 0.05;
    double epsilon = 0.2;
    std::int64_t fg_max = 9;
};

struct JobSpec {
    std::string id;
    std::uint32_t q = 5;
    std::uint32_t d = 2;
    std::uint32_t t = 1;
    Relation relation = Relation::Distance;
    std::string recipe = "full";
    std::uint64_t seed = 0;
    unsigned reps = 1;
    CountRequest count;
    std::vector<TheoremRequest> theorems;
};

struct ExperimentConfig {
    std::vector<JobSpec> jobs;
    std::string json_path;
    std::string csv_path;
    std::string tsv_path;
    unsigned threads = 1;
    bool include_timing = false;
};

struct ResultRecord {
    std::string job_id;
    unsigned rep = 0;
    std::uint32_t q = 0, d = 0, t = 0;
    Relation relation = Relation::Distance;
    std::string recipe;
    std::uint64_t seed = 0;
    std::size_t set_size = 0;
    std::vector<std::pair<std::string, std::string>> counts; // exact decimals as strings
    std::vector<BoundReport> reports;
    bool oracle_checked = false;
    bool oracle_match = true;
    std::string error;      // nonempty when the job raised
    std::string error_code; // machine-readable Errc name
    double timing_ms = 0;
};

/// Schema-validating parse; unknown keys are rejected.
ExperimentConfig parse_config(const OrderedJson& j);
ExperimentConfig load_config_file(const std::string& path);

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

OrderedJson report_to_json(const BoundReport& rep);
OrderedJson record_to_json(const ResultRecord& rec, bool include_timing);
OrderedJson records_to_json(const std::vector<ResultRecord>& records, bool include_timing);
OrderedJson spectral_report_to_json(const SpectralReport& rep);
OrderedJson smoothing_report_to_json(const SmoothingReport& rep);

std::string render_csv(const std::vector<ResultRecord>& records);
std::string render_tsv(const std::vector<ResultRecord>& records);

/// Writes whichever of json/csv/tsv paths are set.
void write_outputs(const ExperimentConfig& config, const std::vector<ResultRecord>& records);

/// 0 ok; 2 a theorem violation (non-vacuous fail); 3 a resource cap was hit.
int exit_code_for(const std::vector<ResultRecord>& records);

/// The built-in deterministic selftest configuration.
std::string selftest_config_text();

} // namespace fqg
