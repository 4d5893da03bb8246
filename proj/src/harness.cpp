#include "fqgraph/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace fqg {

namespace {

void reject_unknown_keys(const OrderedJson& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                ok = true;
                break;
            }
        if (!ok) fail(Errc::BadConfig, "unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const OrderedJson& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(Errc::BadConfig, std::string("bad value for '") + key + "'");
    }
}

std::vector<unsigned> get_unsigned_list(const OrderedJson& obj, const char* key) {
    std::vector<unsigned> out;
    if (!obj.contains(key)) return out;
    const OrderedJson& arr = obj.at(key);
    if (!arr.is_array()) fail(Errc::BadConfig, std::string("'") + key + "' must be an array");
    for (const auto& v : arr) out.push_back(v.get<unsigned>());
    return out;
}

CountRequest parse_count(const OrderedJson& j) {
    reject_unknown_keys(j, {"cycles", "paths", "nondegenerate", "tree_bound", "pairs", "oracle"}, "count");
    CountRequest c;
    c.cycles = get_unsigned_list(j, "cycles");
    c.paths = get_unsigned_list(j, "paths");
    c.nondegenerate = get_or(j, "nondegenerate", false);
    c.tree_bound = get_or(j, "tree_bound", false);
    c.pairs = get_or(j, "pairs", false);
    c.oracle = get_or(j, "oracle", false);
    return c;
}

TheoremRequest parse_theorem(const OrderedJson& j) {
    reject_unknown_keys(j, {"id", "n", "k", "r", "delta", "epsilon", "fg_max"}, "theorem request");
    if (!j.contains("id")) fail(Errc::BadConfig, "theorem request needs an id");
    TheoremRequest t;
    t.id = theorem_from_string(j.at("id").get<std::string>());
    t.n = get_or(j, "n", 4u);
    t.k = get_or(j, "k", 2u);
    t.r = get_or(j, "r", 2u);
    t.delta = get_or(j, "delta", 0.05);
    t.epsilon = get_or(j, "epsilon", 0.2);
    t.fg_max = get_or<std::int64_t>(j, "fg_max", 9);
    return t;
}

JobSpec parse_job(const OrderedJson& j, std::size_t index) {
    reject_unknown_keys(j, {"id", "q", "d", "t", "relation", "set", "seed", "reps", "count", "theorems"},
                        "job");
    JobSpec job;
    job.id = get_or<std::string>(j, "id", "job" + std::to_string(index));
    if (!j.contains("q") || !j.contains("d")) fail(Errc::BadConfig, "job needs q and d");
    job.q = j.at("q").get<std::uint32_t>();
    job.d = j.at("d").get<std::uint32_t>();
    job.t = get_or(j, "t", 1u);
    job.relation = relation_from_string(get_or<std::string>(j, "relation", "dist"));
    job.recipe = get_or<std::string>(j, "set", "full");
    job.seed = get_or<std::uint64_t>(j, "seed", 0);
    job.reps = get_or(j, "reps", 1u);
    if (j.contains("count")) job.count = parse_count(j.at("count"));
    if (j.contains("theorems")) {
        for (const auto& t : j.at("theorems")) job.theorems.push_back(parse_theorem(t));
    }
    return job;
}

} // namespace

ExperimentConfig parse_config(const OrderedJson& j) {
    reject_unknown_keys(j, {"jobs", "output", "threads", "include_timing"}, "config");
    ExperimentConfig cfg;
    if (j.contains("jobs")) {
        if (!j.at("jobs").is_array()) fail(Errc::BadConfig, "'jobs' must be an array");
        std::size_t i = 0;
        for (const auto& job : j.at("jobs")) cfg.jobs.push_back(parse_job(job, i++));
    }
    if (j.contains("output")) {
        const OrderedJson& out = j.at("output");
        reject_unknown_keys(out, {"json", "csv", "tsv"}, "output");
        cfg.json_path = get_or<std::string>(out, "json", "");
        cfg.csv_path = get_or<std::string>(out, "csv", "");
        cfg.tsv_path = get_or<std::string>(out, "tsv", "");
    }
    cfg.threads = get_or(j, "threads", 1u);
    cfg.include_timing = get_or(j, "include_timing", false);
    if (cfg.threads == 0) cfg.threads = 1;
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::BadConfig, "cannot open config " + path);
    OrderedJson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::BadConfig, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

namespace {

constexpr double kOracleTupleCap = 1e8;

void run_counts(const JobSpec& job, const Graph& graph, ResultRecord& rec) {
    const CountRequest& req = job.count;
    for (unsigned k : req.paths) {
        PathProfile p = total_paths(graph, k, req.pairs);
        rec.counts.emplace_back("P_" + std::to_string(k), p.total.str());
    }
    for (unsigned n : req.cycles) {
        CycleProfile c = cycle_count(graph, n);
        rec.counts.emplace_back("C_" + std::to_string(n), c.total.str());
        if (req.nondegenerate) {
            Int nd = nondegenerate_count(graph, n);
            rec.counts.emplace_back("N_" + std::to_string(n), nd.str());
        }
        if (req.tree_bound) {
            Int db = degenerate_bound(graph, n);
            rec.counts.emplace_back("D_" + std::to_string(n), db.str());
        }
        if (req.oracle) {
            const double tuples = std::pow(static_cast<double>(graph.size()), n);
            if (tuples <= kOracleTupleCap) {
                rec.oracle_checked = true;
                if (oracle_cycles(graph.set, graph.spec, n) != c.total) rec.oracle_match = false;
                if (req.nondegenerate) {
                    Int nd = nondegenerate_count(graph, n);
                    if (oracle_nondegenerate(graph.set, graph.spec, n) != nd) rec.oracle_match = false;
                }
            }
        }
    }
}

void run_theorems(const JobSpec& job, const FieldCtx& ctx, const PointSet& set, const Graph& graph,
                  std::uint64_t rep_seed, ResultRecord& rec) {
    for (const TheoremRequest& treq : job.theorems) {
        VerifyInput vin;
        vin.graph = &graph;
        vin.n = treq.n;
        vin.k = treq.k;
        vin.t = graph.spec.t;
        vin.delta = treq.delta;
        vin.epsilon = treq.epsilon;
        vin.set = &set;
        vin.spec = &graph.spec;

        TreeShape tree = TreeShape::path(treq.r + 1);
        vin.tree = &tree;

        GridFunction fg = GridFunction::zeros_int(ctx), gg = GridFunction::zeros_int(ctx);
        IntMatrix fm, gm;
        if (treq.id == TheoremId::EdgeFunctional) {
            fg = random_grid_function(ctx, treq.fg_max, Rng::derive(rep_seed, 101));
            gg = random_grid_function(ctx, treq.fg_max, Rng::derive(rep_seed, 102));
            vin.f_grid = &fg;
            vin.g_grid = &gg;
        }
        if (treq.id == TheoremId::Bilinear || treq.id == TheoremId::BilinearDist ||
            treq.id == TheoremId::BilinearProd) {
            fm = random_pair_function(set.size(), treq.fg_max, Rng::derive(rep_seed, 201));
            gm = random_pair_function(set.size(), treq.fg_max, Rng::derive(rep_seed, 202));
            vin.f = &fm;
            vin.g = &gm;
        }
        rec.reports.push_back(verify(treq.id, vin));
    }
}

ResultRecord run_instance(const JobSpec& job, unsigned rep) {
    ResultRecord rec;
    rec.job_id = job.id;
    rec.rep = rep;
    rec.q = job.q;
    rec.d = job.d;
    rec.relation = job.relation;
    rec.seed = Rng::derive(job.seed, rep);

    auto started = std::chrono::steady_clock::now();
    try {
        FieldCtx ctx = make_context(job.q, job.d);
        rec.t = job.t % ctx.q;
        SetRecipe recipe = parse_recipe(job.recipe);
        if (!recipe.seed_explicit) recipe.seed = rec.seed;
        rec.recipe = recipe_to_string(recipe);
        PointSet set = generate_set(ctx, recipe);
        rec.set_size = set.size();

        GraphSpec spec;
        spec.relation = job.relation;
        spec.t = rec.t;
        Graph graph = build_graph(set, spec);

        run_counts(job, graph, rec);
        run_theorems(job, ctx, set, graph, rec.seed, rec);
    } catch (const Error& e) {
        rec.error = e.what();
        rec.error_code = errc_name(e.code());
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.error_code = "Unexpected";
    }
    rec.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

} // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
    struct Instance {
        const JobSpec* job;
        unsigned rep;
    };
    std::vector<Instance> instances;
    for (const JobSpec& job : config.jobs)
        for (unsigned rep = 0; rep < job.reps; ++rep) instances.push_back({&job, rep});

    std::vector<ResultRecord> records(instances.size());
    const unsigned threads = std::min<unsigned>(config.threads, std::max<std::size_t>(instances.size(), 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < instances.size(); ++i)
            records[i] = run_instance(*instances[i].job, instances[i].rep);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= instances.size()) return;
                    records[i] = run_instance(*instances[i].job, instances[i].rep);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return records;
}

OrderedJson report_to_json(const BoundReport& rep) {
    OrderedJson j;
    j["theorem"] = rep.theorem;
    j["verdict"] = verdict_name(rep.verdict);
    j["pass"] = rep.pass();
    j["vacuous"] = rep.vacuous();
    j["conditional"] = rep.conditional();
    j["hypothesis_satisfied"] = rep.hypothesis_satisfied;
    OrderedJson terms = OrderedJson::object();
    for (const auto& [name, value] : rep.hypothesis_terms) terms[name] = value;
    j["hypothesis_terms"] = std::move(terms);
    OrderedJson lhs;
    lhs["num"] = rep.lhs_exact.num.str();
    lhs["den"] = rep.lhs_exact.den.str();
    lhs["value"] = rep.lhs;
    lhs["exact"] = rep.lhs_is_exact;
    j["lhs"] = std::move(lhs);
    j["rhs"] = rep.rhs;
    j["slack"] = rep.slack();
    j["exact_comparison"] = rep.exact_comparison;
    j["note"] = rep.note;
    return j;
}

OrderedJson record_to_json(const ResultRecord& rec, bool include_timing) {
    OrderedJson j;
    j["job"] = rec.job_id;
    j["rep"] = rec.rep;
    OrderedJson input;
    input["q"] = rec.q;
    input["d"] = rec.d;
    input["t"] = rec.t;
    input["relation"] = relation_name(rec.relation);
    input["recipe"] = rec.recipe;
    input["seed"] = rec.seed;
    input["E_size"] = rec.set_size;
    j["input"] = std::move(input);
    OrderedJson counts = OrderedJson::object();
    for (const auto& [name, value] : rec.counts) counts[name] = value;
    j["counts"] = std::move(counts);
    OrderedJson reports = OrderedJson::array();
    for (const BoundReport& rep : rec.reports) reports.push_back(report_to_json(rep));
    j["reports"] = std::move(reports);
    OrderedJson oracle;
    oracle["checked"] = rec.oracle_checked;
    oracle["match"] = rec.oracle_match;
    j["oracle"] = std::move(oracle);
    j["error"] = rec.error;
    j["error_code"] = rec.error_code;
    if (include_timing) j["timing_ms"] = rec.timing_ms;
    return j;
}

OrderedJson records_to_json(const std::vector<ResultRecord>& records, bool include_timing) {
    OrderedJson j;
    OrderedJson arr = OrderedJson::array();
    for (const ResultRecord& rec : records) arr.push_back(record_to_json(rec, include_timing));
    j["records"] = std::move(arr);
    return j;
}

OrderedJson spectral_report_to_json(const SpectralReport& rep) {
    OrderedJson j;
    j["t"] = rep.t;
    j["sphere_size"] = rep.sphere_size;
    j["size_deviation"] = rep.size_deviation;
    j["size_bound"] = rep.size_bound;
    j["size_sq_deviation"] = rep.size_sq_deviation.str();
    j["size_sq_bound"] = rep.size_sq_bound;
    j["max_nonzero_coeff"] = rep.max_nonzero_coeff;
    j["coeff_bound"] = rep.coeff_bound;
    j["size_pass"] = rep.size_pass;
    j["d2_pass"] = rep.d2_pass;
    j["doubling_pass"] = rep.doubling_pass;
    j["size_sq_pass"] = rep.size_sq_pass;
    j["coeff_pass"] = rep.coeff_pass;
    j["passes"] = rep.passes;
    return j;
}

OrderedJson smoothing_report_to_json(const SmoothingReport& rep) {
    OrderedJson j;
    j["sigma_max"] = rep.sigma_max;
    if (std::isfinite(rep.alpha_estimate))
        j["alpha_estimate"] = rep.alpha_estimate;
    else
        j["alpha_estimate"] = "inf";
    j["c_constant"] = rep.c_constant;
    j["size_condition_min"] = rep.size_condition_min;
    j["size_condition_max"] = rep.size_condition_max;
    j["has_degenerate_row"] = rep.has_degenerate_row;
    j["degenerate_row_sum"] = rep.degenerate_row_sum;
    j["iterations"] = rep.iterations;
    return j;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::string render_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << "job,rep,q,d,t,relation,E_size,seed,theorem,verdict,hypothesis_satisfied,lhs,rhs,slack\n";
    out.precision(17);
    for (const ResultRecord& rec : records) {
        for (const BoundReport& rep : rec.reports) {
            out << csv_escape(rec.job_id) << ',' << rec.rep << ',' << rec.q << ',' << rec.d << ','
                << rec.t << ',' << relation_name(rec.relation) << ',' << rec.set_size << ','
                << rec.seed << ',' << rep.theorem << ',' << verdict_name(rep.verdict) << ','
                << (rep.hypothesis_satisfied ? "true" : "false") << ',' << rep.lhs << ',' << rep.rhs
                << ',' << rep.slack() << '\n';
        }
    }
    return out.str();
}

std::string render_tsv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << "# job\trep\tq\td\tt\trelation\tE_size\ttheorem\tlhs\trhs\tslack\n";
    out.precision(17);
    for (const ResultRecord& rec : records) {
        for (const BoundReport& rep : rec.reports) {
            out << rec.job_id << '\t' << rec.rep << '\t' << rec.q << '\t' << rec.d << '\t' << rec.t
                << '\t' << relation_name(rec.relation) << '\t' << rec.set_size << '\t' << rep.theorem
                << '\t' << rep.lhs << '\t' << rep.rhs << '\t' << rep.slack() << '\n';
        }
    }
    return out.str();
}

void write_outputs(const ExperimentConfig& config, const std::vector<ResultRecord>& records) {
    if (!config.json_path.empty()) {
        std::ofstream out(config.json_path);
        if (!out) fail(Errc::BadConfig, "cannot write " + config.json_path);
        out << records_to_json(records, config.include_timing).dump(2) << '\n';
    }
    if (!config.csv_path.empty()) {
        std::ofstream out(config.csv_path);
        if (!out) fail(Errc::BadConfig, "cannot write " + config.csv_path);
        out << render_csv(records);
    }
    if (!config.tsv_path.empty()) {
        std::ofstream out(config.tsv_path);
        if (!out) fail(Errc::BadConfig, "cannot write " + config.tsv_path);
        out << render_tsv(records);
    }
}

int exit_code_for(const std::vector<ResultRecord>& records) {
    bool violation = false, resource = false;
    for (const ResultRecord& rec : records) {
        for (const BoundReport& rep : rec.reports)
            if (rep.fail()) violation = true;
        if (rec.error_code == errc_name(Errc::TooLarge) || rec.error_code == errc_name(Errc::TooLong))
            resource = true;
    }
    if (violation) return 2;
    if (resource) return 3;
    return 0;
}

std::string selftest_config_text() {
    return R"JSON({
  "jobs": [
    {
      "id": "counts-dist",
      "q": 5, "d": 2, "t": 1, "relation": "dist",
      "set": "randn:m=12", "seed": 11, "reps": 2,
      "count": {"cycles": [3, 4], "paths": [1, 2, 3], "nondegenerate": true, "tree_bound": true, "oracle": true}
    },
    {
      "id": "counts-prod",
      "q": 3, "d": 3, "t": 1, "relation": "prod",
      "set": "rand:p=0.4", "seed": 12, "reps": 2,
      "count": {"cycles": [3, 4], "paths": [1, 2], "nondegenerate": true, "oracle": true}
    },
    {
      "id": "verify-paths",
      "q": 5, "d": 3, "t": 1, "relation": "prod",
      "set": "randn:m=110", "seed": 13, "reps": 2,
      "theorems": [{"id": "paths", "k": 2}, {"id": "edge_identity"}, {"id": "path_growth", "k": 4}]
    },
    {
      "id": "verify-bilinear",
      "q": 5, "d": 2, "t": 1, "relation": "dist",
      "set": "randn:m=20", "seed": 14, "reps": 2,
      "theorems": [{"id": "bilinear", "fg_max": 5}, {"id": "edge_functional", "fg_max": 5},
                   {"id": "path_recursion", "n": 4}, {"id": "cycles", "n": 4},
                   {"id": "tree_embed", "r": 2, "epsilon": 0.2}]
    }
  ],
  "threads": 1,
  "include_timing": false
})JSON";
}

} // namespace fqg
