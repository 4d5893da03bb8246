// Command-line driver: exact counting, bound verification, sweeps, and
// spectral reports for relation graphs on F_q^d.
//
//   fqgraph count   --q 5 --d 2 --t 1 --relation dist --gen randn:m=20 --n 4 --paths 2
//   fqgraph verify  --theorem cycles --n 4 --q 5 --d 2 --t 1 --gen rand:p=0.5
//   fqgraph sweep   --config sweep.json --json out.json --csv out.csv
//   fqgraph spectra --q 5 --d 2 --t 1 --relation dist
//   fqgraph trees   --v 4
//   fqgraph selftest --json selftest.json
//
// Exit codes: 0 ok, 1 usage error, 2 theorem violation, 3 resource cap.

#include "fqgraph/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace {

using namespace fqg;

int exit_code_for_error(const Error& e) {
    switch (e.code()) {
        case Errc::TooLarge:
        case Errc::TooLong: return 3;
        default: return 1;
    }
}

void emit_json(const OrderedJson& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(path);
        if (!out) fail(Errc::BadConfig, "cannot write " + path);
        out << j.dump(2) << '\n';
    }
}

struct CommonOpts {
    std::int64_t q = 5;
    std::int64_t d = 2;
    std::uint32_t t = 1;
    std::string relation = "dist";
    std::string gen;
    std::string set_file;
    std::string phi_file;
    std::uint64_t seed = 0;
    std::string json_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--q", o.q, "prime modulus");
    cmd->add_option("--d", o.d, "dimension");
    cmd->add_option("--t", o.t, "relation parameter t");
    cmd->add_option("--relation", o.relation, "dist | prod | custom");
    cmd->add_option("--gen", o.gen, "set recipe (full, rand:p=, randn:m=, sphere:t=, prod:A=, file:PATH)");
    cmd->add_option("--set", o.set_file, "point-set file (shorthand for file:PATH)");
    cmd->add_option("--phi-file", o.phi_file, "custom relation table: lines 'x1..xd y1..yd value'");
    cmd->add_option("--seed", o.seed, "seed for random recipes");
    cmd->add_option("--json", o.json_path, "write JSON output here (default stdout)");
}

std::string resolved_recipe(const CommonOpts& o) {
    if (!o.set_file.empty()) return "file:" + o.set_file;
    if (!o.gen.empty()) return o.gen;
    return "full";
}

PhiFn load_phi_file(const FieldCtx& ctx, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::FileFormat, "cannot open phi file " + path);
    auto table = std::make_shared<std::unordered_map<std::uint64_t, std::uint32_t>>();
    std::uint32_t default_value = 0;
    const std::uint64_t vol = ctx.volume();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        std::string first;
        row >> first;
        if (first == "default") {
            std::int64_t v;
            if (!(row >> v)) fail(Errc::FileFormat, "bad default line in phi file");
            default_value = static_cast<std::uint32_t>(((v % ctx.q) + ctx.q) % ctx.q);
            continue;
        }
        row.clear();
        row.str(line);
        Point x(ctx.d), y(ctx.d);
        std::int64_t v = 0;
        for (auto* p : {&x, &y})
            for (std::uint32_t i = 0; i < ctx.d; ++i) {
                std::int64_t c;
                if (!(row >> c) || c < 0 || c >= static_cast<std::int64_t>(ctx.q))
                    fail(Errc::FileFormat, "bad coordinate in phi file line " + std::to_string(lineno));
                (*p)[i] = static_cast<std::uint32_t>(c);
            }
        if (!(row >> v)) fail(Errc::FileFormat, "missing value in phi file line " + std::to_string(lineno));
        (*table)[point_rank(ctx, x) * vol + point_rank(ctx, y)] =
            static_cast<std::uint32_t>(((v % ctx.q) + ctx.q) % ctx.q);
    }
    return [table, default_value, vol](const FieldCtx& c, const Point& x, const Point& y) -> std::uint32_t {
        auto it = table->find(point_rank(c, x) * vol + point_rank(c, y));
        return it == table->end() ? default_value : it->second;
    };
}

GraphSpec spec_from_opts(const FieldCtx& ctx, const CommonOpts& o, bool drop_loops) {
    GraphSpec spec;
    spec.relation = relation_from_string(o.relation);
    spec.t = o.t % ctx.q;
    spec.drop_loops = drop_loops;
    if (spec.relation == Relation::Custom) {
        if (o.phi_file.empty()) fail(Errc::MissingInput, "custom relation needs --phi-file");
        spec.phi = load_phi_file(ctx, o.phi_file);
    }
    return spec;
}

int cmd_count(const CommonOpts& o, const std::vector<unsigned>& ns, const std::vector<unsigned>& ks,
              bool nondeg, bool tree_bound, bool oracle, bool pairs, bool no_loops,
              const std::string& adj_path) {
    FieldCtx ctx = make_context(o.q, o.d);
    PointSet set = generate_set(ctx, resolved_recipe(o), o.seed);
    GraphSpec spec = spec_from_opts(ctx, o, no_loops);
    Graph graph = build_graph(set, spec);
    if (graph.zero_t_warning)
        std::cerr << "warning: t = 0; theorem verification refuses this parameter\n";

    if (!adj_path.empty()) {
        std::ofstream out(adj_path);
        if (!out) fail(Errc::BadConfig, "cannot write " + adj_path);
        write_adjacency(out, graph);
    }

    ResultRecord rec;
    rec.job_id = "count";
    rec.q = ctx.q;
    rec.d = ctx.d;
    rec.t = spec.t;
    rec.relation = spec.relation;
    rec.recipe = resolved_recipe(o);
    rec.seed = o.seed;
    rec.set_size = set.size();
    OrderedJson pair_matrices = OrderedJson::object();
    for (unsigned k : ks) {
        PathProfile p = total_paths(graph, k, pairs);
        rec.counts.emplace_back("P_" + std::to_string(k), p.total.str());
        if (pairs && p.pair_matrix) {
            OrderedJson rows = OrderedJson::array();
            for (std::size_t i = 0; i < p.pair_matrix->n; ++i) {
                OrderedJson row = OrderedJson::array();
                for (std::size_t j = 0; j < p.pair_matrix->n; ++j)
                    row.push_back(p.pair_matrix->at(i, j).str());
                rows.push_back(std::move(row));
            }
            pair_matrices["P_" + std::to_string(k)] = std::move(rows);
        }
    }
    for (unsigned n : ns) {
        CycleProfile c = cycle_count(graph, n);
        rec.counts.emplace_back("C_" + std::to_string(n), c.total.str());
        if (nondeg) rec.counts.emplace_back("N_" + std::to_string(n), nondegenerate_count(graph, n).str());
        if (tree_bound) rec.counts.emplace_back("D_" + std::to_string(n), degenerate_bound(graph, n).str());
        if (oracle) {
            rec.oracle_checked = true;
            if (oracle_cycles(set, spec, n) != c.total) rec.oracle_match = false;
            if (nondeg && oracle_nondegenerate(set, spec, n) != nondegenerate_count(graph, n))
                rec.oracle_match = false;
        }
    }
    if (graph.size() > 0 && spec.t != 0 && spec.relation != Relation::Custom)
        rec.reports.push_back(edge_report(graph));
    OrderedJson j = record_to_json(rec, false);
    if (pairs) j["pair_matrices"] = std::move(pair_matrices);
    emit_json(j, o.json_path);
    if (oracle && !rec.oracle_match) return 2;
    return exit_code_for({rec});
}

int cmd_verify(const CommonOpts& o, const std::vector<std::string>& theorems, unsigned n, unsigned k,
               unsigned r, double delta, double epsilon, std::int64_t fg_max, unsigned reps,
               const std::string& csv_path) {
    ExperimentConfig cfg;
    JobSpec job;
    job.id = "verify";
    job.q = static_cast<std::uint32_t>(o.q);
    job.d = static_cast<std::uint32_t>(o.d);
    job.t = o.t;
    job.relation = relation_from_string(o.relation);
    job.recipe = resolved_recipe(o);
    job.seed = o.seed;
    job.reps = reps;
    for (const std::string& name : theorems) {
        TheoremRequest treq;
        treq.id = theorem_from_string(name);
        treq.n = n;
        treq.k = k;
        treq.r = r;
        treq.delta = delta;
        treq.epsilon = epsilon;
        treq.fg_max = fg_max;
        job.theorems.push_back(treq);
    }
    cfg.jobs.push_back(job);
    cfg.json_path = o.json_path;
    cfg.csv_path = csv_path;

    std::vector<ResultRecord> records = run_experiment(cfg);
    write_outputs(cfg, records);
    if (o.json_path.empty()) std::cout << records_to_json(records, false).dump(2) << '\n';
    for (const ResultRecord& rec : records) {
        for (const BoundReport& rep : rec.reports)
            std::cerr << rep.theorem << ": " << verdict_name(rep.verdict) << " (slack " << rep.slack()
                      << ")\n";
        if (!rec.error.empty()) std::cerr << "error: " << rec.error << '\n';
    }
    return exit_code_for(records);
}

int cmd_sweep(const std::string& config_path, const std::string& json_path, const std::string& csv_path,
              const std::string& tsv_path, unsigned threads) {
    ExperimentConfig cfg = load_config_file(config_path);
    if (!json_path.empty()) cfg.json_path = json_path;
    if (!csv_path.empty()) cfg.csv_path = csv_path;
    if (!tsv_path.empty()) cfg.tsv_path = tsv_path;
    if (threads > 0) cfg.threads = threads;

    std::vector<ResultRecord> records = run_experiment(cfg);
    write_outputs(cfg, records);
    if (cfg.json_path.empty() && cfg.csv_path.empty() && cfg.tsv_path.empty())
        std::cout << records_to_json(records, cfg.include_timing).dump(2) << '\n';

    std::size_t pass = 0, failed = 0, vacuous = 0, conditional = 0, errors = 0;
    for (const ResultRecord& rec : records) {
        if (!rec.error.empty()) ++errors;
        for (const BoundReport& rep : rec.reports) {
            switch (rep.verdict) {
                case Verdict::Pass: ++pass; break;
                case Verdict::Fail: ++failed; break;
                case Verdict::Vacuous: ++vacuous; break;
                case Verdict::Conditional: ++conditional; break;
            }
        }
    }
    std::cerr << "sweep: " << records.size() << " records, " << pass << " pass, " << failed
              << " fail, " << vacuous << " vacuous, " << conditional << " conditional, " << errors
              << " errors\n";
    return exit_code_for(records);
}

int cmd_spectra(const CommonOpts& o) {
    FieldCtx ctx = make_context(o.q, o.d);
    OrderedJson j;
    j["q"] = ctx.q;
    j["d"] = ctx.d;
    j["t"] = o.t % ctx.q;
    j["relation"] = o.relation;
    if (o.t % ctx.q != 0) j["spectral"] = spectral_report_to_json(spectral_report(ctx, o.t));
    GraphSpec spec = spec_from_opts(ctx, o, false);
    j["smoothing"] = smoothing_report_to_json(smoothing_order(ctx, spec));
    emit_json(j, o.json_path);
    return 0;
}

int cmd_trees(unsigned v, const std::string& json_path) {
    std::vector<TreeShape> trees = enumerate_trees(v);
    // group isomorphism classes for reporting
    std::map<std::string, std::pair<std::size_t, const TreeShape*>> classes;
    for (const TreeShape& t : trees) {
        auto [it, fresh] = classes.try_emplace(tree_class_key(t), 0, &t);
        ++it->second.first;
    }
    OrderedJson j;
    j["v"] = v;
    j["labeled_trees"] = trees.size();
    OrderedJson arr = OrderedJson::array();
    for (const auto& [key, entry] : classes) {
        OrderedJson c;
        c["count"] = entry.first;
        OrderedJson pr = OrderedJson::array();
        for (unsigned x : canonical_pruefer(*entry.second)) pr.push_back(x);
        c["canonical_pruefer"] = std::move(pr);
        OrderedJson edges = OrderedJson::array();
        for (auto [a, b] : entry.second->edges) edges.push_back(OrderedJson::array({a, b}));
        c["representative_edges"] = std::move(edges);
        arr.push_back(std::move(c));
    }
    j["classes"] = std::move(arr);
    emit_json(j, json_path);
    return 0;
}

int cmd_selftest(const std::string& json_path, unsigned threads) {
    OrderedJson cfg_json = OrderedJson::parse(selftest_config_text());
    ExperimentConfig cfg = parse_config(cfg_json);
    if (threads > 0) cfg.threads = threads;
    cfg.json_path = json_path;
    std::vector<ResultRecord> records = run_experiment(cfg);
    if (json_path.empty())
        std::cout << records_to_json(records, false).dump(2) << '\n';
    else
        write_outputs(cfg, records);
    bool all_ok = true;
    for (const ResultRecord& rec : records) {
        if (!rec.error.empty() || !rec.oracle_match) all_ok = false;
        for (const BoundReport& rep : rec.reports)
            if (rep.fail()) all_ok = false;
    }
    std::cerr << "selftest: " << records.size() << " records, " << (all_ok ? "ok" : "FAILED") << '\n';
    int code = exit_code_for(records);
    if (code == 0 && !all_ok) code = 2;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact relation-graph counting and bound verification on F_q^d"};
    app.require_subcommand(1);

    CommonOpts count_opts, verify_opts, spectra_opts;
    std::vector<unsigned> count_ns, count_ks;
    bool count_nondeg = false, count_tree = false, count_oracle = false, count_pairs = false,
         count_no_loops = false;
    std::string count_adj;

    CLI::App* count = app.add_subcommand("count", "exact path/cycle/tree counts on one set");
    add_common(count, count_opts);
    count->add_option("--n", count_ns, "cycle lengths");
    count->add_option("--paths", count_ks, "path lengths");
    count->add_flag("--nondegenerate", count_nondeg, "also count distinct-vertex cycles");
    count->add_flag("--tree-bound", count_tree, "also compute the degenerate-cycle bound");
    count->add_flag("--oracle", count_oracle, "brute-force recount and assert equality");
    count->add_flag("--pairs", count_pairs, "materialize pairwise path-count matrices");
    count->add_flag("--no-loops", count_no_loops, "zero the adjacency diagonal");
    count->add_option("--adj", count_adj, "write the adjacency list here");

    std::vector<std::string> verify_theorems;
    unsigned verify_n = 4, verify_k = 2, verify_r = 2, verify_reps = 1;
    double verify_delta = 0.05, verify_epsilon = 0.2;
    std::int64_t verify_fg_max = 9;
    std::string verify_csv;
    CLI::App* verify = app.add_subcommand("verify", "check one or more bounds on one generated set");
    add_common(verify, verify_opts);
    verify->add_option("--theorem", verify_theorems, "theorem ids")->required();
    verify->add_option("--n", verify_n, "cycle length");
    verify->add_option("--k", verify_k, "path length");
    verify->add_option("--r", verify_r, "tree edge count");
    verify->add_option("--delta", verify_delta, "delta parameter");
    verify->add_option("--epsilon", verify_epsilon, "epsilon parameter");
    verify->add_option("--fg-max", verify_fg_max, "max value of random test functions");
    verify->add_option("--reps", verify_reps, "repetitions with derived seeds");
    verify->add_option("--csv", verify_csv, "write CSV rows here");

    std::string sweep_config, sweep_json, sweep_csv, sweep_tsv;
    unsigned sweep_threads = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "run an experiment config");
    sweep->add_option("--config", sweep_config, "experiment config JSON")->required();
    sweep->add_option("--json", sweep_json, "override JSON output path");
    sweep->add_option("--csv", sweep_csv, "override CSV output path");
    sweep->add_option("--tsv", sweep_tsv, "override TSV output path");
    sweep->add_option("--threads", sweep_threads, "worker threads");

    CLI::App* spectra = app.add_subcommand("spectra", "sphere, Fourier and smoothing reports");
    add_common(spectra, spectra_opts);

    unsigned trees_v = 4;
    std::string trees_json;
    CLI::App* trees = app.add_subcommand("trees", "enumerate labeled trees");
    trees->add_option("--v", trees_v, "vertex count (2..8)")->required();
    trees->add_option("--json", trees_json, "write JSON output here");

    std::string selftest_json;
    unsigned selftest_threads = 0;
    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in deterministic config");
    selftest->add_option("--json", selftest_json, "write JSON output here");
    selftest->add_option("--threads", selftest_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (count->parsed())
            return cmd_count(count_opts, count_ns, count_ks, count_nondeg, count_tree, count_oracle,
                             count_pairs, count_no_loops, count_adj);
        if (verify->parsed())
            return cmd_verify(verify_opts, verify_theorems, verify_n, verify_k, verify_r, verify_delta,
                              verify_epsilon, verify_fg_max, verify_reps, verify_csv);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_json, sweep_csv, sweep_tsv, sweep_threads);
        if (spectra->parsed()) return cmd_spectra(spectra_opts);
        if (trees->parsed()) return cmd_trees(trees_v, trees_json);
        if (selftest->parsed()) return cmd_selftest(selftest_json, selftest_threads);
    } catch (const fqg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
