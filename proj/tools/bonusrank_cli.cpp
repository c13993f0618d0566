#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bonusrank/arrangement.hpp"
#include "bonusrank/baselines.hpp"
#include "bonusrank/core.hpp"
#include "bonusrank/datagen.hpp"
#include "bonusrank/ermb.hpp"
#include "bonusrank/io.hpp"
#include "bonusrank/milp.hpp"
#include "bonusrank/skyline.hpp"

using namespace bonusrank;

namespace {

enum Exit { kOk = 0, kInfeasible = 1, kInputError = 2, kLimit = 3, kInternal = 4 };

int exit_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::Feasible: return kOk;
        case SolveStatus::Infeasible: return kInfeasible;
        case SolveStatus::Limit: return kLimit;
    }
    return kInternal;
}

Quadrant parse_quadrant(const std::string& q) {
    if (q == "positive") return Quadrant::Positive;
    if (q == "full") return Quadrant::Full;
    throw InputError("--quadrant must be positive or full");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct SolveFlags {
    std::string solver = "milp-refined";
    std::string variant = "multigroup";
    std::size_t g = 1, k = 0;
    double epsilon = kDefaultEpsilon, vmax = kDefaultVmax, big_m = kDefaultVmax;
    double time_limit = 0.0;
    std::size_t node_limit = 0;
    std::string quadrant = "positive";
    std::size_t samples = 10000, iterations = 500;
    double step = 0.1;
    std::uint64_t seed = 0;
    bool no_skyline = false;
    bool no_heuristic = false;
    bool k_given = false;
};

struct Outcome {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Explanation> explanation;
    std::size_t work = 0;  // nodes, regions or samples
    std::string note;
};

Outcome run_solver(const Dataset& ds, const Ranking& pi, const SolveFlags& f) {
    Outcome o;
    Quadrant q = parse_quadrant(f.quadrant);
    if (f.solver == "ermb") {
        ErmbOptions opt;
        opt.time_limit = f.time_limit;
        ErmbResult r = f.variant == "singleton" ? explain_singleton(ds, pi, f.k, q, opt)
                                                : explain_multigroup(ds, pi, f.g, f.k, q, opt);
        o.status = r.status;
        o.work = r.regions;
        if (r.status == SolveStatus::Feasible) o.explanation = r.explanation;
        if (r.min_k) o.note = "minimum bonus tuples: " + std::to_string(*r.min_k);
        return o;
    }
    if (f.solver == "milp-refined" || f.solver == "milp-base") {
        MilpModel m;
        if (f.solver == "milp-refined") {
            std::set<std::string> forced;
            if (!f.no_skyline)
                for (const auto& rec : forced_bonus_tuples(ds, pi)) forced.insert(rec.forced_id);
            m = encode_refined(ds, pi, f.g, f.k, f.epsilon, f.vmax, forced);
            o.note = "skyline-forced tuples: " + std::to_string(forced.size());
        } else {
            m = encode_base(ds, pi, f.g, f.k, f.big_m);
        }
        MilpLimits lim;
        lim.time_limit = f.time_limit;
        lim.node_limit = f.node_limit;
        lim.root_heuristic = !f.no_heuristic;
        auto s = solve_bnb(m, lim);
        o.status = s.status;
        o.work = s.node_count;
        if (s.status == SolveStatus::Feasible) o.explanation = decode(m, s, ds);
        return o;
    }
    if (f.solver == "sampling" || f.solver == "logistic") {
        std::vector<double> w;
        if (f.solver == "sampling") {
            SamplingBudget b{f.samples, f.time_limit};
            auto r = sampling_baseline(ds, pi, b, f.seed, q);
            w = r.weights;
            o.work = r.samples_tried;
        } else {
            w = pairwise_logistic(ds, pi, f.iterations, f.step, q);
            o.work = f.iterations;
        }
        Explanation e = explanation_for_weights(ds, pi, w);
        e.provenance.solver = f.solver;
        e.provenance.params = {{"quadrant", f.quadrant}, {"seed", std::to_string(f.seed)}};
        o.status = !f.k_given || e.bonus_count() <= f.k ? SolveStatus::Feasible : SolveStatus::Infeasible;
        o.note = "bonus tuples needed: " + std::to_string(e.bonus_count());
        if (o.status == SolveStatus::Feasible) o.explanation = std::move(e);
        return o;
    }
    throw InputError("unknown solver '" + f.solver + "'");
}

void add_solver_flags(CLI::App* c, SolveFlags& f) {
    c->add_option("--solver", f.solver, "ermb | milp-refined | milp-base | sampling | logistic")
        ->check(CLI::IsMember({"ermb", "milp-refined", "milp-base", "sampling", "logistic"}));
    c->add_option("--variant", f.variant, "ermb only: singleton | multigroup")
        ->check(CLI::IsMember({"singleton", "multigroup"}));
    c->add_option("--g", f.g, "number of bonus groups");
    c->add_option("--k", f.k, "maximum number of bonus-receiving tuples (baselines: optional)");
    c->add_option("--epsilon", f.epsilon, "milp-refined: gap between consecutive tuples");
    c->add_option("--vmax", f.vmax, "milp-refined: bonus upper bound");
    c->add_option("--bigM", f.big_m, "milp-base: bonus upper bound used in the linearization");
    c->add_option("--time-limit", f.time_limit, "seconds, 0 for none");
    c->add_option("--node-limit", f.node_limit, "milp: maximum branch-and-bound nodes, 0 for none");
    c->add_option("--quadrant", f.quadrant, "weight cone: positive | full")->check(CLI::IsMember({"positive", "full"}));
    c->add_option("--samples", f.samples, "sampling: number of directions");
    c->add_option("--iterations", f.iterations, "logistic: gradient steps");
    c->add_option("--step", f.step, "logistic: step size");
    c->add_option("--seed", f.seed, "random seed");
    c->add_flag("--no-skyline", f.no_skyline, "milp-refined: skip skyline forcing");
    c->add_flag("--no-heuristic", f.no_heuristic, "milp-refined: plain branch and bound");
}

// Flags that only make sense for one solver must not be given to another.
void check_exclusive(CLI::App* c, const SolveFlags& f) {
    auto given = [&](const char* name) { return c->count(name) > 0; };
    auto only = [&](const char* flag, std::initializer_list<const char*> solvers) {
        if (!given(flag)) return;
        for (auto s : solvers)
            if (f.solver == s) return;
        throw InputError(std::string(flag) + " does not apply to solver " + f.solver);
    };
    bool baseline = f.solver == "sampling" || f.solver == "logistic";
    if (!baseline && !given("--k")) throw InputError("--k is required for solver " + f.solver);
    only("--variant", {"ermb"});
    only("--epsilon", {"milp-refined"});
    only("--vmax", {"milp-refined"});
    only("--no-skyline", {"milp-refined"});
    only("--no-heuristic", {"milp-refined"});
    only("--bigM", {"milp-base"});
    only("--node-limit", {"milp-refined", "milp-base"});
    only("--samples", {"sampling"});
    only("--iterations", {"logistic"});
    only("--step", {"logistic"});
    if (f.solver == "milp-refined" && f.quadrant != "positive")
        throw InputError("milp-refined works over non-negative weights; --quadrant full is not available");
    if (f.solver == "milp-base" && c->count("--quadrant"))
        throw InputError("milp-base has no quadrant restriction (weights are sign-free)");
}

std::string summary_line(const std::string& key, const std::string& value) { return key + ": " + value + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explain a ranking by a linear scoring function with additive group bonuses"};
    app.require_subcommand(1);
    std::size_t threads = 1;
    app.add_option("--threads", threads, "worker threads (kernels currently run on one)")->check(CLI::PositiveNumber);

    std::string data, ranking, out, expl_path;

    auto* explain = app.add_subcommand("explain", "find weights and bonuses realizing the ranking");
    SolveFlags ef;
    explain->add_option("--data", data, "dataset CSV")->required();
    explain->add_option("--ranking", ranking, "ranking file, one id per line, best first")->required();
    explain->add_option("--out", out, "explanation JSON (default: stdout)");
    add_solver_flags(explain, ef);

    auto* verify = app.add_subcommand("verify", "check an explanation against a ranking");
    double tol = kVerifyTol;
    verify->add_option("--data", data)->required();
    verify->add_option("--ranking", ranking)->required();
    verify->add_option("--explanation", expl_path)->required();
    verify->add_option("--tol", tol, "verification tolerance");

    auto* generate = app.add_subcommand("generate", "synthetic planted instance");
    GenParams gp;
    std::string dist = "uniform";
    generate->add_option("--n", gp.n)->required();
    generate->add_option("--d", gp.d)->required();
    generate->add_option("--g", gp.g);
    generate->add_option("--k", gp.k)->required();
    generate->add_option("--dist", dist)->check(CLI::IsMember({"uniform", "zipf"}));
    generate->add_option("--seed", gp.seed);
    generate->add_option("--out", out, "output prefix: <out>.csv, <out>_ranking.txt, <out>_planted.json")->required();

    auto* reduce = app.add_subcommand("reduce", "MAX-1-in-2-SAT reduction instance");
    std::string cnf;
    std::size_t r_target = 0, block = 0;
    reduce->add_option("--cnf", cnf, "2-CNF file: two signed literals per line")->required();
    reduce->add_option("--r", r_target, "target number of exactly-one clauses")->required();
    reduce->add_option("--block-size", block, "padding points per gap (default n_vars^2)");
    reduce->add_option("--out", out, "output prefix: <out>.csv, <out>_ranking.txt, <out>_info.json")->required();

    auto* forced = app.add_subcommand("forced", "tuples that need a bonus under non-negative weights");
    forced->add_option("--data", data)->required();
    forced->add_option("--ranking", ranking)->required();
    forced->add_option("--out", out, "CSV (default: stdout)");

    auto* regions = app.add_subcommand("regions", "enumerate sign regions of the comparison arrangement");
    std::string rq = "positive";
    std::size_t max_regions = 0;
    regions->add_option("--data", data)->required();
    regions->add_option("--quadrant", rq)->check(CLI::IsMember({"positive", "full"}));
    regions->add_option("--max-regions", max_regions, "refuse beyond this many regions (0: unlimited)");
    regions->add_option("--out", out, "witness CSV (default: stdout)");

    auto* exportm = app.add_subcommand("export-model", "write the MILP encoding in LP or MPS text");
    std::string encoding = "refined", format = "lp";
    std::size_t xg = 1, xk = 0;
    double xeps = kDefaultEpsilon, xvmax = kDefaultVmax, xbigm = kDefaultVmax;
    bool x_no_skyline = false;
    exportm->add_option("--data", data)->required();
    exportm->add_option("--ranking", ranking)->required();
    exportm->add_option("--encoding", encoding)->check(CLI::IsMember({"base", "refined"}));
    exportm->add_option("--format", format)->check(CLI::IsMember({"lp", "mps"}));
    exportm->add_option("--g", xg);
    exportm->add_option("--k", xk)->required();
    exportm->add_option("--epsilon", xeps);
    exportm->add_option("--vmax", xvmax);
    exportm->add_option("--bigM", xbigm);
    exportm->add_flag("--no-skyline", x_no_skyline);
    exportm->add_option("--out", out, "model file (default: stdout)");

    auto* bench = app.add_subcommand("bench", "solver grid over generated instances");
    std::vector<std::string> solvers{"ermb", "milp-refined", "sampling"};
    std::vector<std::size_t> bn{50}, bd{2}, bk{5};
    std::vector<std::uint64_t> bseeds{0};
    std::size_t bg = 1;
    std::string bdist = "uniform", report = "csv";
    double btime = 60.0;
    bench->add_option("--solvers", solvers)->delimiter(',');
    bench->add_option("--n", bn)->delimiter(',');
    bench->add_option("--d", bd)->delimiter(',');
    bench->add_option("--k", bk)->delimiter(',');
    bench->add_option("--g", bg);
    bench->add_option("--seeds", bseeds)->delimiter(',');
    bench->add_option("--dist", bdist)->check(CLI::IsMember({"uniform", "zipf"}));
    bench->add_option("--time-limit", btime, "per run, seconds");
    bench->add_option("--report", report)->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--out", out, "report file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (explain->parsed()) {
            ef.k_given = explain->count("--k") > 0;
            check_exclusive(explain, ef);
            auto ds = read_dataset_csv_file(data);
            auto pi = read_ranking_file(ranking);
            auto t0 = std::chrono::steady_clock::now();
            Outcome o = run_solver(ds, pi, ef);
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::string s = summary_line("status", to_string(o.status)) + summary_line("solver", ef.solver);
            if (o.explanation) {
                auto rep = verify_realization(ds, pi, *o.explanation);
                s += summary_line("bonus tuples", std::to_string(o.explanation->bonus_count()));
                s += summary_line("min_gap", format_double(rep.min_gap));
                write_text(out, explanation_to_json(*o.explanation) + "\n");
            }
            if (!o.note.empty()) s += o.note + "\n";
            s += summary_line("work", std::to_string(o.work));
            s += summary_line("wall_ms", format_double(std::round(ms * 1000.0) / 1000.0));
            std::cerr << s;
            return exit_for(o.status);
        }
        if (verify->parsed()) {
            auto ds = read_dataset_csv_file(data);
            auto pi = read_ranking_file(ranking);
            auto e = read_explanation_file(expl_path);
            auto rep = verify_realization(ds, pi, e, tol);
            std::cout << (rep.ok ? "ok" : "violated") << "\n";
            std::cout << "min_gap: " << format_double(rep.min_gap) << "\n";
            if (rep.first_violation)
                std::cout << "first violation: " << rep.first_violation->first << " above "
                          << rep.first_violation->second << "\n";
            return rep.ok ? kOk : kInfeasible;
        }
        if (generate->parsed()) {
            gp.dist = parse_distribution(dist);
            auto inst = gen_synthetic(gp);
            write_dataset_csv_file(out + ".csv", inst.dataset);
            write_ranking_file(out + "_ranking.txt", inst.pi);
            write_explanation_file(out + "_planted.json", inst.explanation());
            return kOk;
        }
        if (reduce->parsed()) {
            auto F = parse_two_cnf_text(read_text(cnf));
            auto inst = reduce_max1in2sat(F, r_target, block);
            write_dataset_csv_file(out + ".csv", inst.dataset);
            write_ranking_file(out + "_ranking.txt", inst.pi);
            nlohmann::ordered_json info;
            info["n_vars"] = F.n_vars;
            info["m"] = F.m();
            info["r"] = r_target;
            info["k_decision"] = inst.k_decision;
            info["ell"] = inst.ell;
            info["clause_points"] = inst.clause_point_ids;
            if (F.n_vars <= 20) {
                info["oracle_max1in2sat"] = oracle_max1in2sat(F);
                info["oracle_min_bonuses"] = oracle_reduction_min_bonuses(inst);
            }
            write_text(out + "_info.json", info.dump(2) + "\n");
            std::cout << "k_decision: " << inst.k_decision << "\n";
            return kOk;
        }
        if (forced->parsed()) {
            auto ds = read_dataset_csv_file(data);
            auto pi = read_ranking_file(ranking);
            std::ostringstream o;
            o << "forced_id,witness_id,iteration\n";
            for (const auto& rec : forced_bonus_tuples(ds, pi))
                o << rec.forced_id << ',' << rec.witness_id << ',' << rec.iteration << '\n';
            write_text(out, o.str());
            return kOk;
        }
        if (regions->parsed()) {
            auto ds = read_dataset_csv_file(data);
            RegionOptions opt;
            opt.max_regions = max_regions;
            std::ostringstream o;
            o << "region";
            for (std::size_t j = 1; j <= ds.d(); ++j) o << ",w_" << j;
            o << ",margin\n";
            std::size_t count = 0;
            auto stats = enumerate_regions(
                ds, parse_quadrant(rq),
                [&](const SignRegion& r) {
                    o << ++count;
                    for (double x : r.witness) o << ',' << format_double(x);
                    o << ',' << format_double(r.margin) << '\n';
                    return true;
                },
                opt);
            write_text(out, o.str());
            std::cerr << "regions: " << count << "\nthin cells skipped: " << stats.thin_skipped << "\n";
            return kOk;
        }
        if (exportm->parsed()) {
            auto ds = read_dataset_csv_file(data);
            auto pi = read_ranking_file(ranking);
            MilpModel m;
            if (encoding == "refined") {
                std::set<std::string> fs;
                if (!x_no_skyline)
                    for (const auto& rec : forced_bonus_tuples(ds, pi)) fs.insert(rec.forced_id);
                m = encode_refined(ds, pi, xg, xk, xeps, xvmax, fs);
            } else {
                m = encode_base(ds, pi, xg, xk, xbigm);
            }
            write_text(out, export_model(m, format == "lp" ? ModelFormat::Lp : ModelFormat::Mps));
            return kOk;
        }
        if (bench->parsed()) {
            Distribution dd = parse_distribution(bdist);
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            std::ostringstream csv;
            csv << "solver,n,d,g,k,seed,status,bonus_count,wall_ms,nodes_or_regions\n";
            for (auto n : bn)
                for (auto d : bd)
                    for (auto k : bk)
                        for (auto seed : bseeds) {
                            auto inst = gen_synthetic(n, d, bg, std::min(k, n), dd, seed);
                            for (const auto& solver : solvers) {
                                SolveFlags f;
                                f.solver = solver;
                                f.g = bg;
                                f.k = k;
                                f.seed = seed;
                                f.time_limit = btime;
                                if (solver == "ermb") f.variant = "singleton";
                                std::string status;
                                Outcome o;
                                auto t0 = std::chrono::steady_clock::now();
                                try {
                                    o = run_solver(inst.dataset, inst.pi, f);
                                    status = to_string(o.status);
                                } catch (const RefusalError&) {
                                    status = "refused";
                                }
                                double ms = std::chrono::duration<double, std::milli>(
                                                std::chrono::steady_clock::now() - t0)
                                                .count();
                                std::string bc = o.explanation ? std::to_string(o.explanation->bonus_count()) : "";
                                csv << solver << ',' << n << ',' << d << ',' << bg << ',' << k << ',' << seed << ','
                                    << status << ',' << bc << ',' << format_double(std::round(ms * 1000) / 1000) << ','
                                    << o.work << '\n';
                                rows.push_back({{"solver", solver}, {"n", n}, {"d", d}, {"g", bg}, {"k", k},
                                                {"seed", seed}, {"status", status}, {"bonus_count", bc},
                                                {"wall_ms", ms}, {"nodes_or_regions", o.work}});
                            }
                        }
            write_text(out, report == "csv" ? csv.str() : rows.dump(2) + "\n");
            return kOk;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const DegenerateColumnError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const RefusalError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kLimit;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
