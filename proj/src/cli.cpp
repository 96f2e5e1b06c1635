#include "dim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dim/io.hpp"
#include "dim/oracle.hpp"

namespace dim {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Json edge_json(Edge e) { return Json::array({e.u + 1, e.v + 1}); }

Json matching_json(const EdgeSet& m) {
    Json out = Json::array();
    for (const Edge& e : m) out.push_back(edge_json(e));
    return out;
}

Json witness_json(const PatternWitness& w) {
    Json out;
    out["pattern"] = w.name();
    Json vertices = Json::array();
    for (Vertex v : w.vertices) vertices.push_back(v + 1);
    out["vertices"] = vertices;
    if (w.pattern == Pattern::Diamond) out["mid_edge"] = edge_json(w.mid_edge());
    if (w.pattern == Pattern::Butterfly) {
        Json p = Json::array();
        for (const Edge& e : w.peripheral_edges()) p.push_back(edge_json(e));
        out["peripheral_edges"] = p;
    }
    return out;
}

Json trace_json(const Trace& t) {
    Json out = Json::object();
    for (std::size_t r = 0; r < kRuleCount; ++r)
        if (t.fired[r]) out[rule_name(static_cast<Rule>(r))] = t.fired[r];
    return out;
}

Json audit_json(const AuditCounters& a) {
    Json out;
    auto pair = [&](const char* name, std::uint64_t checks, std::uint64_t violations) {
        out[name] = Json{{"checks", checks}, {"violations", violations}};
    };
    pair("y_s122_free", a.y_s122_checks, a.y_s122_violations);
    pair("y_claw_free", a.y_claw_checks, a.y_claw_violations);
    pair("n3_bipartite", a.n3_bipartite_checks, a.n3_bipartite_violations);
    pair("interacting_at_most_3", a.interacting_checks, a.interacting_violations);
    pair("m_edge_levels", a.m_edge_level_checks, a.m_edge_level_violations);
    pair("p5_endpoint", a.p5_endpoint_checks, a.p5_endpoint_violations);
    pair("enumeration_bound", a.enumeration_checks, a.enumeration_violations);
    out["propagation_stalls"] = a.propagation_stalls;
    out["max_interacting"] = a.max_interacting;
    out["violations"] = a.violations();
    return out;
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Found: return kExitFound;
        case Verdict::ClassViolation: return kExitClassViolation;
        default: return kExitNoDim;
    }
}

std::string lower_compact(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out += static_cast<char>(std::tolower(ch));
    return out;
}

std::string format_weight(double w) {
    std::ostringstream s;
    s << w;
    return s.str();
}

// --- compare ---------------------------------------------------------------

struct Instance {
    std::string id;
    Graph graph;
};

struct Row {
    Verdict solver = Verdict::NoDim;
    bool oracle = false;
    bool agree = true;
    std::string problem;
    double delta = 0;
    double solver_seconds = 0;
    double oracle_seconds = 0;
};

Row compare_one(const Graph& g, bool minimize, AuditCounters& audit) {
    Row row;
    SolveOptions opts;
    opts.minimize = minimize;
    opts.audit = true;
    SolveStats stats;
    auto t0 = Clock::now();
    SolveOutcome s;
    try {
        s = solve(g, opts, &stats);
    } catch (const std::exception& e) {
        row.agree = false;
        row.problem = std::string("solver threw: ") + e.what();
        return row;
    }
    row.solver_seconds = since(t0);
    audit.merge(stats.audit);
    t0 = Clock::now();
    auto o = oracle_solve(g, minimize ? OracleMode::MinWeight : OracleMode::Exists);
    row.oracle_seconds = since(t0);
    row.solver = s.verdict;
    row.oracle = o.feasible;
    if ((s.verdict == Verdict::Found) != o.feasible) {
        row.agree = false;
        row.problem = "verdicts differ";
    } else if (s.verdict == Verdict::Found) {
        if (!is_dim(g, s.matching)) {
            row.agree = false;
            row.problem = "solver matching is not a d.i.m.";
        } else if (minimize) {
            row.delta = s.weight - g.weight(*o.best);
            if (row.delta != 0) {
                row.agree = false;
                row.problem = "weights differ";
            }
        }
    }
    return row;
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t i = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1) + 0.5);
    return v[std::min(i, v.size() - 1)];
}

class CompareRun {
public:
    CompareRun(bool minimize, unsigned threads, std::string reproducer)
        : minimize_(minimize), threads_(std::max(1u, threads)), reproducer_(std::move(reproducer)) {}

    void add(Instance inst) {
        batch_.push_back(std::move(inst));
        if (batch_.size() >= 4096) flush();
    }

    void flush() {
        std::vector<Row> rows(batch_.size());
        std::vector<AuditCounters> audits(threads_);
        std::atomic<std::size_t> next{0};
        auto work = [&](unsigned id) {
            for (std::size_t i = next++; i < batch_.size(); i = next++)
                rows[i] = compare_one(batch_[i].graph, minimize_, audits[id]);
        };
        if (threads_ == 1 || batch_.size() < 2) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads_; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        for (const auto& a : audits) audit_.merge(a);
        for (std::size_t i = 0; i < rows.size(); ++i) record(batch_[i], rows[i]);
        batch_.clear();
    }

    Json report() {
        flush();
        Json out;
        out["schema"] = 1;
        out["instances"] = total_;
        out["disagreements"] = disagreements_;
        Json matrix = Json::object();
        for (const auto& [key, count] : matrix_) matrix[key] = count;
        out["agreement_matrix"] = matrix;
        if (minimize_) out["max_weight_delta"] = max_delta_;
        if (first_bad_) out["first_disagreement"] = *first_bad_;
        out["audit"] = audit_json(audit_);
        out["timings"] = Json{{"solver_p50", percentile(solver_times_, 0.5)},
                              {"solver_p90", percentile(solver_times_, 0.9)},
                              {"solver_p99", percentile(solver_times_, 0.99)},
                              {"oracle_p50", percentile(oracle_times_, 0.5)},
                              {"oracle_p90", percentile(oracle_times_, 0.9)},
                              {"oracle_p99", percentile(oracle_times_, 0.99)}};
        return out;
    }

    std::uint64_t total() const { return total_; }
    std::uint64_t disagreements() const { return disagreements_; }

private:
    void record(const Instance& inst, const Row& row) {
        ++total_;
        matrix_[std::string(verdict_name(row.solver)) + "/" + (row.oracle ? "oracle-found" : "oracle-none")]++;
        max_delta_ = std::max(max_delta_, std::abs(row.delta));
        solver_times_.push_back(row.solver_seconds);
        oracle_times_.push_back(row.oracle_seconds);
        if (row.agree) return;
        ++disagreements_;
        if (first_bad_) return;
        first_bad_ = Json{{"instance", inst.id}, {"problem", row.problem}, {"reproducer", reproducer_}};
        std::ofstream dump(reproducer_);
        write_graph(dump, inst.graph, inst.id + ": " + row.problem);
    }

    bool minimize_;
    unsigned threads_;
    std::string reproducer_;
    std::vector<Instance> batch_;
    std::uint64_t total_ = 0, disagreements_ = 0;
    std::map<std::string, std::uint64_t> matrix_;
    double max_delta_ = 0;
    std::vector<double> solver_times_, oracle_times_;
    std::optional<Json> first_bad_;
    AuditCounters audit_;
};

}  // namespace

Json solve_report(const std::string& instance, const Graph& g, const SolveOptions& opts,
                  const SolveOutcome& out, const SolveStats& stats, double seconds) {
    Json r;
    r["schema"] = 1;
    r["instance"] = instance;
    r["vertices"] = g.order();
    r["edges"] = g.size();
    r["verdict"] = verdict_name(out.verdict);
    if (out.verdict == Verdict::Found) {
        r["matching"] = matching_json(out.matching);
        r["weight"] = out.weight;
    }
    if (!out.reason.empty()) r["reason"] = out.reason;
    if (out.witness) r["witness"] = witness_json(*out.witness);
    if (out.verdict == Verdict::ClassViolation) {
        r["class_check"] = "violated";
    } else {
        r["class_check"] = opts.verify_class ? "passed" : "skipped";
    }
    r["flags"] = Json{{"min_weight", opts.minimize}, {"verify_class", opts.verify_class},
                      {"all_anchors", opts.all_anchors}};
    r["trace"] = trace_json(stats.trace);
    r["anchors_tried"] = stats.anchors_tried;
    if (opts.audit) r["audit"] = audit_json(stats.audit);
    r["timings"] = Json{{"total_seconds", seconds},
                        {"closure_seconds", stats.closure_seconds},
                        {"decomposition_seconds", stats.decomposition_seconds},
                        {"x_enumeration_seconds", stats.x_enumeration_seconds},
                        {"y_solve_seconds", stats.y_solve_seconds}};
    return r;
}

std::optional<ClassFilter> parse_filter(const std::string& text) {
    const std::string s = lower_compact(text);
    if (s == "k4") return ClassFilter::of(Pattern::K4);
    if (s == "diamond") return ClassFilter::of(Pattern::Diamond);
    if (s == "butterfly") return ClassFilter::of(Pattern::Butterfly);
    if (s == "gem") return ClassFilter::of(Pattern::Gem);
    if (s == "c4") return ClassFilter::of(Pattern::C4);
    if (s == "claw") return ClassFilter::spider(1, 1, 1);
    if (s.size() < 2 || s[0] != 's') return std::nullopt;
    std::vector<int> legs;
    std::string digits;
    // "s 1 2 4" compacts to "s124"; "S_{1,2,4}" to "s_{1,2,4}".
    const bool separated = s.find(',') != std::string::npos;
    std::string body = s.substr(1);
    for (char ch : body) {
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits += ch;
            if (!separated) {
                legs.push_back(std::stoi(digits));
                digits.clear();
            }
        } else if (ch == ',') {
            if (digits.empty()) return std::nullopt;
            legs.push_back(std::stoi(digits));
            digits.clear();
        } else if (ch != '_' && ch != '{' && ch != '}') {
            return std::nullopt;
        }
    }
    if (!digits.empty()) legs.push_back(std::stoi(digits));
    if (legs.size() != 3) return std::nullopt;
    return ClassFilter::spider(legs[0], legs[1], legs[2]);
}

unsigned worker_count() {
    if (const char* env = std::getenv("DIM_SOLVER_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dominating induced matchings"};
    app.require_subcommand(1);

    std::string graph_path, matching_path, pattern_text, out_path, matching_out, dir, reproducer = "compare_reproducer.txt";
    bool min_weight = false, verify_class = false, all_anchors = false, json = false, audit = false, enumerate = false;

    auto* solve_cmd = app.add_subcommand("solve", "Find a d.i.m. or report that none exists");
    solve_cmd->add_option("graph", graph_path, "Edge-list file")->required();
    solve_cmd->add_flag("--min-weight", min_weight, "Lightest d.i.m.");
    solve_cmd->add_flag("--verify-class", verify_class, "Reject inputs with an induced S_{1,2,4}");
    solve_cmd->add_flag("--all-anchors", all_anchors, "Try every anchor edge");
    solve_cmd->add_flag("--json", json, "JSON report");
    solve_cmd->add_flag("--audit", audit, "Check structural assertions while solving");

    auto* check_cmd = app.add_subcommand("check", "Test whether a matching is a d.i.m.");
    check_cmd->add_option("graph", graph_path, "Edge-list file")->required();
    check_cmd->add_option("matching", matching_path, "Matching file or JSON report")->required();

    std::vector<std::string> pattern_words;
    auto* detect_cmd = app.add_subcommand("detect", "List induced copies of a pattern");
    detect_cmd->add_option("graph", graph_path, "Edge-list file")->required();
    detect_cmd->add_option("pattern", pattern_words, "diamond, butterfly, gem, K4, C4, claw, 's i j k', forced")
        ->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "Exact backtracking search");
    oracle_cmd->add_option("graph", graph_path, "Edge-list file")->required();
    oracle_cmd->add_flag("--min-weight", min_weight, "Lightest d.i.m.");
    oracle_cmd->add_flag("--enumerate", enumerate, "List every d.i.m.");
    oracle_cmd->add_flag("--json", json, "JSON report");

    GenSpec spec;
    std::string mode = "planted";
    auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance");
    gen_cmd->add_option("--mode", mode, "planted, rejection or gadget")
        ->check(CLI::IsMember({"planted", "rejection", "gadget"}));
    gen_cmd->add_option("-n,--vertices", spec.n, "Vertex count");
    gen_cmd->add_option("--density", spec.density, "Edge probability");
    gen_cmd->add_option("--seed", spec.seed, "RNG seed");
    gen_cmd->add_option("--gadget", spec.gadget, "Gadget name");
    gen_cmd->add_option("--max-weight", spec.max_weight, "Integer weights in 1..max (0: unweighted)");
    gen_cmd->add_option("--cluster", spec.cluster, "Largest planted piece");
    gen_cmd->add_option("--retries", spec.retry_budget, "Retry budget");
    gen_cmd->add_option("-o,--out", out_path, "Graph file (default: stdout)");
    gen_cmd->add_option("--matching-out", matching_out, "Planted matching sidecar");

    int exhaustive = 0, count = 100, random_n = 0, planted_n = 0;
    double density = 0.3;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    auto* cmp_cmd = app.add_subcommand("compare", "Differential run of solver and oracle");
    cmp_cmd->add_option("--exhaustive", exhaustive, "Every connected S_{1,2,4}-free K4-free graph on n vertices");
    cmp_cmd->add_option("--random", random_n, "Random filtered graphs on n vertices");
    cmp_cmd->add_option("--planted", planted_n, "Planted instances on n vertices");
    cmp_cmd->add_option("--dir", dir, "Every file in a directory");
    cmp_cmd->add_option("--count", count, "Instances for --random and --planted");
    cmp_cmd->add_option("--density", density, "Edge probability for --random and --planted");
    cmp_cmd->add_option("--seed", seed, "First seed");
    cmp_cmd->add_option("--threads", threads, "Workers (default: DIM_SOLVER_THREADS or all cores)");
    cmp_cmd->add_flag("--min-weight", min_weight, "Compare minimum weights");
    cmp_cmd->add_flag("--json", json, "JSON report");
    cmp_cmd->add_option("--reproducer", reproducer, "Where to dump the first disagreement");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve_cmd) {
            const Graph g = read_graph_file(graph_path);
            SolveOptions opts;
            opts.minimize = min_weight;
            opts.verify_class = verify_class;
            opts.all_anchors = all_anchors;
            opts.audit = audit;
            SolveStats stats;
            const auto t0 = Clock::now();
            const SolveOutcome res = solve(g, opts, &stats);
            const double seconds = since(t0);
            if (json) {
                out << solve_report(graph_path, g, opts, res, stats, seconds).dump(2) << '\n';
            } else {
                out << "verdict " << verdict_name(res.verdict) << '\n';
                if (res.verdict == Verdict::Found) {
                    out << "weight " << format_weight(res.weight) << '\n';
                    write_matching(out, res.matching);
                }
                if (!res.reason.empty()) out << "reason " << res.reason << '\n';
                if (res.witness) out << "witness " << witness_json(*res.witness).dump() << '\n';
            }
            return verdict_exit(res.verdict);
        }

        if (*check_cmd) {
            const Graph g = read_graph_file(graph_path);
            const EdgeSet m = read_matching_file(matching_path);
            for (const Edge& e : m)
                if (e.v >= g.order() || !g.has_edge(e)) {
                    err << "matching pair " << e.u + 1 << ' ' << e.v + 1 << " is not an edge\n";
                    return kExitUsage;
                }
            const bool ok = is_dim(g, m);
            out << (ok ? "valid" : "invalid") << '\n';
            return ok ? 0 : 1;
        }

        if (*detect_cmd) {
            const Graph g = read_graph_file(graph_path);
            std::string joined;
            for (const auto& w : pattern_words) joined += w + ' ';
            Json r;
            r["schema"] = 1;
            r["instance"] = graph_path;
            Json list = Json::array();
            if (lower_compact(joined) == "forced") {
                r["pattern"] = "forced";
                for (const Edge& e : forced_edges_initial(g)) list.push_back(edge_json(e));
                r["edges"] = list;
                out << r.dump(2) << '\n';
                return 0;
            }
            const auto filter = parse_filter(joined);
            if (!filter) {
                err << "unknown pattern '" << joined << "'\n";
                return kExitUsage;
            }
            r["pattern"] = filter->name();
            if (filter->pattern == Pattern::Diamond) {
                for (const auto& w : find_all_diamonds(g)) list.push_back(witness_json(w));
            } else if (filter->pattern == Pattern::Butterfly) {
                for (const auto& w : find_all_butterflies(g)) list.push_back(witness_json(w));
            } else if (auto w = find_filter(g, *filter)) {
                list.push_back(witness_json(*w));
            }
            r["witnesses"] = list;
            out << r.dump(2) << '\n';
            return 0;
        }

        if (*oracle_cmd) {
            const Graph g = read_graph_file(graph_path);
            const OracleMode m = enumerate ? OracleMode::Enumerate
                                           : (min_weight ? OracleMode::MinWeight : OracleMode::Exists);
            const auto res = oracle_solve(g, m);
            if (json) {
                Json r;
                r["schema"] = 1;
                r["instance"] = graph_path;
                r["verdict"] = res.feasible ? "found" : "no-dim";
                if (res.best) {
                    r["matching"] = matching_json(*res.best);
                    r["weight"] = g.weight(*res.best);
                }
                if (res.all_dims) {
                    Json all = Json::array();
                    for (const auto& d : *res.all_dims) all.push_back(matching_json(d));
                    r["all"] = all;
                    r["truncated"] = res.truncated;
                }
                r["nodes"] = res.nodes;
                out << r.dump(2) << '\n';
            } else {
                out << "verdict " << (res.feasible ? "found" : "no-dim") << '\n';
                if (res.best) {
                    out << "weight " << format_weight(g.weight(*res.best)) << '\n';
                    write_matching(out, *res.best);
                }
                if (res.all_dims) out << "count " << res.all_dims->size() << (res.truncated ? "+" : "") << '\n';
            }
            return res.feasible ? 0 : 1;
        }

        if (*gen_cmd) {
            spec.mode = mode == "planted" ? GenMode::Planted
                                          : (mode == "rejection" ? GenMode::Rejection : GenMode::Gadget);
            PlantedInstance inst = generate(spec);
            std::ostringstream comment;
            comment << "generated mode=" << mode << " n=" << spec.n << " density=" << spec.density
                    << " seed=" << spec.seed;
            if (mode == "gadget") comment.str("gadget " + spec.gadget);
            if (out_path.empty()) {
                write_graph(out, inst.graph, comment.str());
            } else {
                std::ofstream file(out_path);
                if (!file) throw ParseError("cannot write '" + out_path + "'", 0);
                write_graph(file, inst.graph, comment.str());
            }
            if (!matching_out.empty()) {
                std::ofstream file(matching_out);
                if (!file) throw ParseError("cannot write '" + matching_out + "'", 0);
                write_matching(file, inst.matching);
            }
            return 0;
        }

        if (*cmp_cmd) {
            CompareRun run(min_weight, threads ? threads : worker_count(), reproducer);
            const auto filter = [](const Graph& g) { return !first_violation(g, default_filters()); };
            if (exhaustive > 0) {
                const auto mode_e = exhaustive <= kLabeledCap ? EnumerationMode::Labeled : EnumerationMode::Canonical;
                std::uint64_t index = 0;
                enumerate_all_graphs(exhaustive, filter, mode_e, [&](const Graph& g) {
                    run.add({"exhaustive-" + std::to_string(exhaustive) + "#" + std::to_string(index++), g});
                });
            }
            for (int i = 0; i < (random_n > 0 ? count : 0); ++i) {
                GenSpec s;
                s.mode = GenMode::Rejection;
                s.n = random_n;
                s.density = density;
                s.seed = seed + static_cast<std::uint64_t>(i);
                s.max_weight = min_weight ? 10 : 0;
                auto r = generate_rejection(s);
                if (r.graph) run.add({"random-seed-" + std::to_string(s.seed), std::move(*r.graph)});
            }
            for (int i = 0; i < (planted_n > 0 ? count : 0); ++i) {
                GenSpec s;
                s.n = planted_n;
                s.density = density;
                s.seed = seed + static_cast<std::uint64_t>(i);
                s.max_weight = min_weight ? 10 : 0;
                run.add({"planted-seed-" + std::to_string(s.seed), generate_planted(s).graph});
            }
            if (!dir.empty()) {
                std::vector<std::filesystem::path> files;
                for (const auto& entry : std::filesystem::directory_iterator(dir))
                    if (entry.is_regular_file()) files.push_back(entry.path());
                std::sort(files.begin(), files.end());
                for (const auto& f : files) run.add({f.string(), read_graph_file(f.string())});
            }
            Json r = run.report();
            if (run.total() == 0) err << "warning: empty corpus\n";
            if (json) {
                out << r.dump(2) << '\n';
            } else {
                out << "instances " << run.total() << "\ndisagreements " << run.disagreements() << '\n';
                for (const auto& [key, n] : r["agreement_matrix"].items()) out << "  " << key << ' ' << n << '\n';
                if (r.contains("first_disagreement"))
                    out << "first disagreement " << r["first_disagreement"].dump() << '\n';
            }
            return run.disagreements() == 0 ? 0 : 1;
        }
    } catch (const ParseError& e) {
        err << "parse error";
        if (e.line > 0) err << " at line " << e.line;
        err << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GenError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNoDim;
    }
    return kExitUsage;
}

}  // namespace dim
