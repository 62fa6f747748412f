#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>

#include "citorder/coupling.hpp"
#include "citorder/eord.hpp"
#include "citorder/error.hpp"
#include "citorder/minij.hpp"
#include "citorder/orders.hpp"
#include "citorder/pmif.hpp"
#include "citorder/report.hpp"
#include "citorder/stats.hpp"
#include "citorder/synth.hpp"

namespace fs = std::filesystem;
using namespace citorder;

namespace {

struct CommonOpts {
    std::string input;
    std::string format = "auto";
    int max_chain_len = 3;
    std::string weights_text;
    bool no_transitive = false;
    bool break_any = false;
    std::uint64_t cycle_cap = 1000000;
    std::uint64_t seed = 0;
    int iterations = 1000;
    int repeats = 5;
    double sa_temp = 0.0;
    std::string out;
    bool table = false;
    bool serial = false;
    bool no_timestamp = false;
    bool explain = false;
    std::string strategy;
    std::string strategies = "graph,feedback,ria";
    std::string rt_base = "feedback";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input,-i", o.input, "input .minij file, source directory, or PMIF JSON")
        ->required();
    cmd->add_option("--format", o.format, "input format (default: by extension)")
        ->check(CLI::IsMember({"auto", "pmif", "minij"}));
    cmd->add_option("--max-chain-len", o.max_chain_len,
                    "transitive chain length limit (default 3)")
        ->check(CLI::Range(3, 5));
    cmd->add_option("--weights", o.weights_text, "wa,wm,wt (default 1/3 each)");
    cmd->add_flag("--no-transitive", o.no_transitive,
                  "use direct relationships only");
    cmd->add_option("--cycle-cap", o.cycle_cap,
                    "abort when more elementary cycles exist (default 1000000)");
    cmd->add_option("--out", o.out, "write the report to this file");
    cmd->add_flag("--table", o.table, "human-readable table output");
    cmd->add_flag("--json", [](std::int64_t) {}, "JSON output (default)");
    cmd->add_flag("--no-timestamp", o.no_timestamp,
                  "omit timestamps and runtimes for reproducible output");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string input_stem(const fs::path& path) {
    fs::path p = path;
    if (p.filename().empty()) p = p.parent_path();
    std::string stem = fs::is_directory(p) ? p.filename().string() : p.stem().string();
    if (stem.size() > 5 && stem.ends_with(".pmif")) stem.resize(stem.size() - 5);
    return stem.empty() ? "model" : stem;
}

ProgramModel load_model(const CommonOpts& o) {
    const fs::path path = o.input;
    if (!fs::exists(path)) throw InputError("input not found: " + o.input);
    std::string format = o.format;
    if (fs::is_directory(path))
        format = "minij";
    else if (format == "auto")
        format = path.extension() == ".minij" ? "minij" : "pmif";

    if (format == "minij") {
        std::vector<minij::Unit> units;
        if (fs::is_directory(path)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(path))
                if (entry.path().extension() == ".minij") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (files.empty())
                throw InputError("no .minij files in " + o.input);
            for (const auto& f : files)
                units.push_back(minij::parse_unit(read_file(f), f.string()));
        } else {
            units.push_back(minij::parse_unit(read_file(path), path.string()));
        }
        return minij::lower(units, input_stem(path));
    }
    return load_pmif_file(path.string());
}

Weights parse_weights(const std::string& text) {
    Weights w;
    if (!text.empty()) {
        std::vector<double> parts;
        std::istringstream in(text);
        std::string piece;
        while (std::getline(in, piece, ',')) {
            try {
                std::size_t used = 0;
                parts.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::exception&) {
                throw InputError("weights must be three comma-separated numbers");
            }
        }
        if (parts.size() != 3)
            throw InputError("weights must be three comma-separated numbers");
        w = Weights{parts[0], parts[1], parts[2]};
    }
    validate_weights(w);
    return w;
}

struct Workspace {
    std::unique_ptr<ProgramModel> model;
    std::unique_ptr<Analyzer> analyzer;
    Eord eord;
    Weights weights;
};

Workspace load_workspace(const CommonOpts& o) {
    Workspace w;
    w.weights = parse_weights(o.weights_text);
    w.model = std::make_unique<ProgramModel>(load_model(o));
    w.analyzer = std::make_unique<Analyzer>(*w.model);
    w.eord = build_eord(*w.model, *w.analyzer,
                        EordOptions{o.max_chain_len, !o.no_transitive, w.weights});
    return w;
}

ordered_json report_header(const char* command, const Workspace& w,
                           const CommonOpts& o) {
    ordered_json report;
    report["command"] = command;
    report["model"] = w.model->name;
    report["classes"] = static_cast<int>(w.model->classes.size());
    report["max_chain_len"] = o.max_chain_len;
    report["transitive"] = !o.no_transitive;
    report["weights"] = {{"wa", w.weights.wa}, {"wm", w.weights.wm},
                         {"wt", w.weights.wt}};
    if (!o.no_timestamp) report["timestamp"] = iso_timestamp();
    return report;
}

ordered_json pairs_json(const std::set<std::pair<std::string, std::string>>& pairs) {
    ordered_json j = ordered_json::array();
    for (const auto& [from, to] : pairs) j.push_back({from, to});
    return j;
}

ordered_json pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
    ordered_json j = ordered_json::array();
    for (const auto& [from, to] : pairs) j.push_back({from, to});
    return j;
}

void emit(const CommonOpts& o, const ordered_json& report,
          std::string (*renderer)(const ordered_json&)) {
    const std::string text = o.table ? renderer(report) : report.dump(2) + "\n";
    if (!o.out.empty()) {
        std::ofstream out(o.out, std::ios::binary);
        out << text;
        if (!out) throw InputError("cannot write " + o.out);
    } else {
        std::cout << text;
    }
}

std::string strategy_tag(const std::string& name) {
    if (name == "graph") return "graph_based";
    if (name == "feedback") return "multilevel_feedback";
    if (name == "ria") return "random_iterative";
    throw InputError("unknown strategy '" + name + "' (use graph, feedback, or ria)");
}

TestOrder run_strategy(const std::string& name, const Workspace& w,
                       const CommonOpts& o, int repeat) {
    if (name == "graph")
        return graph_based(w.eord, w.weights, GraphOptions{o.break_any, o.cycle_cap});
    if (name == "feedback") return multilevel_feedback(w.eord, w.weights);
    if (name == "ria") {
        RiaOptions r;
        r.seed = o.seed + static_cast<std::uint64_t>(repeat);
        r.iterations = o.iterations;
        r.sa_temp = o.sa_temp;
        return ria(w.eord, w.weights, r);
    }
    throw InputError("unknown strategy '" + name + "' (use graph, feedback, or ria)");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void attach_metadata(ordered_json& j, const TestOrder& result) {
    if (result.strategy == "graph_based")
        j["removed_edges"] = pairs_json(result.removed_edges);
    if (result.strategy == "random_iterative") {
        j["seed"] = result.seed;
        j["iterations"] = result.iterations;
        j["accepted_costs"] = result.accepted_costs;
    }
}

int cmd_analyze(const CommonOpts& o) {
    Workspace w = load_workspace(o);
    ordered_json report = report_header("analyze", w, o);
    report["graph"] = graph_json(w.eord);
    report["stats"] = stats_json(relationship_stats(w.eord));
    report["chains_by_length"] = chain_length_counts(w.eord.chains, o.max_chain_len);
    report["histogram"] = histogram_json(w.eord.chains);
    report["chains"] = chains_json(w.eord.chains);
    if (o.explain) report["explain"] = explain_json(*w.analyzer);
    emit(o, report, render_analyze_table);
    return 0;
}

int cmd_order(const CommonOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    Workspace w = load_workspace(o);
    const TestOrder result = run_strategy(o.strategy, w, o, 0);
    const OrderCost cost = ocplx(w.eord, result.order, w.weights);
    const double runtime = seconds_since(start);

    ordered_json report = report_header("order", w, o);
    report["strategy"] = result.strategy;
    report["order"] = result.order;
    report["cost"] = cost_json(cost);
    report["stubs"] = pairs_json(stub_set(w.eord, result.order));
    attach_metadata(report, result);
    if (!o.no_timestamp) report["runtime_seconds"] = runtime;
    emit(o, report, render_order_table);
    return 0;
}

int cmd_compare(const CommonOpts& o) {
    if (o.repeats < 1) throw InputError("repeats must be at least 1");
    std::vector<std::string> names;
    {
        std::istringstream in(o.strategies);
        std::string piece;
        while (std::getline(in, piece, ',')) names.push_back(piece);
    }
    if (names.empty()) throw InputError("no strategies selected");
    for (const auto& n : names) strategy_tag(n);
    if (std::find(names.begin(), names.end(), o.rt_base) == names.end())
        throw InputError("rt base strategy '" + o.rt_base +
                         "' is not among the compared strategies");

    const auto start = std::chrono::steady_clock::now();
    Workspace w = load_workspace(o);
    const double analysis_seconds = seconds_since(start);

    struct StrategyRuns {
        std::vector<TestOrder> orders;
        std::vector<OrderCost> costs;
        std::vector<double> gen_seconds;
    };
    auto run_all = [&](const std::string& name) {
        StrategyRuns runs;
        for (int rep = 0; rep < o.repeats; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            TestOrder order = run_strategy(name, w, o, rep);
            runs.gen_seconds.push_back(seconds_since(t0));
            runs.costs.push_back(ocplx(w.eord, order.order, w.weights));
            runs.orders.push_back(std::move(order));
        }
        return runs;
    };

    std::vector<StrategyRuns> results(names.size());
    if (o.serial) {
        for (std::size_t i = 0; i < names.size(); ++i) results[i] = run_all(names[i]);
    } else {
        std::vector<std::future<StrategyRuns>> futures;
        for (const auto& name : names)
            futures.push_back(
                std::async(std::launch::async, [&run_all, name] { return run_all(name); }));
        for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    }

    auto mean = [](const std::vector<double>& v) {
        return v.empty() ? 0.0
                         : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    };
    std::vector<double> runtimes(names.size(), 0.0);
    for (std::size_t i = 0; i < names.size(); ++i)
        runtimes[i] = analysis_seconds + mean(results[i].gen_seconds);
    const std::size_t base_index = static_cast<std::size_t>(
        std::find(names.begin(), names.end(), o.rt_base) - names.begin());

    ordered_json report = report_header("compare", w, o);
    report["repeats"] = o.repeats;
    report["serial"] = o.serial;
    report["rt_base"] = strategy_tag(o.rt_base);
    if (!o.no_timestamp) report["analysis_seconds"] = analysis_seconds;
    ordered_json strategies = ordered_json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const StrategyRuns& runs = results[i];
        ordered_json js;
        js["strategy"] = strategy_tag(names[i]);
        js["order"] = runs.orders.front().order;
        js["cost"] = cost_json(runs.costs.front());
        js["stubs"] = pairs_json(stub_set(w.eord, runs.orders.front().order));
        attach_metadata(js, runs.orders.front());
        ordered_json jruns = ordered_json::array();
        for (int rep = 0; rep < o.repeats; ++rep) {
            ordered_json jr;
            jr["order"] = runs.orders[rep].order;
            jr["cost"] = cost_json(runs.costs[rep]);
            if (runs.orders[rep].strategy == "random_iterative")
                jr["seed"] = runs.orders[rep].seed;
            jruns.push_back(std::move(jr));
        }
        js["runs"] = std::move(jruns);
        ordered_json mc;
        std::vector<double> oc, ac, mcx, tc, st;
        for (const auto& c : runs.costs) {
            oc.push_back(c.ocplx);
            ac.push_back(c.acplx);
            mcx.push_back(c.mcplx);
            tc.push_back(c.tcplx);
            st.push_back(c.stubs);
        }
        mc["ocplx"] = mean(oc);
        mc["acplx"] = mean(ac);
        mc["mcplx"] = mean(mcx);
        mc["tcplx"] = mean(tc);
        mc["stubs"] = mean(st);
        js["mean_cost"] = std::move(mc);
        js["ocplx_runs"] = oc;
        if (!o.no_timestamp) {
            js["generation_seconds"] = runs.gen_seconds;
            js["runtime_seconds"] = runtimes[i];
            js["rt"] = runtimes[i] / runtimes[base_index];
        }
        strategies.push_back(std::move(js));
    }
    report["strategies"] = std::move(strategies);

    ordered_json wilcoxon = ordered_json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            ordered_json jw;
            jw["pair"] = {strategy_tag(names[i]), strategy_tag(names[j])};
            std::vector<double> oi, oj;
            for (const auto& c : results[i].costs) oi.push_back(c.ocplx);
            for (const auto& c : results[j].costs) oj.push_back(c.ocplx);
            jw["ocplx"] = wilcoxon_json(wilcoxon_signed_rank(oi, oj));
            if (!o.no_timestamp)
                jw["runtime"] = wilcoxon_json(wilcoxon_signed_rank(
                    results[i].gen_seconds, results[j].gen_seconds));
            wilcoxon.push_back(std::move(jw));
        }
    }
    report["wilcoxon"] = std::move(wilcoxon);
    emit(o, report, render_compare_table);
    return 0;
}

struct ConvertOpts {
    std::string input;
    std::string format = "auto";
    std::string out;
};

int cmd_convert(const ConvertOpts& c) {
    CommonOpts o;
    o.input = c.input;
    o.format = c.format;
    const ProgramModel model = load_model(o);
    const std::string pmif = save_pmif(model);
    if (c.out.empty()) {
        std::cout << pmif;
        return 0;
    }
    std::ofstream out(c.out, std::ios::binary);
    out << pmif;
    if (!out) throw InputError("cannot write " + c.out);
    return 0;
}

struct GenOpts {
    SynthSpec spec;
    std::string out;
    bool table = false;
    bool no_timestamp = false;
};

int cmd_gen(const GenOpts& g) {
    const ProgramModel model = generate_synthetic(g.spec);
    const std::string pmif = save_pmif(model);
    if (g.out.empty()) {
        std::cout << pmif;
        return 0;
    }
    std::ofstream out(g.out, std::ios::binary);
    out << pmif;
    if (!out) throw InputError("cannot write " + g.out);

    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& cls : model.classes)
        for (const auto& m : cls.methods)
            for (const auto& b : m.cfg.blocks)
                for (const auto& s : b.statements)
                    if (s.kind == StmtKind::call && s.call->target_class != cls.name)
                        edges.insert({cls.name, s.call->target_class});

    ordered_json report;
    report["command"] = "gen";
    report["model"] = model.name;
    report["classes"] = g.spec.classes;
    report["call_edges"] = static_cast<int>(edges.size());
    report["edge_density"] = g.spec.edge_density;
    report["branch_density"] = g.spec.branch_density;
    report["chain_fraction"] = g.spec.chain_fraction;
    report["seed"] = g.spec.seed;
    if (!g.no_timestamp) report["timestamp"] = iso_timestamp();
    report["out"] = g.out;
    const std::string text =
        g.table ? render_gen_table(report) : report.dump(2) + "\n";
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"class integration test order toolkit"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, order_opts, compare_opts;
    GenOpts gen_opts;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "relationship graph, chains, and probabilities");
    add_common(analyze, analyze_opts);
    analyze->add_flag("--explain", analyze_opts.explain,
                      "include per-statement probabilities");

    CLI::App* order =
        app.add_subcommand("order", "generate one integration test order");
    add_common(order, order_opts);
    order->add_option("--strategy", order_opts.strategy, "graph, feedback, or ria")
        ->required();
    order->add_flag("--break-any", order_opts.break_any,
                    "allow removing inheritance/aggregation edges");
    order->add_option("--seed", order_opts.seed, "random seed (default 0)");
    order->add_option("--iterations", order_opts.iterations,
                      "ria iterations (default 1000)");
    order->add_option("--sa-temp", order_opts.sa_temp,
                      "ria annealing start temperature (default off)");

    CLI::App* compare =
        app.add_subcommand("compare", "run and compare several strategies");
    add_common(compare, compare_opts);
    compare->add_option("--strategies", compare_opts.strategies,
                        "comma-separated subset of graph,feedback,ria");
    compare->add_flag("--break-any", compare_opts.break_any,
                      "allow removing inheritance/aggregation edges");
    compare->add_option("--seed", compare_opts.seed, "base random seed (default 0)");
    compare->add_option("--iterations", compare_opts.iterations,
                        "ria iterations (default 1000)");
    compare->add_option("--sa-temp", compare_opts.sa_temp,
                        "ria annealing start temperature (default off)");
    compare->add_option("--repeats", compare_opts.repeats,
                        "runs per strategy (default 5)");
    compare->add_flag("--serial", compare_opts.serial,
                      "run strategies sequentially for timing fidelity");
    compare->add_option("--rt-base", compare_opts.rt_base,
                        "runtime-ratio denominator strategy (default feedback)");

    ConvertOpts convert_opts;
    CLI::App* convert =
        app.add_subcommand("convert", "translate sources into a PMIF model");
    convert->add_option("--input,-i", convert_opts.input,
                        "input .minij file, source directory, or PMIF JSON")
        ->required();
    convert->add_option("--format", convert_opts.format,
                        "input format (default: by extension)")
        ->check(CLI::IsMember({"auto", "pmif", "minij"}));
    convert->add_option("--out", convert_opts.out, "write the PMIF model here");

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic PMIF model");
    gen->add_option("--classes", gen_opts.spec.classes, "class count (default 10)")
        ->check(CLI::PositiveNumber);
    gen->add_option("--edge-density", gen_opts.spec.edge_density,
                    "fraction of ordered class pairs coupled (default 0.15)");
    gen->add_option("--branch-density", gen_opts.spec.branch_density,
                    "fraction of calls under a condition (default 0.3)");
    gen->add_option("--chain-fraction", gen_opts.spec.chain_fraction,
                    "fraction of calls that induce chains (default 0.5)");
    gen->add_option("--seed", gen_opts.spec.seed, "random seed (default 0)");
    gen->add_option("--out", gen_opts.out, "write the PMIF model here");
    gen->add_flag("--table", gen_opts.table, "human-readable summary");
    gen->add_flag("--json", [](std::int64_t) {}, "JSON summary (default)");
    gen->add_flag("--no-timestamp", gen_opts.no_timestamp,
                  "omit timestamps for reproducible output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(analyze_opts);
        if (app.got_subcommand(order)) return cmd_order(order_opts);
        if (app.got_subcommand(compare)) return cmd_compare(compare_opts);
        if (app.got_subcommand(convert)) return cmd_convert(convert_opts);
        if (app.got_subcommand(gen)) return cmd_gen(gen_opts);
        throw InputError("no command given");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
