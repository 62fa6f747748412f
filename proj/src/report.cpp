#include "citorder/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace citorder {

namespace {

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    while (s.size() < width) s.push_back(' ');
    return s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> order_of(const ordered_json& j) {
    std::vector<std::string> out;
    for (const auto& c : j) out.push_back(c.get<std::string>());
    return out;
}

std::string edge_pair_text(const ordered_json& pairs) {
    std::vector<std::string> parts;
    for (const auto& p : pairs)
        parts.push_back(p[0].get<std::string>() + "->" + p[1].get<std::string>());
    return join(parts, ", ");
}

}  // namespace

ordered_json graph_json(const Eord& eord) {
    ordered_json j;
    j["name"] = eord.name;
    j["max_chain_len"] = eord.max_chain_len;
    j["nodes"] = eord.nodes;
    ordered_json edges = ordered_json::array();
    for (const auto& e : eord.edges) {
        ordered_json je;
        je["from"] = e.from;
        je["to"] = e.to;
        je["label"] = to_string(e.label);
        ordered_json kinds = ordered_json::array();
        for (const auto& k : e.direct_kinds) kinds.push_back(to_string(k));
        je["kinds"] = kinds;
        je["A"] = e.coupling.attrs;
        je["M"] = e.coupling.methods;
        je["T"] = e.coupling.t;
        je["A_norm"] = e.coupling.a_norm;
        je["M_norm"] = e.coupling.m_norm;
        je["scplx"] = e.coupling.scplx;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j;
}

ordered_json stats_json(const RelationshipStats& stats) {
    ordered_json j;
    j["edges"] = stats.edges;
    j["direct_only"] = stats.direct_only;
    j["transitive_only"] = stats.transitive_only;
    j["combined"] = stats.combined;
    j["transitive_fraction"] = stats.transitive_fraction;
    j["classes_with_transitive"] = stats.classes_with_transitive;
    j["members_in_chains"] = stats.members_in_chains;
    j["chain_count"] = stats.chain_count;
    return j;
}

std::string chain_path_text(const TransitiveChain& chain) {
    std::vector<std::string> parts;
    for (const auto& n : chain.path) parts.push_back(n.cls + "." + n.member);
    return join(parts, " -> ");
}

ordered_json chains_json(const std::vector<TransitiveChain>& chains) {
    ordered_json j = ordered_json::array();
    for (const auto& c : chains) {
        ordered_json jc;
        ordered_json members = ordered_json::array();
        for (const auto& n : c.path) members.push_back(n.cls + "." + n.member);
        jc["members"] = std::move(members);
        jc["pcs"] = c.pcs;
        jc["t"] = c.probability;
        j.push_back(std::move(jc));
    }
    return j;
}

ordered_json chain_length_counts(const std::vector<TransitiveChain>& chains,
                                 int max_len) {
    std::map<int, int> counts;
    for (int len = 3; len <= max_len; ++len) counts[len] = 0;
    for (const auto& c : chains) ++counts[static_cast<int>(c.path.size())];
    ordered_json j;
    for (const auto& [len, count] : counts) j[std::to_string(len)] = count;
    return j;
}

ordered_json histogram_json(const std::vector<TransitiveChain>& chains) {
    int lt001 = 0, low = 0, half = 0, high = 0, one = 0;
    for (const auto& c : chains) {
        const double t = c.probability;
        if (t < 0.01)
            ++lt001;
        else if (t < 0.5)
            ++low;
        else if (t == 0.5)
            ++half;
        else if (t < 1.0)
            ++high;
        else
            ++one;
    }
    ordered_json j;
    j["lt_0.01"] = lt001;
    j["0.01_to_0.5"] = low;
    j["eq_0.5"] = half;
    j["0.5_to_1"] = high;
    j["eq_1"] = one;
    return j;
}

ordered_json cost_json(const OrderCost& cost) {
    ordered_json j;
    j["ocplx"] = cost.ocplx;
    j["acplx"] = cost.acplx;
    j["mcplx"] = cost.mcplx;
    j["tcplx"] = cost.tcplx;
    j["stubs"] = cost.stubs;
    return j;
}

ordered_json wilcoxon_json(const WilcoxonResult& result) {
    ordered_json j;
    if (result.all_zero) {
        j["result"] = "no-nonzero-differences";
        j["n_nonzero"] = 0;
        return j;
    }
    j["n_nonzero"] = result.n_nonzero;
    j["w_plus"] = result.w_plus;
    j["w_minus"] = result.w_minus;
    j["statistic"] = result.statistic;
    j["p"] = result.p;
    j["exact"] = result.exact;
    j["reject"] = result.reject;
    return j;
}

std::string describe_path(const Cfg& cfg, const std::vector<PathConstraint>& path) {
    if (path.empty()) return "(none)";
    std::vector<std::string> parts;
    for (const auto& c : path) {
        const BasicBlock* b = cfg.block(c.block);
        switch (c.outcome) {
            case Outcome::then_branch:
            case Outcome::else_branch: {
                std::string pred = b && b->branch && b->branch->predicate
                                       ? to_string(*b->branch->predicate)
                                       : "?";
                parts.push_back("[" + pred + "] " + to_string(c.outcome));
                break;
            }
            case Outcome::case_arm:
                parts.push_back("case(" + std::to_string(c.arm) + ") of block " +
                                std::to_string(c.block));
                break;
            case Outcome::loop_body:
                parts.push_back("loop-body of block " + std::to_string(c.block));
                break;
        }
    }
    return join(parts, " && ");
}

ordered_json explain_json(const Analyzer& analyzer) {
    ordered_json j = ordered_json::array();
    for (const auto& cls : analyzer.model().classes) {
        for (const auto& m : cls.methods) {
            ordered_json jm;
            jm["class"] = cls.name;
            jm["method"] = m.name;
            ordered_json stmts = ordered_json::array();
            for (const auto& s : analyzer.method_statements(cls.name, m.name)) {
                ordered_json js;
                js["id"] = s.id;
                js["line"] = s.line;
                js["kind"] = to_string(s.kind);
                if (s.call)
                    js["call"] = s.call->target_class + "." + s.call->target_member;
                js["block"] = s.block;
                js["path"] = describe_path(m.cfg, s.path);
                js["probability"] = s.probability;
                stmts.push_back(std::move(js));
            }
            jm["statements"] = std::move(stmts);
            j.push_back(std::move(jm));
        }
    }
    return j;
}

std::string iso_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string render_analyze_table(const ordered_json& report) {
    std::ostringstream out;
    out << "model " << report["model"].get<std::string>() << " ("
        << report["classes"].get<int>() << " classes)\n";
    const auto& s = report["stats"];
    out << "edges: " << s["edges"].get<int>() << " total, "
        << s["direct_only"].get<int>() << " D, " << s["transitive_only"].get<int>()
        << " T, " << s["combined"].get<int>() << " C (transitive fraction "
        << fixed4(s["transitive_fraction"].get<double>()) << ")\n";
    out << "chains (max length " << report["max_chain_len"].get<int>()
        << "): " << s["chain_count"].get<int>() << "\n";
    for (const auto& [len, count] : report["chains_by_length"].items())
        out << "  length " << len << ": " << count.get<int>() << "\n";
    const auto& h = report["histogram"];
    out << "probability histogram: <0.01: " << h["lt_0.01"].get<int>()
        << " | 0.01-0.5: " << h["0.01_to_0.5"].get<int>()
        << " | 0.5: " << h["eq_0.5"].get<int>()
        << " | 0.5-1: " << h["0.5_to_1"].get<int>() << " | 1: " << h["eq_1"].get<int>()
        << "\n";
    if (!report["chains"].empty()) {
        out << "chains:\n";
        for (const auto& c : report["chains"]) {
            std::vector<std::string> members;
            for (const auto& m : c["members"]) members.push_back(m.get<std::string>());
            out << "  " << pad(join(members, " -> "), 48)
                << "  t=" << compact(c["t"].get<double>()) << "\n";
        }
    }
    out << "edges:\n";
    out << "  " << pad("from", 12) << pad("to", 12) << pad("label", 6) << pad("A", 4)
        << pad("M", 4) << pad("T", 10) << "scplx\n";
    for (const auto& e : report["graph"]["edges"]) {
        out << "  " << pad(e["from"].get<std::string>(), 12)
            << pad(e["to"].get<std::string>(), 12)
            << pad(e["label"].get<std::string>(), 6)
            << pad(std::to_string(e["A"].get<int>()), 4)
            << pad(std::to_string(e["M"].get<int>()), 4)
            << pad(compact(e["T"].get<double>()), 10)
            << fixed4(e["scplx"].get<double>()) << "\n";
    }
    if (report.contains("explain")) {
        out << "statements:\n";
        for (const auto& jm : report["explain"]) {
            out << "  " << jm["class"].get<std::string>() << "."
                << jm["method"].get<std::string>() << ":\n";
            for (const auto& js : jm["statements"]) {
                out << "    line " << pad(std::to_string(js["line"].get<int>()), 5)
                    << pad(js["kind"].get<std::string>(), 18);
                if (js.contains("call")) out << pad(js["call"].get<std::string>(), 24);
                out << "p=" << compact(js["probability"].get<double>()) << "  path "
                    << js["path"].get<std::string>() << "\n";
            }
        }
    }
    return out.str();
}

std::string render_order_table(const ordered_json& report) {
    std::ostringstream out;
    out << "model " << report["model"].get<std::string>() << ", strategy "
        << report["strategy"].get<std::string>() << "\n";
    out << "order: " << join(order_of(report["order"]), " -> ") << "\n";
    const auto& c = report["cost"];
    out << pad("OCplx", 10) << pad("ACplx", 7) << pad("MCplx", 7) << pad("TCplx", 10)
        << "Stubs\n";
    out << pad(fixed4(c["ocplx"].get<double>()), 10)
        << pad(std::to_string(c["acplx"].get<int>()), 7)
        << pad(std::to_string(c["mcplx"].get<int>()), 7)
        << pad(fixed4(c["tcplx"].get<double>()), 10) << c["stubs"].get<int>() << "\n";
    if (!report["stubs"].empty())
        out << "stubs: " << edge_pair_text(report["stubs"]) << "\n";
    if (report.contains("removed_edges"))
        out << "removed edges: " << edge_pair_text(report["removed_edges"]) << "\n";
    if (report.contains("runtime_seconds"))
        out << "runtime: " << compact(report["runtime_seconds"].get<double>())
            << " s\n";
    return out.str();
}

std::string render_compare_table(const ordered_json& report) {
    std::ostringstream out;
    out << "model " << report["model"].get<std::string>() << ", "
        << report["repeats"].get<int>() << " repeats\n";
    out << pad("strategy", 22) << pad("OCplx", 10) << pad("ACplx", 7)
        << pad("MCplx", 7) << pad("TCplx", 10) << pad("Stubs", 7) << pad("RT", 8)
        << "order\n";
    for (const auto& s : report["strategies"]) {
        const auto& c = s["mean_cost"];
        out << pad(s["strategy"].get<std::string>(), 22)
            << pad(fixed4(c["ocplx"].get<double>()), 10)
            << pad(compact(c["acplx"].get<double>()), 7)
            << pad(compact(c["mcplx"].get<double>()), 7)
            << pad(fixed4(c["tcplx"].get<double>()), 10)
            << pad(compact(c["stubs"].get<double>()), 7)
            << pad(s.contains("rt") ? fixed4(s["rt"].get<double>()) : "-", 8)
            << join(order_of(s["order"]), " -> ") << "\n";
    }
    if (report.contains("wilcoxon") && !report["wilcoxon"].empty()) {
        out << "wilcoxon:\n";
        for (const auto& w : report["wilcoxon"]) {
            out << "  " << w["pair"][0].get<std::string>() << " vs "
                << w["pair"][1].get<std::string>() << ":";
            for (const char* key : {"ocplx", "runtime"}) {
                if (!w.contains(key)) continue;
                const auto& r = w[key];
                out << " " << key << " ";
                if (r.contains("result"))
                    out << r["result"].get<std::string>();
                else
                    out << "p=" << compact(r["p"].get<double>())
                        << (r["reject"].get<bool>() ? " (reject)" : " (keep)");
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string render_gen_table(const ordered_json& report) {
    std::ostringstream out;
    out << "generated " << report["model"].get<std::string>() << ": "
        << report["classes"].get<int>() << " classes, "
        << report["call_edges"].get<int>() << " call edges -> "
        << report["out"].get<std::string>() << "\n";
    return out.str();
}

}  // namespace citorder
