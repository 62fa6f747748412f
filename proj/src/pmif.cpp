#include "citorder/pmif.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "citorder/error.hpp"

namespace citorder {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw InputError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const char* key : required)
        if (!obj.contains(key)) fail(path, std::string("missing key '") + key + "'");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        auto in = [&](std::initializer_list<const char*> list) {
            for (const char* k : list)
                if (key == k) return true;
            return false;
        };
        if (!in(required) && !in(optional)) fail(path, "unknown key '" + key + "'");
    }
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

int get_int(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

const json& get_array(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array");
    return v;
}

CmpOp parse_cmp(const std::string& s, const std::string& path) {
    if (s == "<") return CmpOp::lt;
    if (s == "<=") return CmpOp::le;
    if (s == ">") return CmpOp::gt;
    if (s == ">=") return CmpOp::ge;
    if (s == "==") return CmpOp::eq;
    if (s == "!=") return CmpOp::ne;
    fail(path, "unknown comparison operator '" + s + "'");
}

PredicateExpr parse_predicate(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    if (obj.contains("op")) {
        check_keys(obj, path, {"op", "args"}, {});
        const std::string op = get_string(obj, path, "op");
        PredicateExpr::Kind kind;
        if (op == "and") kind = PredicateExpr::Kind::and_op;
        else if (op == "or") kind = PredicateExpr::Kind::or_op;
        else if (op == "not") kind = PredicateExpr::Kind::not_op;
        else fail(path + ".op", "unknown operator '" + op + "'");
        const json& args = get_array(obj, path, "args");
        if (args.empty()) fail(path + ".args", "expected at least one argument");
        if (kind == PredicateExpr::Kind::not_op && args.size() != 1)
            fail(path + ".args", "'not' takes exactly one argument");
        std::vector<PredicateExpr> parsed;
        for (std::size_t i = 0; i < args.size(); ++i)
            parsed.push_back(parse_predicate(args[i], path + ".args[" + std::to_string(i) + "]"));
        return PredicateExpr::logical(kind, std::move(parsed));
    }
    if (obj.contains("opaque")) {
        check_keys(obj, path, {"opaque"}, {});
        return PredicateExpr::opaque(get_string(obj, path, "opaque"));
    }
    check_keys(obj, path, {"var", "cmp", "rhs"}, {});
    PredicateExpr::Rhs rhs;
    const json& rv = obj.at("rhs");
    if (rv.is_number()) rhs = rv.get<double>();
    else if (rv.is_boolean()) rhs = rv.get<bool>();
    else if (rv.is_string()) rhs = rv.get<std::string>();
    else fail(path + ".rhs", "expected a number, boolean, or variable name");
    return PredicateExpr::cmp(get_string(obj, path, "var"),
                              parse_cmp(get_string(obj, path, "cmp"), path + ".cmp"),
                              std::move(rhs));
}

Statement parse_statement(const json& obj, const std::string& path) {
    check_keys(obj, path, {"id", "line", "kind"}, {"call"});
    Statement s;
    s.id = get_int(obj, path, "id");
    s.line = get_int(obj, path, "line");
    const std::string kind = get_string(obj, path, "kind");
    if (kind == "call") s.kind = StmtKind::call;
    else if (kind == "attribute-access") s.kind = StmtKind::attribute_access;
    else if (kind == "assignment") s.kind = StmtKind::assignment;
    else if (kind == "return") s.kind = StmtKind::ret;
    else if (kind == "other") s.kind = StmtKind::other;
    else fail(path + ".kind", "unknown statement kind '" + kind + "'");
    if (obj.contains("call")) {
        const json& c = obj.at("call");
        const std::string cpath = path + ".call";
        check_keys(c, cpath, {"target_class", "target_member", "member_kind"}, {});
        CallSite site;
        site.target_class = get_string(c, cpath, "target_class");
        site.target_member = get_string(c, cpath, "target_member");
        const std::string mk = get_string(c, cpath, "member_kind");
        if (mk == "method") site.member_kind = MemberKind::method;
        else if (mk == "attribute") site.member_kind = MemberKind::attribute;
        else fail(cpath + ".member_kind", "unknown member kind '" + mk + "'");
        s.call = std::move(site);
    }
    return s;
}

EdgeKind parse_edge_kind(const std::string& s, int& arm, const std::string& path) {
    arm = -1;
    if (s == "fallthrough") return EdgeKind::fallthrough;
    if (s == "branch-true") return EdgeKind::branch_true;
    if (s == "branch-false") return EdgeKind::branch_false;
    if (s == "loop-body") return EdgeKind::loop_body;
    if (s == "loop-exit") return EdgeKind::loop_exit;
    if (s.starts_with("case(") && s.ends_with(")")) {
        const std::string digits = s.substr(5, s.size() - 6);
        if (!digits.empty() &&
            digits.find_first_not_of("0123456789") == std::string::npos) {
            arm = std::stoi(digits);
            return EdgeKind::case_arm;
        }
    }
    fail(path, "unknown edge kind '" + s + "'");
}

Cfg parse_cfg(const json& obj, const std::string& path) {
    check_keys(obj, path, {"entry", "blocks", "edges"}, {});
    Cfg cfg;
    cfg.entry = get_int(obj, path, "entry");
    const json& blocks = get_array(obj, path, "blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bpath = path + ".blocks[" + std::to_string(i) + "]";
        const json& b = blocks[i];
        check_keys(b, bpath, {"id", "statements"}, {"branch"});
        BasicBlock block;
        block.id = get_int(b, bpath, "id");
        const json& stmts = get_array(b, bpath, "statements");
        for (std::size_t j = 0; j < stmts.size(); ++j)
            block.statements.push_back(
                parse_statement(stmts[j], bpath + ".statements[" + std::to_string(j) + "]"));
        if (b.contains("branch")) {
            const json& br = b.at("branch");
            const std::string brpath = bpath + ".branch";
            check_keys(br, brpath, {"kind"}, {"arms", "predicate"});
            BranchStmt branch;
            const std::string kind = get_string(br, brpath, "kind");
            if (kind == "if") branch.kind = BranchKind::if_branch;
            else if (kind == "while") branch.kind = BranchKind::while_loop;
            else if (kind == "for") branch.kind = BranchKind::for_loop;
            else if (kind == "switch") branch.kind = BranchKind::switch_branch;
            else fail(brpath + ".kind", "unknown branch kind '" + kind + "'");
            if (br.contains("arms")) branch.arms = get_int(br, brpath, "arms");
            if (br.contains("predicate"))
                branch.predicate = parse_predicate(br.at("predicate"), brpath + ".predicate");
            block.branch = std::move(branch);
        }
        cfg.blocks.push_back(std::move(block));
    }
    const json& edges = get_array(obj, path, "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string epath = path + ".edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        check_keys(e, epath, {"from", "to", "kind"}, {});
        CfgEdge edge;
        edge.from = get_int(e, epath, "from");
        edge.to = get_int(e, epath, "to");
        edge.kind = parse_edge_kind(get_string(e, epath, "kind"), edge.arm, epath + ".kind");
        cfg.edges.push_back(edge);
    }
    return cfg;
}

json predicate_to_json(const PredicateExpr& p) {
    json out;
    switch (p.kind) {
        case PredicateExpr::Kind::cmp:
            out["var"] = p.var;
            out["cmp"] = to_string(p.op);
            if (std::holds_alternative<double>(p.rhs)) out["rhs"] = std::get<double>(p.rhs);
            else if (std::holds_alternative<bool>(p.rhs)) out["rhs"] = std::get<bool>(p.rhs);
            else out["rhs"] = std::get<std::string>(p.rhs);
            break;
        case PredicateExpr::Kind::opaque:
            out["opaque"] = p.text;
            break;
        case PredicateExpr::Kind::and_op:
        case PredicateExpr::Kind::or_op:
        case PredicateExpr::Kind::not_op:
            out["op"] = p.kind == PredicateExpr::Kind::and_op   ? "and"
                        : p.kind == PredicateExpr::Kind::or_op ? "or"
                                                               : "not";
            out["args"] = json::array();
            for (const auto& a : p.args) out["args"].push_back(predicate_to_json(a));
            break;
    }
    return out;
}

std::string edge_kind_to_string(const CfgEdge& e) {
    switch (e.kind) {
        case EdgeKind::fallthrough: return "fallthrough";
        case EdgeKind::branch_true: return "branch-true";
        case EdgeKind::branch_false: return "branch-false";
        case EdgeKind::loop_body: return "loop-body";
        case EdgeKind::loop_exit: return "loop-exit";
        case EdgeKind::case_arm: return "case(" + std::to_string(e.arm) + ")";
    }
    return "fallthrough";
}

}  // namespace

ProgramModel load_pmif(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("pmif parse error: ") + e.what());
    }
    check_keys(doc, "$", {"pmif_version", "name", "classes"}, {});
    if (!doc.at("pmif_version").is_number_integer() ||
        doc.at("pmif_version").get<int>() != 1)
        fail("$.pmif_version", "unsupported version, expected 1");
    ProgramModel model;
    model.name = get_string(doc, "$", "name");
    const json& classes = get_array(doc, "$", "classes");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::string cpath = "$.classes[" + std::to_string(i) + "]";
        const json& c = classes[i];
        check_keys(c, cpath, {"name", "attributes", "methods"}, {"extends"});
        ClassDecl cls;
        cls.name = get_string(c, cpath, "name");
        if (c.contains("extends")) cls.extends = get_string(c, cpath, "extends");
        const json& attrs = get_array(c, cpath, "attributes");
        for (std::size_t j = 0; j < attrs.size(); ++j) {
            const std::string apath = cpath + ".attributes[" + std::to_string(j) + "]";
            check_keys(attrs[j], apath, {"name", "type"}, {});
            cls.attributes.push_back({get_string(attrs[j], apath, "name"),
                                      get_string(attrs[j], apath, "type")});
        }
        const json& methods = get_array(c, cpath, "methods");
        for (std::size_t j = 0; j < methods.size(); ++j) {
            const std::string mpath = cpath + ".methods[" + std::to_string(j) + "]";
            const json& m = methods[j];
            check_keys(m, mpath, {"name", "params", "return", "cfg"}, {});
            MethodDecl method;
            method.name = get_string(m, mpath, "name");
            method.return_type = get_string(m, mpath, "return");
            const json& params = get_array(m, mpath, "params");
            for (std::size_t k = 0; k < params.size(); ++k) {
                const std::string ppath = mpath + ".params[" + std::to_string(k) + "]";
                check_keys(params[k], ppath, {"name", "type"}, {});
                method.params.push_back({get_string(params[k], ppath, "name"),
                                         get_string(params[k], ppath, "type")});
            }
            method.cfg = parse_cfg(m.at("cfg"), mpath + ".cfg");
            cls.methods.push_back(std::move(method));
        }
        model.classes.push_back(std::move(cls));
    }
    validate(model);
    return model;
}

std::string save_pmif(const ProgramModel& model) {
    json doc;
    doc["pmif_version"] = 1;
    doc["name"] = model.name;
    doc["classes"] = json::array();
    for (const auto& cls : model.classes) {
        json c;
        c["name"] = cls.name;
        if (cls.extends) c["extends"] = *cls.extends;
        c["attributes"] = json::array();
        for (const auto& a : cls.attributes)
            c["attributes"].push_back({{"name", a.name}, {"type", a.type}});
        c["methods"] = json::array();
        for (const auto& m : cls.methods) {
            json method;
            method["name"] = m.name;
            method["params"] = json::array();
            for (const auto& p : m.params)
                method["params"].push_back({{"name", p.name}, {"type", p.type}});
            method["return"] = m.return_type;
            json cfg;
            cfg["entry"] = m.cfg.entry;
            cfg["blocks"] = json::array();
            for (const auto& b : m.cfg.blocks) {
                json block;
                block["id"] = b.id;
                block["statements"] = json::array();
                for (const auto& s : b.statements) {
                    json stmt;
                    stmt["id"] = s.id;
                    stmt["line"] = s.line;
                    stmt["kind"] = to_string(s.kind);
                    if (s.call) {
                        stmt["call"] = {{"target_class", s.call->target_class},
                                        {"target_member", s.call->target_member},
                                        {"member_kind", to_string(s.call->member_kind)}};
                    }
                    block["statements"].push_back(std::move(stmt));
                }
                if (b.branch) {
                    json branch;
                    branch["kind"] = to_string(b.branch->kind);
                    if (b.branch->kind == BranchKind::switch_branch)
                        branch["arms"] = b.branch->arms;
                    if (b.branch->predicate)
                        branch["predicate"] = predicate_to_json(*b.branch->predicate);
                    block["branch"] = std::move(branch);
                }
                cfg["blocks"].push_back(std::move(block));
            }
            cfg["edges"] = json::array();
            for (const auto& e : m.cfg.edges)
                cfg["edges"].push_back({{"from", e.from},
                                        {"to", e.to},
                                        {"kind", edge_kind_to_string(e)}});
            method["cfg"] = std::move(cfg);
            c["methods"].push_back(std::move(method));
        }
        doc["classes"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

ProgramModel load_pmif_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_pmif(buf.str());
}

void save_pmif_file(const ProgramModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << save_pmif(model);
}

}  // namespace citorder
