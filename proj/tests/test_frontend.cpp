#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "citorder/error.hpp"
#include "citorder/minij.hpp"
#include "support/ast_gen.hpp"

using namespace citorder;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ProgramModel lower_source(const std::string& source) {
    std::vector<minij::Unit> units;
    units.push_back(minij::parse_unit(source, "test.minij"));
    return minij::lower(units, "test");
}

const MethodDecl& method_of(const ProgramModel& m, const std::string& cls,
                            const std::string& name) {
    const ClassDecl* c = m.find_class(cls);
    REQUIRE(c != nullptr);
    const MethodDecl* method = c->method(name);
    REQUIRE(method != nullptr);
    return *method;
}

int count_statements(const Cfg& cfg, StmtKind kind) {
    int n = 0;
    for (const auto& b : cfg.blocks)
        for (const auto& s : b.statements)
            if (s.kind == kind) ++n;
    return n;
}

}  // namespace

TEST_CASE("comments and operators lex correctly") {
    const char* src = R"(
class A {
    // line comment
    int x = 3; /* block
                  comment */
    void run() {
        if (x >= 2 && x != 5)
            x = x % 2;
    }
}
)";
    const minij::Unit unit = minij::parse_unit(src, "a.minij");
    REQUIRE(unit.classes.size() == 1);
    CHECK(unit.classes[0].fields.size() == 1);
    CHECK(unit.classes[0].methods.size() == 1);
}

TEST_CASE("parse errors carry position") {
    CHECK_THROWS_WITH_AS(minij::parse_unit("class A {", "a.minij"),
                         doctest::Contains("a.minij"), InputError);
    CHECK_THROWS_AS(minij::parse_unit("class A { void m() { if } }", "a.minij"),
                    InputError);
    CHECK_THROWS_AS(minij::parse_unit("class A { void m() { for (;;) {} } }",
                                      "a.minij"),
                    InputError);
    CHECK_THROWS_AS(minij::parse_unit("class A { void m() { x = 1 } }", "a.minij"),
                    InputError);
    CHECK_THROWS_AS(minij::parse_unit("int x;", "a.minij"), InputError);
}

TEST_CASE("print parse fixpoint on the bundled sources") {
    for (const char* name : {"A", "B", "C"}) {
        const std::string src = read_file(std::string(CITORDER_SAMPLES_DIR) +
                                          "/triad/" + name + ".minij");
        const minij::Unit unit = minij::parse_unit(src, name);
        const std::string printed = minij::print_unit(unit);
        CHECK(minij::print_unit(minij::parse_unit(printed, name)) == printed);
    }
}

TEST_CASE("print parse fixpoint on generated sources") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        testutil::SourceGen gen(seed);
        const std::string src = gen.unit();
        CAPTURE(seed);
        CAPTURE(src);
        minij::Unit unit = minij::parse_unit(src, "gen.minij");
        const std::string printed = minij::print_unit(unit);
        CHECK(minij::print_unit(minij::parse_unit(printed, "gen.minij")) == printed);
    }
}

TEST_CASE("dangling else binds to the nearest if") {
    const ProgramModel m = lower_source(R"(
class A {
    int x;
    void run() {
        if (x > 1)
            if (x > 2)
                x = 1;
            else
                x = 2;
    }
}
)");
    const Cfg& cfg = method_of(m, "A", "run").cfg;
    // outer if has an empty else branch: blocks are outer head, inner head,
    // two assignments, join
    int true_edges = 0, false_edges = 0;
    for (const auto& e : cfg.edges) {
        if (e.kind == EdgeKind::branch_true) ++true_edges;
        if (e.kind == EdgeKind::branch_false) ++false_edges;
    }
    CHECK(true_edges == 2);
    CHECK(false_edges == 2);
    CHECK(count_statements(cfg, StmtKind::assignment) == 2);
}

TEST_CASE("declarations and expression statements disambiguate") {
    const ProgramModel m = lower_source(R"(
class B { void go() {} int f; }
class A {
    B b = new B();
    void run() {
        B other = b;
        other.go();
        int plain = 4;
        plain = plain + 1;
    }
}
)");
    const Cfg& cfg = method_of(m, "A", "run").cfg;
    CHECK(count_statements(cfg, StmtKind::call) == 1);
    CHECK(count_statements(cfg, StmtKind::assignment) == 3);
}

TEST_CASE("triad control flow shapes") {
    std::vector<minij::Unit> units;
    for (const char* name : {"A", "B", "C"}) {
        const std::string path =
            std::string(CITORDER_SAMPLES_DIR) + "/triad/" + name + ".minij";
        units.push_back(minij::parse_unit(read_file(path), path));
    }
    const ProgramModel m = minij::lower(units, "triad");

    CHECK(method_of(m, "A", "methodA1").cfg.blocks.size() == 7);
    CHECK(method_of(m, "A", "methodA3").cfg.blocks.size() == 3);
    CHECK(method_of(m, "A", "methodA2").cfg.blocks.size() == 1);
    CHECK(method_of(m, "A", "methodA2").cfg.blocks[0].statements.empty());
    CHECK(method_of(m, "B", "methodB1").cfg.blocks.size() == 3);
    CHECK(method_of(m, "C", "methodC2").cfg.blocks.size() == 1);
}

TEST_CASE("switch lowering uses one arm edge per label") {
    const char* base = R"(
class A {
    int x;
    void run() {
        switch (x) {
        case 1:
            x = 1;
        case 2:
            x = 2;
        %s
        }
        x = 9;
    }
}
)";
    auto with = [&](const std::string& extra) {
        std::string src = base;
        src.replace(src.find("%s"), 2, extra);
        return lower_source(src);
    };

    const ProgramModel with_default = with("default:\n            x = 3;");
    const Cfg& cfg1 = method_of(with_default, "A", "run").cfg;
    const BasicBlock* head = nullptr;
    for (const auto& b : cfg1.blocks)
        if (b.branch) head = &b;
    REQUIRE(head != nullptr);
    CHECK(head->branch->kind == BranchKind::switch_branch);
    CHECK(head->branch->arms == 3);
    int arm_edges1 = 0;
    for (const auto& e : cfg1.edges)
        if (e.kind == EdgeKind::case_arm) ++arm_edges1;
    CHECK(arm_edges1 == 3);

    // without a default, an extra arm edge models the skip path
    const ProgramModel without_default = with("");
    const Cfg& cfg2 = method_of(without_default, "A", "run").cfg;
    const BasicBlock* head2 = nullptr;
    for (const auto& b : cfg2.blocks)
        if (b.branch) head2 = &b;
    REQUIRE(head2 != nullptr);
    CHECK(head2->branch->arms == 2);
    int arm_edges2 = 0;
    for (const auto& e : cfg2.edges)
        if (e.kind == EdgeKind::case_arm) ++arm_edges2;
    CHECK(arm_edges2 == 3);
}

TEST_CASE("loops lower to loop-body and loop-exit edges") {
    const ProgramModel m = lower_source(R"(
class B { void tick() {} }
class A {
    B b = new B();
    void run(int n) {
        int i = 0;
        while (i < n) {
            b.tick();
            i = i + 1;
        }
        for (int j = 0; j < 2; j = j + 1)
            b.tick();
    }
}
)");
    const Cfg& cfg = method_of(m, "A", "run").cfg;
    int body = 0, exit = 0;
    for (const auto& e : cfg.edges) {
        if (e.kind == EdgeKind::loop_body) ++body;
        if (e.kind == EdgeKind::loop_exit) ++exit;
    }
    CHECK(body == 2);
    CHECK(exit == 2);
}

TEST_CASE("lowering resolves members through inheritance") {
    const ProgramModel m = lower_source(R"(
class Base { int shared; void util() {} }
class Child extends Base {
    void run() {
        shared = 1;
        util();
    }
}
class User {
    Child c = new Child();
    void use() {
        c.util();
        c.shared = 2;
    }
}
)");
    const Cfg& cfg = method_of(m, "User", "use").cfg;
    bool saw_method = false, saw_attr = false;
    for (const auto& b : cfg.blocks)
        for (const auto& s : b.statements) {
            if (s.kind != StmtKind::call) continue;
            if (s.call->member_kind == MemberKind::method) {
                CHECK(s.call->target_class == "Base");
                CHECK(s.call->target_member == "util");
                saw_method = true;
            } else {
                CHECK(s.call->target_class == "Base");
                CHECK(s.call->target_member == "shared");
                saw_attr = true;
            }
        }
    CHECK(saw_method);
    CHECK(saw_attr);
}

TEST_CASE("lowering rejects bad programs") {
    CHECK_THROWS_WITH_AS(lower_source("class A { void m() { ghost = 1; } }"),
                         doctest::Contains("unknown identifier"), InputError);
    CHECK_THROWS_WITH_AS(
        lower_source("class A { A a; void m() { a.nope(); } }"),
        doctest::Contains("unknown method"), InputError);
    CHECK_THROWS_WITH_AS(
        lower_source("class A { A a; void m() { int x = a.ghost; } }"),
        doctest::Contains("unknown attribute"), InputError);
    CHECK_THROWS_WITH_AS(
        lower_source("class A { void m() { int x = 1; int x = 2; } }"),
        doctest::Contains("redeclaration"), InputError);
    CHECK_THROWS_AS(lower_source("class A { void m() { Ghost g = 1; } }"),
                    InputError);
    CHECK_THROWS_WITH_AS(
        lower_source("class A { int m() { return 1; int dead = 2; } }"),
        doctest::Contains("unreachable"), InputError);
    std::vector<minij::Unit> dup;
    dup.push_back(minij::parse_unit("class A {}", "one.minij"));
    dup.push_back(minij::parse_unit("class A {}", "two.minij"));
    CHECK_THROWS_AS(minij::lower(dup, "dup"), InputError);
}

TEST_CASE("condition calls are recorded in the governing block") {
    const ProgramModel m = lower_source(R"(
class B { int check() { return 1; } }
class A {
    B b = new B();
    void run() {
        if (b.check() > 0)
            b.check();
    }
}
)");
    const Cfg& cfg = method_of(m, "A", "run").cfg;
    const BasicBlock* head = nullptr;
    for (const auto& b : cfg.blocks)
        if (b.branch) head = &b;
    REQUIRE(head != nullptr);
    REQUIRE(head->statements.size() == 1);
    CHECK(head->statements[0].kind == StmtKind::call);
    CHECK(head->branch->predicate->kind == PredicateExpr::Kind::opaque);
}
