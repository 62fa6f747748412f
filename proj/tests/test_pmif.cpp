#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "citorder/error.hpp"
#include "citorder/pmif.hpp"
#include "citorder/synth.hpp"
#include "support/model_builders.hpp"

using namespace citorder;
using namespace testutil;

namespace {

ProgramModel branching_model() {
    ProgramModel m;
    m.name = "branching";
    ClassDecl a;
    a.name = "A";
    a.attributes.push_back({"x", "int"});
    Cfg cfg;
    cfg.entry = 0;
    BasicBlock head;
    head.id = 0;
    head.statements.push_back(plain_stmt(0, 1, StmtKind::assignment));
    head.branch = BranchStmt{BranchKind::if_branch, 0,
                             PredicateExpr::cmp("x", CmpOp::gt, 2.0)};
    BasicBlock then_b;
    then_b.id = 1;
    then_b.statements.push_back(call_stmt(1, 2, "B", "go"));
    BasicBlock join;
    join.id = 2;
    join.statements.push_back(plain_stmt(2, 4, StmtKind::ret));
    cfg.blocks = {head, then_b, join};
    cfg.edges = {{0, 1, EdgeKind::branch_true, -1},
                 {0, 2, EdgeKind::branch_false, -1},
                 {1, 2, EdgeKind::fallthrough, -1}};
    a.methods.push_back(method_decl("run", cfg, "int"));
    ClassDecl b;
    b.name = "B";
    b.methods.push_back(method_decl("go", straight_cfg({})));
    m.classes.push_back(std::move(a));
    m.classes.push_back(std::move(b));
    validate(m);
    return m;
}

}  // namespace

TEST_CASE("save then load reproduces the model") {
    const ProgramModel m = branching_model();
    const std::string text = save_pmif(m);
    const ProgramModel back = load_pmif(text);
    CHECK(back.name == m.name);
    REQUIRE(back.classes.size() == m.classes.size());
    CHECK(back.classes[0].attributes == m.classes[0].attributes);
    CHECK(back.classes[0].methods[0].cfg.blocks ==
          m.classes[0].methods[0].cfg.blocks);
    CHECK(back.classes[0].methods[0].cfg.edges == m.classes[0].methods[0].cfg.edges);
    CHECK(save_pmif(back) == text);
}

TEST_CASE("synthetic models survive byte-exact round trips") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SynthSpec spec;
        spec.classes = 3 + static_cast<int>(seed % 6);
        spec.edge_density = 0.1 + 0.08 * static_cast<double>(seed % 5);
        spec.seed = seed;
        const std::string text = save_pmif(generate_synthetic(spec));
        CHECK(save_pmif(load_pmif(text)) == text);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(
        save_pmif(branching_model()));
    j["classes"][0]["surprise"] = 1;
    CHECK_THROWS_WITH_AS(load_pmif(j.dump()), doctest::Contains("surprise"),
                         InputError);
}

TEST_CASE("missing and malformed fields are rejected") {
    const std::string good = save_pmif(branching_model());

    auto mutate = [&](auto fn) {
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(good);
        fn(j);
        return j.dump();
    };

    CHECK_THROWS_AS(load_pmif("not json"), InputError);
    CHECK_THROWS_AS(load_pmif("[1,2]"), InputError);
    CHECK_THROWS_AS(
        load_pmif(mutate([](auto& j) { j["pmif_version"] = 99; })), InputError);
    CHECK_THROWS_AS(load_pmif(mutate([](auto& j) { j.erase("classes"); })),
                    InputError);
    CHECK_THROWS_AS(load_pmif(mutate([](auto& j) {
                        j["classes"][0]["methods"][0]["cfg"]["edges"][0]["kind"] =
                            "sideways";
                    })),
                    InputError);
    CHECK_THROWS_AS(load_pmif(mutate([](auto& j) {
                        j["classes"][0]["methods"][0]["cfg"]["blocks"][0]
                         ["statements"][0]["kind"] = "noise";
                    })),
                    InputError);
    CHECK_THROWS_AS(load_pmif(mutate([](auto& j) {
                        j["classes"][0]["name"] = 7;
                    })),
                    InputError);
}

TEST_CASE("loaded models are validated") {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(save_pmif(branching_model()));
    j["classes"][0]["methods"][0]["cfg"]["blocks"][1]["statements"][0]
     ["call"]["target_member"] = "missing";
    CHECK_THROWS_AS(load_pmif(j.dump()), InputError);
}

TEST_CASE("file round trip") {
    const ProgramModel m = branching_model();
    const std::string path = "/tmp/citorder_pmif_test.json";
    save_pmif_file(m, path);
    const ProgramModel back = load_pmif_file(path);
    CHECK(save_pmif(back) == save_pmif(m));
    CHECK_THROWS_AS(load_pmif_file("/tmp/citorder_missing_file.json"), InputError);
}

TEST_CASE("case edges keep their arm index") {
    ProgramModel m;
    m.name = "sw";
    ClassDecl a;
    a.name = "A";
    Cfg cfg;
    cfg.entry = 0;
    BasicBlock head;
    head.id = 0;
    head.branch = BranchStmt{BranchKind::switch_branch, 3, std::nullopt};
    BasicBlock arm0, arm1, arm2;
    arm0.id = 1;
    arm1.id = 2;
    arm2.id = 3;
    cfg.blocks = {head, arm0, arm1, arm2};
    cfg.edges = {{0, 1, EdgeKind::case_arm, 0},
                 {0, 2, EdgeKind::case_arm, 1},
                 {0, 3, EdgeKind::case_arm, 2}};
    a.methods.push_back(method_decl("run", cfg));
    m.classes.push_back(std::move(a));
    validate(m);

    const std::string text = save_pmif(m);
    CHECK(text.find("case(2)") != std::string::npos);
    const ProgramModel back = load_pmif(text);
    CHECK(back.classes[0].methods[0].cfg.edges == m.classes[0].methods[0].cfg.edges);
}
