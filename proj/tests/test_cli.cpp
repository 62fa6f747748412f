#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CITORDER_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string triad() { return std::string(CITORDER_SAMPLES_DIR) + "/triad"; }

json run_json(const std::string& args) {
    const RunResult r = run(args);
    CAPTURE(r.out);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("analyze reports the expected triad numbers") {
    const json d = run_json("analyze --input " + triad() + " --no-timestamp");
    CHECK(d["model"] == "triad");
    CHECK(d["classes"] == 3);
    CHECK(d["stats"]["edges"] == 5);
    CHECK(d["stats"]["transitive_only"] == 1);
    CHECK(d["chains"].size() == 2);
    CHECK(d["chains"][0]["t"] == 0.3125);
    CHECK(d["chains"][1]["t"] == 0.75);
    bool found = false;
    for (const auto& e : d["graph"]["edges"])
        if (e["from"] == "A" && e["to"] == "C") {
            CHECK(e["T"] == 0.828125);
            CHECK(e["label"] == "T");
            found = true;
        }
    CHECK(found);
    CHECK(!d.contains("timestamp"));
    CHECK(!d.contains("explain"));
}

TEST_CASE("analyze can explain statement probabilities") {
    const json d =
        run_json("analyze --input " + triad() + " --no-timestamp --explain");
    REQUIRE(d.contains("explain"));
    bool found = false;
    for (const auto& entry : d["explain"]) {
        if (entry["class"] != "A" || entry["method"] != "methodA1") continue;
        for (const auto& s : entry["statements"])
            if (s["line"] == 8) {
                CHECK(s["probability"] == 0.25);
                CHECK(s["call"] == "B.methodB1");
                found = true;
            }
    }
    CHECK(found);
}

TEST_CASE("analyze accepts pmif and minij input") {
    const std::string pmif_path = "/tmp/citorder_cli_triad.pmif.json";
    CHECK(run("convert --input " + triad() + " --out " + pmif_path).code == 0);
    const json a = run_json("analyze --input " + pmif_path + " --no-timestamp");
    const json b = run_json("analyze --input " + triad() + " --no-timestamp");
    CHECK(a == b);

    // a single file works too, but triad/A.minij alone cannot resolve class B
    const RunResult single = run("analyze --input " + triad() + "/A.minij");
    CHECK(single.code == 1);
    CHECK(single.out.find("error:") != std::string::npos);
}

TEST_CASE("order strategies produce the known triad orders") {
    const json graph = run_json("order --input " + triad() +
                                " --strategy graph --break-any --no-timestamp");
    CHECK(graph["strategy"] == "graph_based");
    CHECK(graph["order"] == json::array({"C", "B", "A"}));
    CHECK(graph["removed_edges"] ==
          json::array({json::array({"C", "A"}), json::array({"B", "A"})}));
    CHECK(graph["cost"]["stubs"] == 2);
    CHECK(!graph.contains("runtime_seconds"));

    const json feedback = run_json("order --input " + triad() +
                                   " --strategy feedback --no-timestamp");
    CHECK(feedback["strategy"] == "multilevel_feedback");
    CHECK(feedback["order"] == json::array({"C", "B", "A"}));
    CHECK(!feedback.contains("removed_edges"));

    const json ria = run_json("order --input " + triad() +
                              " --strategy ria --seed 5 --iterations 200 "
                              "--no-timestamp");
    CHECK(ria["strategy"] == "random_iterative");
    CHECK(ria["seed"] == 5);
    CHECK(ria["iterations"] == 200);
    CHECK(ria["accepted_costs"].is_array());

    const json direct = run_json("order --input " + triad() +
                                 " --strategy graph --break-any "
                                 "--no-transitive --no-timestamp");
    CHECK(direct["order"] == json::array({"A", "C", "B"}));
    CHECK(direct["stubs"] == json::array({json::array({"A", "B"})}));
}

TEST_CASE("compare runs all strategies and the paired test") {
    const json d = run_json("compare --input " + triad() +
                            " --break-any --repeats 3 --no-timestamp");
    REQUIRE(d["strategies"].size() == 3);
    CHECK(d["repeats"] == 3);
    for (const auto& s : d["strategies"]) {
        CHECK(s["runs"].size() == 3);
        CHECK(s["mean_cost"]["ocplx"] == 0.5773502691896257);
        CHECK(!s.contains("runtime_seconds"));
        CHECK(!s.contains("rt"));
    }
    REQUIRE(d["wilcoxon"].size() == 3);
    for (const auto& wx : d["wilcoxon"]) {
        CHECK(wx["ocplx"]["result"] == "no-nonzero-differences");
        CHECK(!wx.contains("runtime"));
    }
}

TEST_CASE("compare honors strategy subsets and rt base") {
    const json d = run_json("compare --input " + triad() +
                            " --break-any --strategies feedback,ria "
                            "--repeats 2 --no-timestamp");
    REQUIRE(d["strategies"].size() == 2);
    CHECK(d["strategies"][0]["strategy"] == "multilevel_feedback");
    CHECK(d["strategies"][1]["strategy"] == "random_iterative");
    CHECK(d["wilcoxon"].size() == 1);

    const RunResult bad = run("compare --input " + triad() +
                              " --break-any --strategies ria --rt-base graph");
    CHECK(bad.code == 1);

    const json timed = run_json("compare --input " + triad() +
                                " --break-any --repeats 2 --serial");
    for (const auto& s : timed["strategies"]) {
        CHECK(s.contains("runtime_seconds"));
        CHECK(s.contains("rt"));
    }
    CHECK(timed["strategies"][1]["rt"] == 1.0);  // feedback against itself
}

TEST_CASE("deterministic output is byte identical") {
    const std::string args = "compare --input " + triad() +
                             " --break-any --repeats 3 --no-timestamp";
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("gen writes a loadable model") {
    const std::string out = "/tmp/citorder_cli_gen.pmif.json";
    const json d = run_json("gen --classes 7 --seed 3 --edge-density 0.3 --out " +
                            out + " --no-timestamp");
    CHECK(d["model"] == "synth-3-7");
    CHECK(d["classes"] == 7);
    const json a = run_json("analyze --input " + out + " --no-timestamp");
    CHECK(a["classes"] == 7);

    // without --out the pmif lands on stdout
    const RunResult raw = run("gen --classes 4 --seed 1");
    CHECK(raw.code == 0);
    const json model = json::parse(raw.out);
    CHECK(model["pmif_version"] == 1);
    CHECK(model["classes"].size() == 4);
}

TEST_CASE("table output stays human readable") {
    const RunResult r =
        run("analyze --input " + triad() + " --no-timestamp --table");
    CHECK(r.code == 0);
    CHECK(r.out.find("triad") != std::string::npos);
    CHECK(r.out.find("0.828125") != std::string::npos);
    CHECK(r.out.find("{") == std::string::npos);

    const RunResult o = run("order --input " + triad() +
                            " --strategy feedback --no-timestamp --table");
    CHECK(o.out.find("C -> B -> A") != std::string::npos);

    const RunResult c = run("compare --input " + triad() +
                            " --break-any --repeats 2 --no-timestamp --table");
    CHECK(c.code == 0);
    CHECK(c.out.find("graph_based") != std::string::npos);
}

TEST_CASE("weights are validated") {
    CHECK(run("analyze --input " + triad() + " --weights 0.2,0.3,0.5").code == 0);
    CHECK(run("analyze --input " + triad() + " --weights 0.5,0.5,0.5").code == 1);
    CHECK(run("analyze --input " + triad() + " --weights nope").code == 1);
    CHECK(run("analyze --input " + triad() + " --weights 1,1").code == 1);
}

TEST_CASE("exit codes distinguish failure classes") {
    CHECK(run("analyze --input /tmp/citorder_no_such_dir").code == 1);
    CHECK(run("order --input " + triad() + " --strategy dance").code == 1);
    CHECK(run("order --input " + triad() + " --strategy graph").code == 2);
    CHECK(run("--help").code == 0);
    CHECK(run("analyze --help").code == 0);
    CHECK(run("analyze --input " + triad() + " --max-chain-len 9").code == 1);
    CHECK(run("totally-bogus").code == 1);
}

TEST_CASE("output lands in a file with --out") {
    const std::string out = "/tmp/citorder_cli_report.json";
    std::remove(out.c_str());
    const RunResult r = run("analyze --input " + triad() + " --no-timestamp --out " +
                            out);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    REQUIRE(in.good());
    json d;
    in >> d;
    CHECK(d["model"] == "triad");
}

TEST_CASE("timestamps appear unless suppressed") {
    const json with = run_json("analyze --input " + triad());
    CHECK(with.contains("timestamp"));
    const json order = run_json("order --input " + triad() + " --strategy feedback");
    CHECK(order.contains("runtime_seconds"));
}
