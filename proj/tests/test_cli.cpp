// End-to-end tests of the command-line tool: exit codes, file formats,
// golden outputs. Each test shells out to the built binary.

#include "bvx/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "bvx_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    fs::path out = work_dir() / "stdout.txt";
    fs::path err = work_dir() / "stderr.txt";
    std::string cmd = std::string(BVX_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(status);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string write_file(const std::string& name, const std::string& content) {
    fs::path p = work_dir() / name;
    std::ofstream(p) << content;
    return p.string();
}

std::string slurp_path(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate: odometer preset is properly ordered, exit 0") {
    auto r = run("validate --diagram odometer3");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"properly_ordered\": true") != std::string::npos);
}

TEST_CASE("validate: structural violations exit 1 with a report on stderr") {
    std::string bad = write_file("bad.json", R"({
      "levels": [["v"], ["v"]],
      "edges": [[{"source": 0, "range": 7, "order": 0, "label": null}]],
      "repeat_from": 0
    })");
    auto r = run("validate --diagram " + bad + " --json");
    CHECK(r.code == 1);
    CHECK(r.err.find("dangling_range") != std::string::npos);
}

TEST_CASE("malformed input exits 2") {
    std::string garbage = write_file("garbage.json", "not json at all {");
    CHECK(run("validate --diagram " + garbage).code == 2);
    CHECK(run("measure --diagram /nonexistent/nope.json").code == 2);
    CHECK(run("bogus-subcommand").code == 2);
}

TEST_CASE("label-auto then fiber: the singleton at the maximal path") {
    std::string labeled = (work_dir() / "labeled_odo3.json").string();
    auto r = run("label-auto --diagram odometer3 --ifs interval2 --out " + labeled);
    REQUIRE(r.code == 0);

    auto f = run("fiber --diagram " + labeled + " --ifs interval2 --point max --depth 3 --json");
    CHECK(f.code == 0);
    CHECK(f.out.find("\"type\": \"singleton\"") != std::string::npos);
    CHECK(f.out.find("\"7/8\"") != std::string::npos);
    CHECK(f.out.find("\"diameter\": \"1/8\"") != std::string::npos);

    auto copy = run("fiber --diagram " + labeled + " --ifs interval2 --point id:0 --depth 3 --json");
    CHECK(copy.code == 0);
    CHECK(copy.out.find("\"type\": \"copy\"") != std::string::npos);
    CHECK(copy.out.find("\"1/2\"") != std::string::npos);
}

TEST_CASE("validate accepts its own label-auto output") {
    std::string labeled = (work_dir() / "labeled_check.json").string();
    REQUIRE(run("label-auto --diagram odometer3 --ifs interval2 --out " + labeled).code == 0);
    auto r = run("validate --diagram " + labeled + " --ifs interval2");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"id_path_strong\": true") != std::string::npos);
}

TEST_CASE("telescope: canonical JSON round-trips byte-stably") {
    std::string t1 = (work_dir() / "tele1.json").string();
    std::string t2 = (work_dir() / "tele2.json").string();
    REQUIRE(run("telescope --diagram odometer3 --cuts 0,2 --out " + t1).code == 0);
    REQUIRE(run("telescope --diagram odometer3 --cuts 0,2 --out " + t2).code == 0);
    CHECK(slurp_path(t1) == slurp_path(t2));
    CHECK(run("validate --diagram " + t1).code == 0);

    // parse + canonical re-serialization reproduces the file exactly
    auto d = bvx::load_diagram(t1);
    CHECK(bvx::diagram_to_json(d) == slurp_path(t1));

    CHECK(run("telescope --diagram odometer3 --cuts 2,0").code == 1);  // bad cuts
}

TEST_CASE("orbit CSV: step, prefix ranks, tail tag") {
    auto r = run("orbit --diagram odometer3 --point min --depth 2 --steps 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("0,\"0,0\",min") == 0);
    CHECK(r.out.find("1,\"1,0\",min") != std::string::npos);
    CHECK(r.out.find("2,\"2,0\",min") != std::string::npos);
    CHECK(r.out.find("3,\"0,1\",min") != std::string::npos);
}

TEST_CASE("extended orbit CSV carries exact coordinates") {
    std::string labeled = (work_dir() / "labeled_orbit.json").string();
    REQUIRE(run("label-auto --diagram odometer3 --ifs interval2 --out " + labeled).code == 0);
    auto r = run("orbit --diagram " + labeled +
                 " --ifs interval2 --point id:0 --coord 1/2 --steps 1");
    CHECK(r.code == 0);
    // start: prefix (rank 0), actual coordinate f_0(1/2) = 1/4
    CHECK(r.out.find("0,\"0\",exact,\"1/4\"") == 0);
    CHECK(r.out.find("1,\"1\",exact,\"1/2\"") != std::string::npos);
}

TEST_CASE("measure: base and lifted") {
    auto r = run("measure --diagram odometer3 --cylinder 0,0,0");
    CHECK(r.code == 0);
    CHECK(r.out == "1/27\n");

    auto empty = run("measure --diagram odometer3");
    CHECK(empty.out == "1\n");

    std::string labeled = (work_dir() / "labeled_measure.json").string();
    REQUIRE(run("label-auto --diagram odometer3 --ifs interval2 --out " + labeled).code == 0);
    auto lifted = run("measure --diagram " + labeled + " --ifs interval2 --lift --cylinder 1");
    CHECK(lifted.code == 0);
    CHECK(lifted.out == "1/3\n");

    // measures need a stationary diagram: exit 1, not a crash
    std::string finite = write_file("finite.json", R"({
      "levels": [["v"], ["v"]],
      "edges": [[{"source": 0, "range": 0, "order": 0, "label": null},
                 {"source": 0, "range": 0, "order": 1, "label": null},
                 {"source": 0, "range": 0, "order": 2, "label": null}]],
      "repeat_from": null
    })");
    CHECK(run("measure --diagram " + finite).code == 1);
}

TEST_CASE("k0: map and equality") {
    auto mapped = run("k0 --diagram odometer3 --element 0:1 --to-level 2");
    CHECK(mapped.code == 0);
    CHECK(mapped.out == "2:9\n");

    auto eq = run("k0 --diagram odometer3 --element 0:1 --equal 3:27");
    CHECK(eq.code == 0);
    CHECK(eq.out == "true\n");
    auto ne = run("k0 --diagram odometer3 --element 0:1 --equal 1:1");
    CHECK(ne.out == "false\n");
}

TEST_CASE("render: carpet PGM has 64 set pixels at depth 2") {
    std::string pgm = (work_dir() / "carpet.pgm").string();
    REQUIRE(run("render --ifs carpet --depth 2 --out " + pgm).code == 0);
    std::string data = slurp_path(pgm);
    const std::string header = "P5\n9 9\n1\n";
    REQUIRE(data.rfind(header, 0) == 0);
    std::string pixels = data.substr(header.size());
    REQUIRE(pixels.size() == 81);
    int set = 0;
    for (char c : pixels) set += c == 1 ? 1 : 0;
    CHECK(set == 64);
}

TEST_CASE("render: cantor CSV and depth zero") {
    auto csv = run("render --ifs cantor3 --depth 3 --csv");
    CHECK(csv.code == 0);
    int rows = 0;
    for (char c : csv.out) rows += c == '\n' ? 1 : 0;
    CHECK(rows == 8);
    CHECK(csv.out.find("1/27") != std::string::npos);

    std::string pgm = (work_dir() / "zero.pgm").string();
    REQUIRE(run("render --ifs carpet --depth 0 --out " + pgm).code == 0);
    std::string data = slurp_path(pgm);
    CHECK(data == std::string("P5\n1 1\n1\n") + std::string(1, static_cast<char>(1)));

    CHECK(run("render --ifs cantor3 --depth 1 --out x.pgm").code == 1);  // dimension 1
}

TEST_CASE("probe: refined cylinders are all visited") {
    std::string labeled = (work_dir() / "labeled_probe.json").string();
    REQUIRE(run("label-auto --diagram odometer3 --ifs interval2 --out " + labeled).code == 0);
    auto r = run("probe --diagram " + labeled +
                 " --ifs interval2 --point id: --coord 1/2 --depth 1 --eps-exp 1 --budget 500 --json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"all_visited\": true") != std::string::npos);
}

TEST_SUITE_END();
