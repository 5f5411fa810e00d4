#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const std::string kBin = DUALMINK_CLI;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "dualmink_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string spit(const std::string& name, const std::string& content) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p);
    f << content;
    return p.string();
}

nlohmann::json parse_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    return nlohmann::json::parse(f);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

std::string square_measure() {
    return spit("square.json", R"({"n": 2, "atoms": [
        {"u": [1, 0], "w": 1}, {"u": [-1, 0], "w": 1},
        {"u": [0, 1], "w": 1}, {"u": [0, -1], "w": 1}]})");
}

std::string antipodal_group() {
    return spit("pm.json", R"({"n": 2, "generators": [[[-1, 0], [0, -1]]]})");
}

} // namespace

TEST_CASE("missing subcommand and unknown flags are usage errors") {
    CHECK(run("") == 1);
    CHECK(run("--definitely-not-a-flag") == 1);
    CHECK(run("solve") == 1); // missing required positionals
}

TEST_CASE("analyze-group reports structure") {
    const auto gp = spit("sign_even.json",
                         R"({"n": 3, "generators": [
                             [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
                             [[-1, 0, 0], [0, 1, 0], [0, 0, -1]]]})");
    const auto out = (work_dir() / "ag.json").string();
    REQUIRE(run("analyze-group " + gp + " --out " + out) == 0);
    const auto j = parse_file(out);
    CHECK(j["order"] == 4);
    CHECK(j["ambient"] == 3);
    CHECK(j["fix_dim"] == 0);
    CHECK(j["irreducible"] == false);
}

TEST_CASE("check gates on the exponent") {
    const auto mp = square_measure();
    const auto gp = antipodal_group();
    CHECK(run("check " + mp + " " + gp + " --q 1.2") == 0);
    CHECK(run("check " + mp + " " + gp + " --q 3") == 3);
}

TEST_CASE("check requires invariance unless asked to symmetrize") {
    const auto mp = spit("skew.json", R"({"n": 2, "atoms": [
        {"u": [1, 0], "w": 1}, {"u": [0, 1], "w": 1}]})");
    const auto gp = antipodal_group();
    CHECK(run("check " + mp + " " + gp + " --q 1.2") == 3);
    CHECK(run("check " + mp + " " + gp + " --q 1.2 --symmetrize") == 0);
}

TEST_CASE("solve then verify round trip") {
    const auto mp = square_measure();
    const auto gp = antipodal_group();
    const auto out = (work_dir() / "res.json").string();
    REQUIRE(run("solve " + mp + " " + gp +
                " --q 2 --quad-nodes 20000 --out " + out) == 0);
    const auto j = parse_file(out);
    CHECK(j["converged"] == true);
    CHECK(j["residual_tv"].get<double>() < 1e-3);
    CHECK(run("verify " + mp + " " + out + " --q 2 --quad-nodes 30000") == 0);
}

TEST_CASE("solve output is deterministic for a fixed seed") {
    const auto mp = square_measure();
    const auto gp = antipodal_group();
    const auto a = (work_dir() / "det_a.json").string();
    const auto b = (work_dir() / "det_b.json").string();
    const std::string base = "solve " + mp + " " + gp + " --q 1.4 --quad-nodes 20000 --seed 7";
    REQUIRE(run(base + " --out " + a) == 0);
    REQUIRE(run(base + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("verify rejects a measure that does not match the body") {
    const auto gp = antipodal_group();
    const auto out = (work_dir() / "res3.json").string();
    REQUIRE(run("solve " + square_measure() + " " + gp +
                " --q 2 --quad-nodes 20000 --out " + out) == 0);
    const auto tri = spit("tri.json", R"({"n": 2, "atoms": [
        {"u": [0, 1], "w": 1}, {"u": [-0.8660254, -0.5], "w": 1},
        {"u": [0.8660254, -0.5], "w": 1}]})");
    CHECK(run("verify " + tri + " " + out + " --q 2") == 2);
}

TEST_CASE("solve refuses unsolvable data with a condition failure") {
    const auto mp = spit("line.json", R"({"n": 2, "atoms": [
        {"u": [1, 0], "w": 1}, {"u": [-1, 0], "w": 1}]})");
    CHECK(run("solve " + mp + " " + antipodal_group() + " --q 1") == 3);
}

TEST_CASE("john reports semi-axes and the sandwich") {
    const auto bp = spit("rect.json", R"({"n": 2,
        "normals": [[1, 0], [-1, 0], [0, 1], [0, -1]],
        "h": [1.5, 1.5, 0.7, 0.7]})");
    const auto out = (work_dir() / "john.json").string();
    REQUIRE(run("john " + bp + " --sandwich --out " + out) == 0);
    const auto j = parse_file(out);
    REQUIRE(j["semi_axes"].size() == 2);
    CHECK(j["semi_axes"][0].get<double>() == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(j["semi_axes"][1].get<double>() == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(j["sandwich"] == true);
}

TEST_CASE("audit compares the two condition families") {
    CHECK(run("audit " + square_measure() + " " + antipodal_group()) == 0);
}

TEST_CASE("malformed input exits with the input-error code") {
    const auto bad = spit("bad.json", "{ not json");
    CHECK(run("check " + bad + " " + antipodal_group() + " --q 1") == 2);
    CHECK(run("analyze-group " + bad) == 2);
}

TEST_CASE("selftest rejects an out-of-range index") {
    CHECK(run("selftest 999") == 3);
}
