#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "shgh/degeneration.hpp"
#include "shgh/notation.hpp"

using namespace shgh;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string bin() {
    const char* b = std::getenv("SHGH_BIN");
    REQUIRE_MESSAGE(b != nullptr, "SHGH_BIN not set");
    return b;
}

std::string scratch_cache() {
    static std::string dir = (std::filesystem::temp_directory_path() / ("shgh-cli-" + std::to_string(::getpid()))).string();
    return dir;
}

// args are single-quoted; none of them contain quotes
Run run(const std::vector<std::string>& args, bool with_cache = true) {
    std::string cmd = bin();
    if (with_cache) cmd += " --cache-dir '" + scratch_cache() + "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " 2>&1";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = ::pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("dim examples") {
    auto r = run({"dim", "174; 55^10"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "dim: -1\n"));
    CHECK(has(r.out, "status: CONJECTURAL"));

    r = run({"dim", "2; 2^2"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "dim: 0\n"));
    CHECK(has(r.out, "status: PROVEN"));

    r = run({"dim", "3; 1^9"});
    CHECK(has(r.out, "dim: 0\n"));
    CHECK(has(r.out, "status: PROVEN"));

    r = run({"dim", "5; 1, "});
    CHECK(r.code == 2);
    CHECK(has(r.out, "position"));
}

TEST_CASE("reduce tables") {
    auto r = run({"reduce", "54; 36,15^6"});
    CHECK(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "54; _36_, _15_, _15_, 15, 15, 15, 15");
    CHECK(ls[3] == "18; 0, 3, 3, 3, 3, 3, 3");

    r = run({"--format", "json", "reduce", "54; 36,15^6"});
    auto j = json::parse(r.out);
    CHECK(render_system(system_from_json(j["result"])) == "18; 0, 3^6");

    r = run({"reduce", "24; 11^4,[4,4]^2"});
    ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    j = json::parse(run({"--format", "json", "reduce", "24; 11^4,[4,4]^2"}).out);
    CHECK(render_system(system_from_json(j["result"])) == "7; 2^3, 3, [0,0]^2");

    r = run({"reduce", "10; 3, 3, 3"});
    CHECK(lines(r.out).size() == 1);
}

TEST_CASE("oracle examples and refusal") {
    auto r = run({"oracle", "4; 2^5"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "dim: 0\n"));
    CHECK(has(r.out, "status: UPPER-BOUND-ONLY"));
    CHECK(has(r.out, "note: "));

    r = run({"oracle", "19; 6^10"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "status: CERTIFIED-EMPTY"));

    r = run({"oracle", "174; 55^10"});
    CHECK(r.code == 3);
    CHECK(has(r.out, "--long"));

    r = run({"--prime", "5", "oracle", "7; 2"});
    CHECK(r.code == 2);
    r = run({"--prime", "12", "oracle", "3; 1"});
    CHECK(r.code == 2);
    r = run({"--trials", "0", "oracle", "3; 1"});
    CHECK(r.code == 2);
}

TEST_CASE("oracle --long on L(174; 55^10)") {
    // uses the committed witness when present, else recomputes (about a minute)
    std::string cmd_cache = SHGH_WITNESS_DIR;
    std::string cmd = bin() + " --cache-dir '" + cmd_cache + "' oracle '174; 55^10' --long 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int st = ::pclose(p);
    CHECK(WEXITSTATUS(st) == 0);
    CHECK(has(out, "status: CERTIFIED-EMPTY"));
    CHECK(has(out, "of 15400x15400"));
}

TEST_CASE("degen") {
    auto r = run({"degen", "100", "30", "0", "1"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "validation: ok"));
    auto j = json::parse(run({"--format", "json", "degen", "100", "30", "0", "1"}).out);
    CHECK(j["fiber"]["components"].size() == 2);

    j = json::parse(run({"--format", "json", "degen", "174", "55", "6", "3"}).out);
    CHECK(j["fiber"]["components"].size() == 5);
    Fiber f = fiber_from_json(j["fiber"]);
    CHECK(f.component("T").bundle.degree == 16);
    CHECK(to_json(f) == j["fiber"]);

    r = run({"degen", "174", "55", "6", "2"});
    CHECK(r.code == 2);
    CHECK(has(r.out, "hypothesis error"));
    CHECK(has(r.out, "16/5 <= d/m"));

    r = run({"degen", "60", "19", "0", "9"});
    CHECK(r.code == 2);

    r = run({"degen", "100", "30", "0", "1", "--ledger"});
    CHECK(has(r.out, "verdict: dim = "));
}

TEST_CASE("case scripts") {
    auto r = run({"case", "174", "55"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "a_min = 6"));
    CHECK(has(r.out, "a_max = 8"));
    CHECK(has(r.out, "verdict: EMPTY"));
    r = run({"case", "193", "61", "7"});
    CHECK(has(r.out, "verdict: dim = 4"));
    r = run({"case", "348", "110", "14"});
    CHECK(has(r.out, "verdict: dim <= 24"));
    r = run({"case", "177", "56"});
    CHECK(r.code == 2);
}

TEST_CASE("scan") {
    auto r = run({"--format", "json", "scan", "174/55", "19/6", "200"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    std::set<std::string> odd;
    for (const auto& row : j["rows"]) {
        std::string v = row["verdict"];
        if (v != "NON-SPECIAL" && v != "CITED") odd.insert(row["d"].dump() + "/" + row["m"].dump());
    }
    CHECK(odd == std::set<std::string>{"174/55", "193/61"});

    r = run({"--jobs", "2", "--format", "json", "scan", "174/55", "19/6", "200", "--all-pairs"});
    CHECK(json::parse(r.out)["counts"]["CASE-SCRIPT"] == 3);

    r = run({"scan", "x", "3", "10"});
    CHECK(r.code == 2);
}

TEST_CASE("verify-paper fast") {
    auto r = run({"verify-paper"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "0 failed"));
    auto j = json::parse(run({"--format", "json", "verify-paper"}).out);
    CHECK(j["passed"] == true);
    CHECK(j["criteria"].size() == 9);
    r = run({"verify-paper", "--level", "medium"});
    CHECK(r.code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"--format", "xml", "dim", "3; 1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json round trips and determinism") {
    for (const char* s : {"24; 11^4, [4,4]^2", "6; [2,1]^2, 2", "174; 55^10"}) {
        auto out = run({"--format", "json", "dim", s}).out;
        auto j = json::parse(out);
        auto sys = system_from_json(j["system"]);
        CHECK(sys.cls == parse_system(s).cls);
        CHECK(sys.cfg == parse_system(s).cfg);
        CHECK(json::parse(j.dump()) == j);
        CHECK(run({"--format", "json", "dim", s}).out == out);
    }
    std::vector<std::vector<std::string>> cmds = {
        {"--format", "json", "--no-cache", "oracle", "13; 4^10"},
        {"--format", "json", "oracle", "13; 4^10"},
        {"--format", "json", "degen", "348", "110", "14", "4"},
        {"--format", "json", "scan", "3", "inf", "12"},
        {"--format", "json", "--seed", "9", "--trials", "2", "oracle", "6; 2^6"},
    };
    for (const auto& c : cmds) CHECK(run(c).out == run(c).out);
    // cached and fresh witnesses print the same JSON
    CHECK(run(cmds[0]).out == run(cmds[1]).out);
    std::filesystem::remove_all(scratch_cache());
}
