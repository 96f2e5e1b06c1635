#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "dim/cli.hpp"
#include "dim/io.hpp"

using namespace dim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("dim_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
    std::string graph(const std::string& name, const Graph& g) const {
        std::ostringstream s;
        write_graph(s, g);
        return write(name, s.str());
    }
};

nlohmann::json without_timings(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    j.erase("timings");
    return j;
}

}  // namespace

TEST_CASE("solve exit codes") {
    Scratch s;
    auto diamond = run({"solve", s.graph("diamond.txt", gadget("diamond")), "--json"});
    CHECK(diamond.code == kExitFound);
    auto report = nlohmann::json::parse(diamond.out);
    CHECK(report["schema"] == 1);
    CHECK(report["verdict"] == "found");
    CHECK(report["matching"] == nlohmann::json::parse("[[2, 4]]"));

    CHECK(run({"solve", s.graph("c4.txt", gadget("C4"))}).code == kExitNoDim);

    auto k4 = run({"solve", s.graph("k4.txt", gadget("K4")), "--verify-class", "--json"});
    CHECK(k4.code == kExitNoDim);
    CHECK(nlohmann::json::parse(k4.out)["reason"] == "K4 found");

    auto spider = run({"solve", s.graph("s124.txt", gadget("S_{1,2,4}")), "--verify-class"});
    CHECK(spider.code == kExitClassViolation);

    CHECK(run({"solve", s.write("bad.txt", "p edge 2 1\ne 1 5\n")}).code == kExitUsage);
    CHECK(run({"solve", (s.dir / "missing.txt").string()}).code == kExitUsage);
    CHECK(run({"solve"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check") {
    Scratch s;
    const std::string c6 = s.graph("c6.txt", gadget("C6"));
    CHECK(run({"check", c6, s.write("good.m", "m 1 2\nm 4 5\n")}).code == 0);
    CHECK(run({"check", c6, s.write("short.m", "m 1 2\n")}).code != 0);
    CHECK(run({"check", s.graph("p3.txt", gadget("P3")), s.write("p3.m", "m 1 2\n")}).code == 0);
    CHECK(run({"check", c6, s.write("absent.m", "m 1 3\n")}).code == kExitUsage);
    CHECK(run({"check", c6, s.write("range.m", "m 1 9\n")}).code == kExitUsage);
}

TEST_CASE("solve report round-trips through check") {
    Scratch s;
    GenSpec spec;
    spec.n = 80;
    spec.seed = 3;
    const std::string g = s.graph("planted.txt", generate_planted(spec).graph);
    auto solved = run({"solve", g, "--json"});
    REQUIRE(solved.code == 0);
    CHECK(run({"check", g, s.write("report.json", solved.out)}).code == 0);
}

TEST_CASE("detect") {
    Scratch s;
    auto spider = run({"detect", s.graph("s.txt", gadget("S_{1,2,4}")), "s", "1", "2", "4"});
    REQUIRE(spider.code == 0);
    CHECK(nlohmann::json::parse(spider.out)["witnesses"].size() == 1);
    auto p7 = run({"detect", s.graph("p7.txt", gadget("P7")), "s 1 2 4"});
    CHECK(nlohmann::json::parse(p7.out)["witnesses"].empty());
    auto d = run({"detect", s.graph("d.txt", gadget("diamond")), "diamond"});
    auto list = nlohmann::json::parse(d.out)["witnesses"];
    REQUIRE(list.size() == 1);
    CHECK(list[0]["mid_edge"] == nlohmann::json::parse("[2, 4]"));
    auto forced = run({"detect", s.graph("b.txt", gadget("butterfly")), "forced"});
    CHECK(nlohmann::json::parse(forced.out)["edges"] == nlohmann::json::parse("[[1, 2], [3, 4]]"));
    CHECK(run({"detect", s.graph("x.txt", gadget("P3")), "hexagon"}).code == kExitUsage);
}

TEST_CASE("filter names") {
    CHECK(parse_filter("S_{1,2,4}")->legs[2] == 4);
    CHECK(parse_filter("s 1 2 4")->legs[1] == 2);
    CHECK(parse_filter("claw")->legs[0] == 1);
    CHECK(parse_filter("K4")->pattern == Pattern::K4);
    CHECK_FALSE(parse_filter("s 1 2"));
    CHECK_FALSE(parse_filter("square"));
}

TEST_CASE("oracle and generate") {
    Scratch s;
    auto c6 = run({"oracle", s.graph("c6.txt", gadget("C6")), "--enumerate", "--json"});
    CHECK(c6.code == 0);
    CHECK(nlohmann::json::parse(c6.out)["all"].size() == 3);
    CHECK(run({"oracle", s.graph("c5.txt", gadget("C5"))}).code == 1);

    const std::string g1 = (s.dir / "g1.txt").string(), m1 = (s.dir / "m1.txt").string();
    REQUIRE(run({"generate", "-n", "40", "--seed", "9", "-o", g1, "--matching-out", m1}).code == 0);
    CHECK(run({"check", g1, m1}).code == 0);
    auto again = run({"generate", "-n", "40", "--seed", "9"});
    std::ifstream first(g1);
    CHECK(std::string(std::istreambuf_iterator<char>(first), {}) == again.out);
    auto gadget_out = run({"generate", "--mode", "gadget", "--gadget", "C6"});
    CHECK(gadget_out.out.find("p edge 6 6") != std::string::npos);
    CHECK(run({"generate", "--mode", "gadget", "--gadget", "nonsense"}).code == kExitUsage);
    CHECK(run({"generate", "--mode", "rejection", "-n", "12", "--density", "0.3"}).code == 0);
}

TEST_CASE("compare") {
    Scratch s;
    fs::create_directories(s.dir / "empty");
    auto empty = run({"compare", "--dir", (s.dir / "empty").string()});
    CHECK(empty.code == 0);
    CHECK(empty.err.find("warning") != std::string::npos);

    auto exhaustive = run({"compare", "--exhaustive", "5", "--json", "--threads", "2"});
    CHECK(exhaustive.code == 0);
    auto report = nlohmann::json::parse(exhaustive.out);
    CHECK(report["disagreements"] == 0);
    CHECK(report["instances"] == 667);

    auto planted = run({"compare", "--planted", "200", "--count", "5", "--json", "--min-weight"});
    CHECK(planted.code == 0);
    CHECK(nlohmann::json::parse(planted.out)["agreement_matrix"]["found/oracle-found"] == 5);

    auto dir = s.dir / "corpus";
    fs::create_directories(dir);
    std::ofstream(dir / "a.txt") << "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n";
    std::ofstream(dir / "b.txt") << "p edge 3 2\ne 1 2\ne 2 3\n";
    auto files = run({"compare", "--dir", dir.string(), "--json"});
    CHECK(files.code == 0);
    CHECK(nlohmann::json::parse(files.out)["instances"] == 2);
}

TEST_CASE("reports are deterministic apart from timings") {
    Scratch s;
    GenSpec spec;
    spec.n = 120;
    spec.seed = 4;
    spec.max_weight = 5;
    const std::string g = s.graph("w.txt", generate_planted(spec).graph);
    auto a = run({"solve", g, "--json", "--min-weight", "--audit"});
    auto b = run({"solve", g, "--json", "--min-weight", "--audit"});
    CHECK(without_timings(a.out) == without_timings(b.out));
    CHECK(nlohmann::json::parse(a.out).contains("timings"));
}

TEST_CASE("worker count honours the environment") {
    ::setenv("DIM_SOLVER_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("DIM_SOLVER_THREADS", "zero", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("DIM_SOLVER_THREADS");
}
