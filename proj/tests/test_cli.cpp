#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dbridge/cli.hpp"
#include "json.hpp"

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = dbridge::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> ls;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) ls.push_back(line);
    return ls;
}

} // namespace

TEST_CASE("spectrum: resonant ratio emits branch markers only") {
    RunResult r = run_cli({"spectrum", "--alpha", "1/2", "--nmax", "2"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out ==
          "family,n,omega,k,shift,branch\n"
          "plus,2,,,1,1\n"
          "plus,2,,,-1,1\n"
          "minus,1,,,1,1\n"
          "minus,1,,,-1,1\n"
          "# count=4 isolated=0 branch=4\n");
}

TEST_CASE("scan: identical output for any thread count") {
    std::vector<std::string> base = {"scan", "--alpha", "inv_sqrt3",
                                     "--nmax", "200000", "--threads"};
    std::vector<std::string> a1 = base, a4 = base;
    a1.push_back("1");
    a4.push_back("4");
    RunResult r1 = run_cli(a1);
    RunResult r4 = run_cli(a4);
    CHECK(r1.code == 0);
    CHECK(r4.code == 0);
    CHECK(r1.out == r4.out);
    CHECK(!r1.out.empty());
}

TEST_CASE("scan: json document structure") {
    RunResult r = run_cli({"scan", "--alpha", "1/3", "--nmax", "100",
                           "--threshold", "0.4", "--format", "json"});
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["criterion"] == "xi_tilde_threshold");
    CHECK(j["n_max"] == 100);
    CHECK(j["converged"] == false);  // two hits: no tail to cluster
    REQUIRE(j["hits"].size() == 2);
    CHECK(j["hits"][0]["n"] == 1);
    CHECK(j["hits"][0]["omega_plus"].get<double>() ==
          doctest::Approx(-5.750271838405614).epsilon(1e-15));
    CHECK(j["hits"][0]["in_I_plus"] == true);
    CHECK(j["clusters"].empty());
    CHECK(j["outliers"].empty());
}

TEST_CASE("scan: extended decimal output under --digits") {
    RunResult r = run_cli({"scan", "--alpha", "inv_sqrt5", "--nmax", "10000",
                           "--digits", "20", "--format", "json"});
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["hits"].size() == 4);
    std::string d0 = j["hits"][0]["xi_tilde_decimal"].get<std::string>();
    std::string d3 = j["hits"][3]["xi_tilde_decimal"].get<std::string>();
    CHECK(d0.rfind("-0.05278640450004206071", 0) == 0);
    CHECK(d3.rfind("-0.05590169934418131952", 0) == 0);
}

TEST_CASE("profile: vertex sample equals the soliton peak") {
    RunResult r = run_cli({"profile", "--alpha", "1/3", "--n", "1",
                           "--grid", "4"});
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() >= 2);
    CHECK(ls[0] == "edge,x,u,du");
    CHECK(ls[1] == "1,0,3.3912451513877939,40.586646636769672");
}

TEST_CASE("construct-alpha: dyadic target reached exactly") {
    RunResult r = run_cli({"construct-alpha", "--ell", "5.25", "--depth", "12",
                           "--omega0"});
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 15);  // header + 12 stages + 2 comments
    CHECK(ls[0] == "stage,position,xi_tilde,abs_error");
    CHECK(ls[12] == "12,885734,5.25,0");
    CHECK(ls[13] == "# alpha=constructed(ell=5.25, depth=12)");
    CHECK(ls[14] == "# omega0=-5211.3168485620063");
}

TEST_CASE("linear: integer eigenvalues on the circle-like case") {
    RunResult r = run_cli({"linear", "--alpha", "1/2", "--L",
                           "6.283185307179586", "--nmax", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "n,lambda\n1,1\n2,4\n3,9\n# q0=1\n");

    RunResult ri = run_cli({"linear", "--alpha", "inv_sqrt5"});
    CHECK(ri.code == 0);
    CHECK(ri.out.find("# no eigenvalues") == 0);
}

TEST_CASE("linear: bifurcation scaling report") {
    RunResult r = run_cli({"linear", "--alpha", "1/3", "--bifurcate", "--n",
                           "1", "--eps", "1e-8"});
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 8);
    CHECK(ls[0] == "lambda_n=355.3057584392169");
    CHECK(ls[4] == "k_ratio=1.000006795852399");
    CHECK(ls[7] == "amplitude_ratio=1.00000679585709");
}

TEST_CASE("exit codes separate the failure classes") {
    RunResult bad_alpha =
        run_cli({"spectrum", "--alpha", "bogus", "--nmax", "2"});
    CHECK(bad_alpha.code == 1);
    CHECK(bad_alpha.err == "error: cannot parse alpha specification 'bogus'\n");

    CHECK(run_cli({}).code == 1);                    // missing subcommand
    CHECK(run_cli({"spectrum", "--alpha", "1/2"}).code == 1);  // missing nmax

    RunResult degenerate = run_cli({"profile", "--alpha", "1/3", "--n", "3"});
    CHECK(degenerate.code == 1);
    CHECK(degenerate.err.find("degenerate index") != std::string::npos);

    RunResult exhausted = run_cli({"scan", "--alpha", "inv_sqrt5", "--nmax",
                                   "200000", "--precision-bits", "16"});
    CHECK(exhausted.code == 2);
    CHECK(exhausted.err.rfind("precision exhausted:", 0) == 0);

    RunResult io = run_cli({"scan", "--alpha", "inv_sqrt5", "--nmax", "1000",
                            "--out", "/nonexistent/dir/x.csv"});
    CHECK(io.code == 3);
    CHECK(io.err.rfind("io error:", 0) == 0);

    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("config file supplies defaults, flags override") {
    const char* path = "/tmp/dbridge_cli_test_cfg.ini";
    {
        std::ofstream f(path);
        f << "spectrum.nmax=3\nspectrum.alpha=1/3\n";
    }
    RunResult from_cfg = run_cli({"--config", path, "spectrum"});
    REQUIRE(from_cfg.code == 0);
    auto ls = lines_of(from_cfg.out);
    CHECK(ls.back() == "# count=6 isolated=4 branch=2");

    RunResult overridden = run_cli({"--config", path, "spectrum", "--nmax", "1"});
    REQUIRE(overridden.code == 0);
    ls = lines_of(overridden.out);
    CHECK(ls.back() == "# count=2 isolated=2 branch=0");
    std::remove(path);
}

TEST_CASE("--out writes the same bytes to a file") {
    const char* path = "/tmp/dbridge_cli_test_out.csv";
    RunResult direct = run_cli({"spectrum", "--alpha", "1/2", "--nmax", "2"});
    RunResult filed = run_cli({"spectrum", "--alpha", "1/2", "--nmax", "2",
                               "--out", path});
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == direct.out);
    std::remove(path);
}
