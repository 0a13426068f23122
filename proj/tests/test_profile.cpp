#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbridge/profile.hpp"
#include "dbridge/spectrum.hpp"
#include "json.hpp"

using namespace dbridge;
using namespace dbridge::profile;
using spectrum::GraphGeometry;
using spectrum::StandingWave;

namespace {

alpha::AlphaRatio catalog_entry(const char* name) {
    for (const alpha::CatalogEntry& e : alpha::builtin_catalog())
        if (e.name == name) return e.alpha;
    throw std::runtime_error("missing catalog entry");
}

GraphProfile isolated_profile(const alpha::AlphaRatio& a, long long n, bool plus,
                              double L = 1.0) {
    GraphGeometry g = GraphGeometry::from_alpha(a, L);
    StandingWave w = plus ? *spectrum::omega_plus(g, a, n)
                          : *spectrum::omega_minus(g, a, n);
    return build_profile(g, w);
}

// sign changes around the closed ring formed by the two bounded edges
int ring_sign_changes(const GraphProfile& p, int per_edge) {
    std::vector<double> v;
    for (int edge : {1, 2}) {
        double len = p.edge_length(edge);
        for (int i = 0; i < per_edge; ++i)
            v.push_back(p.u(edge, len * double(i) / double(per_edge)));
    }
    int changes = 0;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] * v[(i + 1) % v.size()] < 0.0) ++changes;
    return changes;
}

} // namespace

TEST_CASE("profile construction and parameter relations") {
    GraphProfile p = isolated_profile(alpha::AlphaRatio::rational(1, 3), 1, true);
    const StandingWave& w = p.wave();
    double k = w.k_n.k;
    double t2 = w.k_n.two_k2_minus_1();
    // omega = -beta^2 (2k^2 - 1) and A = sqrt(2) k beta tie the cn profile
    // to the equation's coefficients.
    CHECK(std::fabs(-p.beta() * p.beta() * t2 - w.omega) <
          1e-12 * std::fabs(w.omega));
    CHECK(std::fabs(p.amplitude() - std::sqrt(2.0) * k * p.beta()) <
          1e-12 * p.amplitude());
    CHECK(p.amplitude() > std::sqrt(2.0 * -w.omega));

    // rejects non-negative frequencies
    StandingWave bad = w;
    bad.omega = 1.0;
    GraphGeometry g = p.geometry();
    CHECK_THROWS_AS((void)GraphProfile(g, bad), std::domain_error);

    CHECK_THROWS_AS((void)p.u(5, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)p.du(0, 0.0), std::domain_error);
}

TEST_CASE("vertex values match the soliton peak") {
    for (bool plus : {true, false}) {
        GraphProfile p =
            isolated_profile(alpha::AlphaRatio::rational(1, 3), 1, plus);
        double peak = std::sqrt(2.0 * -p.wave().omega);
        CHECK(p.u(3, 0.0) == peak);
        CHECK(p.du(3, 0.0) == 0.0);
        CHECK(std::fabs(p.u(1, 0.0) - peak) < 1e-10 * peak);
        // edge 4 carries the family sign
        double sgn = plus ? 1.0 : -1.0;
        for (double x : {0.0, 0.3, 1.7})
            CHECK(p.u(4, x) == sgn * p.u(3, x));
        CHECK(p.u(3, 1.0) < p.u(3, 0.5));
    }
}

TEST_CASE("analytic derivative agrees with central differences") {
    GraphProfile p = isolated_profile(catalog_entry("inv_sqrt5"), 2, true);
    double scale = p.amplitude() * p.beta();
    double h = 1e-6;
    for (int edge : {1, 3}) {
        double len = p.edge_length(edge);
        for (double frac : {0.15, 0.4, 0.85}) {
            double x = frac * len;
            double fd = (p.u(edge, x + h) - p.u(edge, x - h)) / (2.0 * h);
            CHECK(std::fabs(fd - p.du(edge, x)) < 1e-5 * scale);
        }
    }
}

TEST_CASE("Kirchhoff and equation residuals for isolated states") {
    struct Case {
        const char* name;
        long long n;
        bool plus;
    };
    for (const Case& c : {Case{"inv_sqrt5", 1, true}, Case{"inv_sqrt5", 3, false},
                          Case{"inv_one_plus_sqrt5", 1, true},
                          Case{"inv_one_plus_sqrt5", 2, false}}) {
        GraphProfile p = isolated_profile(catalog_entry(c.name), c.n, c.plus);
        double omega = p.wave().omega;
        double peak = std::sqrt(2.0 * -omega);
        KirchhoffResidual kr = kirchhoff_residual(p);
        CHECK(kr.continuity <= 1e-8 * peak);
        CHECK(kr.derivative <= 1e-8 * peak);
        double gate = 1e-4 * std::pow(-omega, 1.5) * std::sqrt(2.0);
        CHECK(ode_residual(p) <= gate);
    }
    GraphProfile p = isolated_profile(alpha::AlphaRatio::rational(1, 3), 1, true);
    CHECK_THROWS_AS((void)ode_residual(p, 0), std::domain_error);
    CHECK_THROWS_AS((void)ode_residual(p, 5000), std::domain_error);
}

TEST_CASE("branch states satisfy the vertex coupling too") {
    alpha::AlphaRatio half = alpha::AlphaRatio::rational(1, 2);
    GraphGeometry g = GraphGeometry::from_alpha(half, 1.0);
    for (long long n : {2LL, 1LL}) {  // n=2 continues P_plus, n=1 P_minus
        for (int sign : {1, -1}) {
            StandingWave w = spectrum::branch_solution(g, half, n, -1.0, sign);
            GraphProfile p = build_profile(g, w);
            double peak = std::sqrt(2.0);
            KirchhoffResidual kr = kirchhoff_residual(p);
            CHECK(kr.continuity <= 1e-8 * peak);
            CHECK(kr.derivative <= 1e-8 * peak);
        }
    }
}

TEST_CASE("ring winds the index: 2n lobes") {
    const alpha::AlphaRatio& a = catalog_entry("inv_one_plus_sqrt5");
    for (long long n = 1; n <= 5; ++n) {
        GraphProfile p = isolated_profile(a, n, true);
        CHECK(ring_sign_changes(p, 400 * int(n)) == 2 * int(n));
    }
}

TEST_CASE("CSV export") {
    GraphProfile p = isolated_profile(alpha::AlphaRatio::rational(1, 3), 1, true);
    const int grid = 9;
    std::string csv = export_profile(p, grid, ExportFormat::Csv);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "edge,x,u,du");
    int rows = 0;
    std::string first, last_edge1;
    while (std::getline(in, line)) {
        if (rows == 0) first = line;
        if (rows == grid - 1) last_edge1 = line;
        ++rows;
    }
    CHECK(rows == 4 * grid);
    CHECK(first.substr(0, 4) == "1,0,");

    // %.17g columns round-trip exactly
    double x, u, du;
    int edge;
    REQUIRE(std::sscanf(first.c_str(), "%d,%lf,%lf,%lf", &edge, &x, &u, &du) == 4);
    CHECK(u == p.u(1, 0.0));
    CHECK(du == p.du(1, 0.0));
    REQUIRE(std::sscanf(last_edge1.c_str(), "%d,%lf,%lf,%lf", &edge, &x, &u,
                        &du) == 4);
    CHECK(edge == 1);
    CHECK(x == p.geometry().L1);  // endpoint sampled exactly

    // residual request prepends comment lines
    std::string with = export_profile(p, 3, ExportFormat::Csv, true);
    CHECK(with.rfind("# kirchhoff_continuity=", 0) == 0);
    CHECK(with.find("# ode_residual=") != std::string::npos);

    CHECK_THROWS_AS((void)export_profile(p, 1, ExportFormat::Csv),
                    std::domain_error);
}

TEST_CASE("JSON export") {
    GraphGeometry g = GraphGeometry::from_alpha(alpha::AlphaRatio::rational(1, 2), 1.0);
    StandingWave w = spectrum::branch_solution(g, alpha::AlphaRatio::rational(1, 2),
                                               1, -2.0, -1);
    GraphProfile p = build_profile(g, w);
    nlohmann::json j =
        nlohmann::json::parse(export_profile(p, 5, ExportFormat::Json));
    CHECK(j["family"] == "minus");
    CHECK(j["n"] == 1);
    CHECK(j["omega"] == -2.0);
    CHECK(j["branch"] == true);
    CHECK(j["L1"].get<double>() == 0.5);
    CHECK(j["samples"].size() == 20);
    CHECK(!j.contains("ode_residual"));
    CHECK(j["samples"][0]["edge"] == 1);
    CHECK(j["samples"][0]["u"].get<double>() == p.u(1, 0.0));

    nlohmann::json jr =
        nlohmann::json::parse(export_profile(p, 2, ExportFormat::Json, true));
    CHECK(jr.contains("kirchhoff_continuity"));
    CHECK(jr.contains("kirchhoff_derivative"));
    CHECK(jr["ode_residual"].get<double>() >= 0.0);
}
