#include "dbridge/profile.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dbridge/elliptic.hpp"
#include "json.hpp"

namespace dbridge::profile {

namespace {

constexpr double kTailScale = 20.0;  // half lines sampled out to 20/sqrt|omega|

std::string fmt_row(int edge, double x, double u, double du) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", edge, x, u, du);
    return buf;
}

} // namespace

GraphProfile::GraphProfile(const spectrum::GraphGeometry& g,
                           const spectrum::StandingWave& w)
    : geom_(g), wave_(w) {
    if (!(w.omega < 0.0))
        throw std::domain_error("GraphProfile: omega must be negative");
    double t2 = w.k_n.two_k2_minus_1();
    A_ = std::sqrt(2.0 * -w.omega) * w.k_n.k / std::sqrt(t2);
    beta_ = std::sqrt(-w.omega / t2);
    sigma4_ = w.family == spectrum::Family::Pplus ? 1.0 : -1.0;
}

double GraphProfile::ring(double x) const {
    return A_ * elliptic::jacobi_cn_sn_dn(beta_ * (x + wave_.shift), wave_.k_n.k).cn;
}

double GraphProfile::dring(double x) const {
    elliptic::JacobiTriple j =
        elliptic::jacobi_cn_sn_dn(beta_ * (x + wave_.shift), wave_.k_n.k);
    return -A_ * beta_ * j.sn * j.dn;
}

double GraphProfile::u(int edge, double x) const {
    double rt = std::sqrt(-wave_.omega);
    switch (edge) {
        case 1: return ring(x);
        case 2: return ring(geom_.L1 + x);
        case 3: return std::sqrt(2.0 * -wave_.omega) / std::cosh(rt * x);
        case 4: return sigma4_ * std::sqrt(2.0 * -wave_.omega) / std::cosh(rt * x);
        default: throw std::domain_error("GraphProfile::u: edge must be 1..4");
    }
}

double GraphProfile::du(int edge, double x) const {
    double rt = std::sqrt(-wave_.omega);
    switch (edge) {
        case 1: return dring(x);
        case 2: return dring(geom_.L1 + x);
        case 3:
        case 4: {
            double sech = 1.0 / std::cosh(rt * x);
            double d = -std::sqrt(2.0 * -wave_.omega) * rt * sech * std::tanh(rt * x);
            return edge == 3 ? d : sigma4_ * d;
        }
        default: throw std::domain_error("GraphProfile::du: edge must be 1..4");
    }
}

double GraphProfile::edge_length(int edge) const {
    switch (edge) {
        case 1: return geom_.L1;
        case 2: return geom_.L2;
        case 3:
        case 4: return kTailScale / std::sqrt(-wave_.omega);
        default: throw std::domain_error("GraphProfile::edge_length: edge must be 1..4");
    }
}

GraphProfile build_profile(const spectrum::GraphGeometry& g,
                           const spectrum::StandingWave& w) {
    return GraphProfile(g, w);
}

KirchhoffResidual kirchhoff_residual(const GraphProfile& p) {
    double L1 = p.geometry().L1;
    double L2 = p.geometry().L2;
    // vertex 1 joins edge 1 at 0, edge 2 at L2, edge 3 at 0;
    // vertex 2 joins edge 1 at L1, edge 2 at 0, edge 4 at 0
    double v1 = p.u(3, 0.0);
    double v2 = p.u(4, 0.0);
    double c = std::fabs(p.u(1, 0.0) - v1);
    c = std::max(c, std::fabs(p.u(2, L2) - v1));
    c = std::max(c, std::fabs(p.u(1, L1) - v2));
    c = std::max(c, std::fabs(p.u(2, 0.0) - v2));
    // signed sums of outgoing derivatives
    double d1 = p.du(1, 0.0) - p.du(2, L2) + p.du(3, 0.0);
    double d2 = -p.du(1, L1) + p.du(2, 0.0) + p.du(4, 0.0);
    return {c, std::max(std::fabs(d1), std::fabs(d2))};
}

double ode_residual(const GraphProfile& p, int samples) {
    if (samples < 1 || samples > 4096)
        throw std::domain_error("ode_residual: samples must lie in [1, 4096]");
    double omega = p.wave().omega;
    double worst = 0.0;
    for (int edge = 1; edge <= 4; ++edge) {
        double len = p.edge_length(edge);
        double h = 1e-4 * len;
        for (int i = 1; i <= samples; ++i) {
            double x = len * static_cast<double>(i) / static_cast<double>(samples + 1);
            double um = p.u(edge, x - h);
            double u0 = p.u(edge, x);
            double up = p.u(edge, x + h);
            double upp = (um - 2.0 * u0 + up) / (h * h);
            worst = std::max(worst, std::fabs(upp + u0 * u0 * u0 + omega * u0));
        }
    }
    return worst;
}

std::string export_profile(const GraphProfile& p, int grid_points,
                           ExportFormat format, bool include_residuals) {
    if (grid_points < 2)
        throw std::domain_error("export_profile: need at least 2 grid points");
    const spectrum::StandingWave& w = p.wave();
    KirchhoffResidual kr{0.0, 0.0};
    double ode = 0.0;
    if (include_residuals) {
        kr = kirchhoff_residual(p);
        ode = ode_residual(p);
    }
    if (format == ExportFormat::Csv) {
        std::string out;
        if (include_residuals) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "# kirchhoff_continuity=%.17g\n# kirchhoff_derivative=%.17g\n"
                          "# ode_residual=%.17g\n",
                          kr.continuity, kr.derivative, ode);
            out += buf;
        }
        out += "edge,x,u,du\n";
        for (int edge = 1; edge <= 4; ++edge) {
            double len = p.edge_length(edge);
            for (int i = 0; i < grid_points; ++i) {
                double x = len * static_cast<double>(i) / static_cast<double>(grid_points - 1);
                out += fmt_row(edge, x, p.u(edge, x), p.du(edge, x));
            }
        }
        return out;
    }
    nlohmann::json j;
    j["L"] = p.geometry().L;
    j["L1"] = p.geometry().L1;
    j["L2"] = p.geometry().L2;
    j["family"] = w.family == spectrum::Family::Pplus ? "plus" : "minus";
    j["n"] = w.n;
    j["omega"] = w.omega;
    j["k"] = w.k_n.k;
    j["kprime"] = w.k_n.kprime;
    j["shift"] = w.shift;
    j["branch"] = w.branch == spectrum::BranchKind::ContinuousBranch;
    j["amplitude"] = p.amplitude();
    j["beta"] = p.beta();
    if (include_residuals) {
        j["kirchhoff_continuity"] = kr.continuity;
        j["kirchhoff_derivative"] = kr.derivative;
        j["ode_residual"] = ode;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (int edge = 1; edge <= 4; ++edge) {
        double len = p.edge_length(edge);
        for (int i = 0; i < grid_points; ++i) {
            double x = len * static_cast<double>(i) / static_cast<double>(grid_points - 1);
            rows.push_back({{"edge", edge}, {"x", x}, {"u", p.u(edge, x)},
                            {"du", p.du(edge, x)}});
        }
    }
    j["samples"] = std::move(rows);
    return j.dump(2) + "\n";
}

} // namespace dbridge::profile
