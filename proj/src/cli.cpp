#include "dbridge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dbridge/alpha.hpp"
#include "dbridge/profile.hpp"
#include "dbridge/scan.hpp"
#include "dbridge/spectrum.hpp"

namespace dbridge::cli {

namespace {

// K(1/sqrt(2)); the implied limit frequency of the constructor is
// omega0 = -((4/L) K0^2 ell)^2.
constexpr double kK0 = 1.8540746773013719;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Options shared by every subcommand.
struct Common {
    std::string alpha_spec;
    std::string catalog_path;
    double L = 1.0;
    std::string out_path;
    std::string format = "csv";
    int precision_bits = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_format = true) {
    cmd->add_option("--alpha", c.alpha_spec,
                    "edge-length ratio: catalog name, p/q, or quad:a,b,c,m")
        ->required();
    cmd->add_option("--catalog", c.catalog_path,
                    "extra catalog file (one entry per line)");
    cmd->add_option("--L", c.L, "total ring length")->capture_default_str();
    cmd->add_option("--out", c.out_path, "output file (default: stdout)");
    if (needs_format)
        cmd->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    cmd->add_option("--precision-bits", c.precision_bits,
                    "certification precision override (0 = automatic)")
        ->envname("DB_PRECISION_BITS");
}

alpha::AlphaRatio resolve_alpha(const Common& c) {
    if (!(c.L > 0.0) || !std::isfinite(c.L))
        throw std::domain_error("L must be positive and finite");
    if (c.catalog_path.empty()) return alpha::parse_alpha(c.alpha_spec);
    return alpha::parse_alpha(c.alpha_spec,
                              alpha::load_catalog_file(c.catalog_path));
}

void prepare_override(const alpha::AlphaRatio& a, const Common& c,
                      long long n_max) {
    if (c.precision_bits <= 0) return;
    alpha::Precision prec;
    prec.n_max = n_max;
    prec.bits = c.precision_bits;
    a.prepare(prec);
}

void write_output(const std::string& text, const Common& c, std::ostream& out) {
    if (c.out_path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw IoError("cannot open " + c.out_path + " for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to " + c.out_path + " failed");
}

const char* family_name(spectrum::Family f) {
    return f == spectrum::Family::Pplus ? "plus" : "minus";
}

std::string cmd_spectrum(const Common& c, long long n_max) {
    alpha::AlphaRatio a = resolve_alpha(c);
    prepare_override(a, c, n_max);
    spectrum::GraphGeometry g = spectrum::GraphGeometry::from_alpha(a, c.L);
    spectrum::Enumeration e = spectrum::enumerate_solutions(g, a, n_max);

    if (c.format == "json") {
        nlohmann::json doc;
        doc["alpha"] = a.describe();
        doc["L"] = c.L;
        doc["n_max"] = n_max;
        doc["count"] = e.isolated.size() + e.branches.size();
        nlohmann::json iso = nlohmann::json::array();
        for (const spectrum::StandingWave& w : e.isolated)
            iso.push_back({{"family", family_name(w.family)},
                           {"n", w.n},
                           {"omega", w.omega},
                           {"k", w.k_n.k},
                           {"kprime", w.k_n.kprime},
                           {"shift", w.shift}});
        doc["isolated"] = std::move(iso);
        nlohmann::json br = nlohmann::json::array();
        for (const spectrum::BranchMarker& m : e.branches)
            br.push_back({{"family", family_name(m.family)},
                          {"n", m.n},
                          {"sign", m.sign}});
        doc["branches"] = std::move(br);
        return doc.dump(2) + "\n";
    }

    std::string text = "family,n,omega,k,shift,branch\n";
    for (const spectrum::StandingWave& w : e.isolated) {
        text += family_name(w.family);
        text += "," + std::to_string(w.n) + "," + fmt(w.omega) + "," +
                fmt(w.k_n.k) + "," + fmt(w.shift) + ",0\n";
    }
    // Branch families exist at every omega < 0; the marker row records the
    // index and the shift sign, the frequency columns stay empty.
    for (const spectrum::BranchMarker& m : e.branches) {
        text += family_name(m.family);
        text += "," + std::to_string(m.n) + ",,," + std::to_string(m.sign) +
                ",1\n";
    }
    text += "# count=" + std::to_string(e.isolated.size() + e.branches.size()) +
            " isolated=" + std::to_string(e.isolated.size()) +
            " branch=" + std::to_string(e.branches.size()) + "\n";
    return text;
}

struct ScanOpts {
    long long n_max = 0;
    double threshold = 0.25;
    bool hurwitz = false;
    int threads = 0;
    int digits = 17;
    double radius = 1e-6;
};

std::string cmd_scan(const Common& c, const ScanOpts& s) {
    alpha::AlphaRatio a = resolve_alpha(c);
    scan::HitCriterion crit = s.hurwitz ? scan::HitCriterion::HurwitzMinus
                                        : scan::HitCriterion::XiTildeThreshold;
    int threads = s.threads > 0
                      ? s.threads
                      : std::max(1u, std::thread::hardware_concurrency());
    std::vector<scan::DiophantineHit> hits =
        scan::scan_hits(a, s.n_max, s.threshold, crit, threads, c.precision_bits);

    // The frequency report only uses the total length; the scan itself is
    // meaningful for any ratio in (0, 1), so do not route through
    // GraphGeometry::from_alpha here.
    double v = std::min(a.value(), 1.0 - a.value());
    spectrum::GraphGeometry g{v * c.L, (1.0 - v) * c.L, c.L};
    std::vector<scan::OmegaRow> rows = scan::omega_limit_report(g, a, hits);

    std::optional<scan::ClusterReport> rep;
    if (!hits.empty()) rep = scan::cluster_hits(hits, s.radius);

    std::vector<std::string> xi_text(hits.size());
    for (size_t i = 0; i < hits.size(); ++i)
        xi_text[i] = s.digits > 17 ? a.xi_tilde_decimal(hits[i].n, s.digits)
                                   : fmt(hits[i].xi_tilde);

    if (c.format == "json") {
        nlohmann::json doc;
        doc["alpha"] = a.describe();
        doc["L"] = c.L;
        doc["n_max"] = s.n_max;
        doc["criterion"] = s.hurwitz ? "hurwitz_minus" : "xi_tilde_threshold";
        if (!s.hurwitz) doc["threshold"] = s.threshold;
        nlohmann::json jh = nlohmann::json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            nlohmann::json h = {{"n", rows[i].n},
                                {"xi_tilde", rows[i].xi_tilde},
                                {"omega_plus", rows[i].omega_plus},
                                {"omega_minus", rows[i].omega_minus},
                                {"prediction", rows[i].prediction},
                                {"in_I_plus", rows[i].in_I_plus},
                                {"in_I_minus", rows[i].in_I_minus}};
            if (s.digits > 17) h["xi_tilde_decimal"] = xi_text[i];
            jh.push_back(std::move(h));
        }
        doc["hits"] = std::move(jh);
        if (rep) {
            nlohmann::json jc = nlohmann::json::array();
            for (const scan::Cluster& cl : rep->clusters)
                jc.push_back({{"center", cl.center},
                              {"spread", cl.spread},
                              {"converged", cl.converged},
                              {"members", cl.members}});
            doc["clusters"] = std::move(jc);
            doc["outliers"] = rep->outliers;
            doc["converged"] = rep->converged;
        }
        return doc.dump(2) + "\n";
    }

    std::string text = "n,xi_tilde,omega_plus,omega_minus,in_I_plus,in_I_minus\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const scan::OmegaRow& r = rows[i];
        text += std::to_string(r.n) + "," + xi_text[i] + "," +
                fmt(r.omega_plus) + "," + fmt(r.omega_minus) + "," +
                (r.in_I_plus ? "1" : "0") + "," + (r.in_I_minus ? "1" : "0") +
                "\n";
    }
    if (rep) {
        text += "# clusters=" + std::to_string(rep->clusters.size()) +
                " outliers=" + std::to_string(rep->outliers.size()) +
                " converged=" + std::string(rep->converged ? "1" : "0") + "\n";
        for (const scan::Cluster& cl : rep->clusters) {
            text += "# cluster center=" + fmt(cl.center) +
                    " spread=" + fmt(cl.spread) +
                    " converged=" + (cl.converged ? std::string("1") : "0") +
                    " members=";
            for (size_t i = 0; i < cl.members.size(); ++i) {
                if (i) text += ",";
                text += std::to_string(cl.members[i]);
            }
            text += "\n";
        }
        for (long long n : rep->outliers)
            text += "# outlier n=" + std::to_string(n) + "\n";
    } else {
        text += "# no hits\n";
    }
    return text;
}

struct ProfileOpts {
    long long n = 0;
    std::string family = "plus";
    int grid = 512;
    bool branch = false;
    double omega = 0.0;
    bool omega_set = false;
    int sign = +1;
    bool validate = false;
};

std::string cmd_profile(const Common& c, const ProfileOpts& p) {
    alpha::AlphaRatio a = resolve_alpha(c);
    prepare_override(a, c, p.n);
    spectrum::GraphGeometry g = spectrum::GraphGeometry::from_alpha(a, c.L);

    spectrum::StandingWave w;
    if (p.branch) {
        if (!p.omega_set)
            throw std::domain_error("--branch requires --omega (negative)");
        w = spectrum::branch_solution(g, a, p.n, p.omega, p.sign);
    } else {
        if (p.omega_set)
            throw std::domain_error("--omega only applies to --branch profiles");
        std::optional<spectrum::StandingWave> ow =
            p.family == "plus" ? spectrum::omega_plus(g, a, p.n)
                               : spectrum::omega_minus(g, a, p.n);
        if (!ow)
            throw std::domain_error(
                "n=" + std::to_string(p.n) +
                " is a degenerate index for this ratio: no isolated state "
                "(use --branch with --omega)");
        w = *ow;
    }

    profile::GraphProfile prof(g, w);
    profile::ExportFormat f = c.format == "json" ? profile::ExportFormat::Json
                                                 : profile::ExportFormat::Csv;
    return profile::export_profile(prof, p.grid, f, p.validate);
}

std::string cmd_construct(const Common& c, double ell, int depth, bool omega0) {
    alpha::ConstructionReport rep = alpha::construct_alpha(ell, depth);
    std::string text = "stage,position,xi_tilde,abs_error\n";
    for (size_t j = 0; j < rep.positions.size(); ++j) {
        text += std::to_string(j + 1) + "," +
                std::to_string(rep.positions[j]) + "," + fmt(rep.xi_values[j]) +
                "," + fmt(rep.xi_errors[j]) + "\n";
    }
    text += "# alpha=" + rep.alpha.describe() + "\n";
    if (omega0) {
        double s = 4.0 / c.L * kK0 * kK0 * ell;
        text += "# omega0=" + fmt(s == 0.0 ? 0.0 : -s * s) + "\n";
    }
    return text;
}

struct LinearOpts {
    long long n_max = 10;
    bool bifurcate = false;
    long long n = 1;
    double eps = 1e-8;
};

std::string cmd_linear(const Common& c, const LinearOpts& l) {
    alpha::AlphaRatio a = resolve_alpha(c);
    spectrum::GraphGeometry g = spectrum::GraphGeometry::from_alpha(a, c.L);

    if (l.bifurcate) {
        spectrum::BifurcationCheck b = spectrum::bifurcation_check(g, a, l.n, l.eps);
        std::string text;
        text += "lambda_n=" + fmt(b.lambda_n) + "\n";
        text += "omega_eps=" + fmt(b.omega_eps) + "\n";
        text += "k=" + fmt(b.k_eps) + "\n";
        text += "k_predicted=" + fmt(b.k_predicted) + "\n";
        text += "k_ratio=" + fmt(b.k_eps / b.k_predicted) + "\n";
        text += "amplitude=" + fmt(b.amplitude) + "\n";
        text += "amplitude_predicted=" + fmt(b.amplitude_predicted) + "\n";
        text += "amplitude_ratio=" + fmt(b.amplitude / b.amplitude_predicted) +
                "\n";
        return text;
    }

    std::vector<spectrum::LinearEigenvalue> evs =
        spectrum::linear_eigenvalues(g, a, l.n_max);
    if (evs.empty())
        return "# no eigenvalues: the linearization has empty point spectrum "
               "for an irrational edge ratio\n";
    std::string text = "n,lambda\n";
    for (const spectrum::LinearEigenvalue& ev : evs)
        text += std::to_string(ev.n) + "," + fmt(ev.lambda) + "\n";
    text += "# q0=" + std::to_string(evs.front().q0) + "\n";
    return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"standing waves on the double-bridge graph"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file merged underneath the flags");

    Common c_spec, c_scan, c_prof, c_cons, c_lin;
    long long spec_nmax = 0;
    ScanOpts sopt;
    ProfileOpts popt;
    double cons_ell = 0.0;
    int cons_depth = 12;
    bool cons_omega0 = false;
    LinearOpts lopt;
    std::string result;

    CLI::App* spec = app.add_subcommand(
        "spectrum", "enumerate standing waves up to a lobe count");
    add_common(spec, c_spec);
    spec->add_option("--nmax", spec_nmax, "largest lobe count")
        ->required()
        ->check(CLI::PositiveNumber);
    spec->callback([&] { result = cmd_spectrum(c_spec, spec_nmax); });

    CLI::App* scan_cmd = app.add_subcommand(
        "scan", "scan lobe counts for near-resonant indices");
    add_common(scan_cmd, c_scan);
    scan_cmd->add_option("--nmax", sopt.n_max, "scan range")
        ->required()
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--threshold", sopt.threshold,
                         "|xi_tilde| hit threshold")
        ->capture_default_str();
    scan_cmd->add_flag("--hurwitz", sopt.hurwitz,
                       "hit on n*xi_n < 2/sqrt(5) instead");
    scan_cmd->add_option("--threads", sopt.threads,
                         "worker threads (0 = all cores)")
        ->capture_default_str();
    scan_cmd->add_option("--digits", sopt.digits,
                         "significant digits for xi_tilde (>17 uses the "
                         "extended-precision path)")
        ->check(CLI::Range(1, 40))
        ->capture_default_str();
    scan_cmd->add_option("--radius", sopt.radius, "cluster grouping radius")
        ->capture_default_str();
    scan_cmd->callback([&] { result = cmd_scan(c_scan, sopt); });

    CLI::App* prof = app.add_subcommand(
        "profile", "sample one standing wave on all four edges");
    add_common(prof, c_prof);
    prof->add_option("--n", popt.n, "lobe count")
        ->required()
        ->check(CLI::PositiveNumber);
    prof->add_option("--family", popt.family, "tail symmetry family")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    prof->add_option("--grid", popt.grid, "samples per edge")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    prof->add_flag("--branch", popt.branch,
                   "profile a branch-family member instead of an isolated state");
    prof->add_option("--omega", popt.omega, "branch frequency (negative)")
        ->each([&](const std::string&) { popt.omega_set = true; });
    prof->add_option("--sign", popt.sign, "branch shift sign")
        ->check(CLI::IsMember({-1, 1}))
        ->capture_default_str();
    prof->add_flag("--validate", popt.validate,
                   "append Kirchhoff and equation residuals");
    prof->callback([&] { result = cmd_profile(c_prof, popt); });

    CLI::App* cons = app.add_subcommand(
        "construct-alpha",
        "build a ratio whose scaled distances converge to a chosen limit");
    add_common(cons, c_cons, /*needs_format=*/false);
    // The ratio is built, not parsed: --alpha is not meaningful here.
    cons->get_option("--alpha")->required(false);
    cons->add_option("--ell", cons_ell, "target limit of n(frac(n a) - 1/2)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    cons->add_option("--depth", cons_depth, "construction stages")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    cons->add_flag("--omega0", cons_omega0,
                   "also report the implied limit frequency");
    cons->callback(
        [&] { result = cmd_construct(c_cons, cons_ell, cons_depth, cons_omega0); });

    CLI::App* lin = app.add_subcommand(
        "linear", "eigenvalues of the linearization and bifurcation checks");
    add_common(lin, c_lin, /*needs_format=*/false);
    lin->add_option("--nmax", lopt.n_max, "number of eigenvalues")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    lin->add_flag("--bifurcate", lopt.bifurcate,
                  "check the cnoidal amplitude law below one eigenvalue");
    lin->add_option("--n", lopt.n, "eigenvalue index for --bifurcate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    lin->add_option("--eps", lopt.eps, "distance below the eigenvalue")
        ->capture_default_str();
    lin->callback([&] { result = cmd_linear(c_lin, lopt); });

    try {
        // CLI11's vector overload wants the arguments in reverse order.
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
        CLI::App* ran = app.get_subcommands().front();
        const Common& c = ran == spec     ? c_spec
                          : ran == scan_cmd ? c_scan
                          : ran == prof     ? c_prof
                          : ran == cons     ? c_cons
                                            : c_lin;
        write_output(result, c, out);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const alpha::PrecisionExhausted& e) {
        err << "precision exhausted: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dbridge::cli
