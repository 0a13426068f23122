#pragma once

#include <string>
#include <vector>

#include "dbridge/spectrum.hpp"

namespace dbridge::profile {

// Evaluable standing-wave profile on the four edges of the graph.
// Parametrization:
//   edge 1 (bounded, length L1): x in [0, L1],  u1(x) = ring(x)
//   edge 2 (bounded, length L2): x in [0, L2],  u2(x) = ring(L1 + x)
//   edge 3 (half line at vertex v1): u3(x) = sqrt(2|omega|) sech(sqrt|omega| x)
//   edge 4 (half line at vertex v2): u4(x) = sigma4 * sqrt(2|omega|) sech(sqrt|omega| x)
// with ring(x) = A cn(beta (x + a); k), sigma4 = +1 for P_plus, -1 for
// P_minus. Half lines are truncated at 20/sqrt|omega| for sampling.
class GraphProfile {
  public:
    GraphProfile(const spectrum::GraphGeometry& g, const spectrum::StandingWave& w);

    double u(int edge, double x) const;   // edge in {1,2,3,4}
    double du(int edge, double x) const;  // analytic derivative

    double edge_length(int edge) const;   // truncation length for 3, 4
    const spectrum::GraphGeometry& geometry() const { return geom_; }
    const spectrum::StandingWave& wave() const { return wave_; }
    double amplitude() const { return A_; }
    double beta() const { return beta_; }

  private:
    spectrum::GraphGeometry geom_;
    spectrum::StandingWave wave_;
    double A_;
    double beta_;
    double sigma4_;
    double ring(double x) const;
    double dring(double x) const;
};

GraphProfile build_profile(const spectrum::GraphGeometry& g,
                           const spectrum::StandingWave& w);

// Vertex coupling residuals. continuity = max |u_i - u_j| over the two
// vertices; derivative = max |sum of signed derivatives| over the two
// vertices (outgoing orientation). Both vanish for exact standing waves.
struct KirchhoffResidual {
    double continuity;
    double derivative;
};
KirchhoffResidual kirchhoff_residual(const GraphProfile& p);

// Max over a uniform interior grid (samples points per edge) of
// |u'' + u^3 + omega u|, u'' by centered differences with step
// h = 1e-4 * edge length. Measures that the profile solves the equation,
// up to the O(h^2) truncation of the stencil.
double ode_residual(const GraphProfile& p, int samples = 64);

// Serialize grid_points samples per edge (endpoints included). CSV columns:
// edge,x,u,du (header included). JSON carries geometry, frequency, family
// and the same samples. include_residuals adds the Kirchhoff and ODE
// residuals: JSON fields, or leading '#' comment lines for CSV.
enum class ExportFormat { Csv, Json };
std::string export_profile(const GraphProfile& p, int grid_points,
                           ExportFormat format, bool include_residuals = false);

} // namespace dbridge::profile
