#ifndef FRACSEMI_SUBORDINATOR_HPP
#define FRACSEMI_SUBORDINATOR_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "fracsemi/torus_grid.hpp"

namespace fracsemi {

/// Tabulated one-sided stable density f_{1,mu} with quadrature weights on a
/// log-spaced grid, plus an analytic algebraic tail beyond the last node.
/// The t-density follows by self-similar rescaling:
///   f_{t,mu}(s) = t^(-1/mu) f_{1,mu}(s t^(-1/mu)).
struct SubordinatorDensity {
    double mu = 0.0;
    std::vector<double> s_nodes;   // increasing, positive
    std::vector<double> values;    // f_{1,mu}(s_j) >= 0 after clamping
    std::vector<double> weights;   // quadrature weights for integrals ds
    double tail_coeff = 0.0;       // fitted c with f ~ c s^(-1-mu) past s_max
    double tail_mass = 0.0;        // analytic integral of the fitted tail
    double mass_defect = 0.0;      // |1 - (sum w f + tail_mass)|
    double clamp_mass = 0.0;       // quadrature mass removed by clamping

    /// Interpolated f_{1,mu}(s); 0 left of the grid, fitted tail right of it.
    double evaluate(double s) const;
};

/// Pointwise f_{1,mu}(s) via the Zolotarev integral representation
/// (convergent power series in s^(-mu) for large s).
/// Exposed for oracle-style tests; build_density is the tabulated product.
double stable_density_point(double mu, double s);

/// Tabulate f_{1,mu}.  node_count >= 64; mu in (0,1).
SubordinatorDensity build_density(double mu, int node_count = 2001);

/// Quadrature of the Laplace transform: integral f_{1,mu}(s) e^(-lambda s) ds.
/// Exact value is exp(-lambda^mu).
double laplace_transform(const SubordinatorDensity& density, double lambda);

/// S_mu(t) f via subordination against the mu = 1 semigroup:
///   sum_j w_j f_{1,mu}(s_j) S(s_j t^(1/mu)) f  (+ tail term).
/// `heat` must be the mu = 1 free semigroup taking (field, time).
Field subordinate(const Field& f, const SubordinatorDensity& density, double t,
                  const std::function<Field(const Field&, double)>& heat);

/// CSV export, columns: s,f
void export_csv(const SubordinatorDensity& density, std::ostream& out);

} // namespace fracsemi

#endif
