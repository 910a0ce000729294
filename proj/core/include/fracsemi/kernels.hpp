#ifndef FRACSEMI_KERNELS_HPP
#define FRACSEMI_KERNELS_HPP

#include <iosfwd>
#include <utility>

#include "fracsemi/torus_grid.hpp"

namespace fracsemi {

/// t = 1 slice of the fractional heat kernel, sampled at grid points and
/// centered at 0 (FFT storage order).  General t follows by self-similar
/// rescaling k(t, z) = t^(-N/2mu) k0(z t^(-1/2mu)).
struct KernelProfile {
    double mu = 0.0;
    const TorusGrid* grid = nullptr;
    Field values;
    double lower_c = 0.0;  // filled by certify_bounds
    double upper_c = 0.0;

    /// k0 at radius rho, by linear interpolation along the positive axis.
    /// Returns 0 beyond the half box (conservative for lower bounds).
    double value_at_radius(double rho) const;
    /// Rescaled kernel k(t, z) at radius rho.
    double value_at(double t, double rho) const;
};

struct ProfileOptions {
    /// Enforce the resolution precondition e^(-|xi_max|^(2mu)) < 1e-14 and
    /// a gross periodization gate (tail mass outside the box < 5%; the
    /// algebraic tail is intrinsic for mu < 1).  Relaxed mode builds the
    /// profile anyway (mass stays exact); shape checks are then meaningless.
    bool strict = true;
};

/// Profile bound H_mu(z) = min{1, |z|^-(N+2mu)}.
double profile_bound_H(int dim, double mu, double rho);
/// Profile bound I_mu(z) = (1+|z|^2)^-((N+2mu)/2).
double profile_bound_I(int dim, double mu, double rho);

/// t = 1 kernel slice via the inverse transform of e^(-|xi|^(2mu)).
KernelProfile build_profile(double mu, const TorusGrid& grid,
                            const ProfileOptions& opt = {});

/// Empirical constants (c1, c2) with c1 H_mu <= k0 <= c2 H_mu on |z| <= L/4.
/// mu = 1 is rejected: the bound family does not apply to the Gaussian.
std::pair<double, double> certify_bounds(KernelProfile& profile);

/// C_{N,mu} = 2^(2mu) mu Gamma(N/2+mu) / (pi^(N/2) Gamma(1-mu)).
double fractional_constant(int dim, double mu);

/// CSV export, columns: z,k,H,I,k_over_H (positive axis).
void export_csv(const KernelProfile& profile, std::ostream& out);

} // namespace fracsemi

#endif
