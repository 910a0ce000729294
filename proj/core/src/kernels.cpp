#include "fracsemi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fracsemi/fft.hpp"

namespace fracsemi {

namespace {

using std::numbers::pi;

// Coefficient of the algebraic kernel tail k0(z) ~ c |z|^-(N+2mu) (the
// classical 2mu-stable asymptotic); vanishes at mu = 1.
double tail_coefficient(int dim, double mu) {
    const double alpha = 2.0 * mu;
    return alpha * std::pow(2.0, alpha - 1.0) * std::pow(pi, -(dim / 2.0 + 1.0)) *
           std::sin(pi * mu) * std::tgamma((dim + alpha) / 2.0) * std::tgamma(alpha / 2.0);
}

// Estimated kernel mass outside the box [-L/2, L/2)^N.
double tail_mass_estimate(int dim, double mu, double half_box) {
    if (mu == 1.0) {
        // Gaussian: complementary mass beyond |z| = L/2 per axis.
        return dim * std::erfc(half_box / 2.0);
    }
    const double c = tail_coefficient(dim, mu);
    const double ring = (dim == 1) ? 2.0 : 2.0 * pi * 1.0;  // surface factor
    // integral over |z| > half_box of c |z|^-(N+2mu)
    return ring * c * std::pow(half_box, -2.0 * mu) / (2.0 * mu);
}

} // namespace

double profile_bound_H(int dim, double mu, double rho) {
    if (rho <= 1.0) return 1.0;
    return std::pow(rho, -(dim + 2.0 * mu));
}

double profile_bound_I(int dim, double mu, double rho) {
    return std::pow(1.0 + rho * rho, -(dim + 2.0 * mu) / 2.0);
}

KernelProfile build_profile(double mu, const TorusGrid& grid,
                            const ProfileOptions& opt) {
    FractionalOrder order(mu);
    const int n = grid.points_per_axis();
    const double xi_max = pi * n / grid.length() * (grid.dim() == 2 ? std::sqrt(2.0) : 1.0);
    if (opt.strict) {
        const double res = std::exp(-std::pow(xi_max, 2.0 * mu));
        if (!(res < 1e-14))
            throw config_error("kernel profile under-resolved: e^(-|xi_max|^(2mu)) = " +
                               std::to_string(res) + " >= 1e-14");
        // The algebraic tail is intrinsic for mu < 1; gate only gross
        // periodization (folding distorts the shape at the few-percent level).
        const double tail = tail_mass_estimate(grid.dim(), mu, grid.length() / 2.0);
        if (!(tail < 0.05))
            throw config_error("kernel tail mass outside the box estimated at " +
                               std::to_string(tail) + " >= 0.05; enlarge L");
    }

    // k0 = (1/L^N) sum_xi e^(-|xi|^(2mu)) e^(i xi x): inverse transform of the
    // multiplier divided by the cell volume.
    const auto& sq = grid.freq_square();
    std::vector<std::complex<double>> spec(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        spec[i] = (sq[i] == 0.0) ? 1.0 : std::exp(-std::pow(sq[i], mu));
    auto vals = fft::inverse_real(spec, grid.dim(), n);
    const double inv_cell = 1.0 / grid.cell_volume();
    for (double& v : vals) v *= inv_cell;

    KernelProfile p;
    p.mu = mu;
    p.grid = &grid;
    p.values = Field(grid, std::move(vals));

    if (opt.strict) {
        const double peak = p.values[0];
        double min_v = 0.0;
        for (double v : p.values.values) min_v = std::min(min_v, v);
        if (min_v < -1e-10 * peak)
            throw accuracy_error("kernel profile dips below the positivity floor");
        for (double& v : p.values.values) v = std::max(v, 0.0);
    }
    return p;
}

double KernelProfile::value_at_radius(double rho) const {
    const double h = grid->spacing();
    const double half = grid->length() / 2.0;
    if (rho >= half - h) return 0.0;
    const int i = static_cast<int>(rho / h);
    const double frac = rho / h - i;
    // positive-axis samples sit at indices 0 .. n/2-1 in FFT storage order
    const double a = values[grid->index(i)];
    const double b = values[grid->index(i + 1 < grid->points_per_axis() / 2 ? i + 1 : i)];
    return a + frac * (b - a);
}

double KernelProfile::value_at(double t, double rho) const {
    const double stretch = std::pow(t, 1.0 / (2.0 * mu));
    const double scale = std::pow(t, -grid->dim() / (2.0 * mu));
    return scale * value_at_radius(rho / stretch);
}

std::pair<double, double> certify_bounds(KernelProfile& profile) {
    if (profile.mu >= 1.0)
        throw config_error("certify_bounds applies to mu < 1 only (Gaussian excluded)");
    const TorusGrid& g = *profile.grid;
    const double quarter = g.length() / 4.0;
    double c1 = kInfinity, c2 = 0.0;
    const int n = g.points_per_axis();
    auto visit = [&](double rho, double k) {
        const double ratio = k / profile_bound_H(g.dim(), profile.mu, rho);
        c1 = std::min(c1, ratio);
        c2 = std::max(c2, ratio);
    };
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            const double z = g.coord(i);
            if (std::abs(z) <= quarter) visit(std::abs(z), profile.values[i]);
        }
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double rho = std::hypot(g.coord(ix), g.coord(iy));
                if (rho <= quarter) visit(rho, profile.values[g.index(ix, iy)]);
            }
    }
    if (!(c1 > 0.0))
        throw accuracy_error("kernel/H ratio lower bound is nonpositive (under-resolved)");
    profile.lower_c = c1;
    profile.upper_c = c2;
    return {c1, c2};
}

double fractional_constant(int dim, double mu) {
    if (dim != 1 && dim != 2)
        throw config_error("C_{N,mu} requires dimension 1 or 2");
    if (!(mu > 0.0 && mu < 1.0))
        throw config_error("C_{N,mu} requires mu in (0, 1)");
    return std::pow(2.0, 2.0 * mu) * mu * std::tgamma(dim / 2.0 + mu) /
           (std::pow(pi, dim / 2.0) * std::tgamma(1.0 - mu));
}

void export_csv(const KernelProfile& profile, std::ostream& out) {
    const TorusGrid& g = *profile.grid;
    out << "z,k,H,I,k_over_H\n";
    for (int i = 0; i < g.points_per_axis() / 2; ++i) {
        const double z = g.coord(i);
        const double k = profile.values[g.index(i)];
        const double H = profile_bound_H(g.dim(), profile.mu, z);
        const double I = profile_bound_I(g.dim(), profile.mu, z);
        out << z << ',' << k << ',' << H << ',' << I << ',' << k / H << '\n';
    }
}

} // namespace fracsemi
