#ifndef FRACSEMI_TORUS_GRID_HPP
#define FRACSEMI_TORUS_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fracsemi/common.hpp"

namespace fracsemi {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Fractional order μ ∈ (0, 1].  μ = 1 is the classical heat baseline.
struct FractionalOrder {
    double mu;
    explicit FractionalOrder(double mu_);
};

/// Uniform periodic grid on [-L/2, L/2)^N with its Fourier frequency table.
class TorusGrid {
  public:
    TorusGrid(int dim, double length, int points_per_axis);

    int dim() const { return dim_; }
    double length() const { return length_; }
    int points_per_axis() const { return n_; }
    double spacing() const { return h_; }
    std::size_t point_count() const { return count_; }
    /// Quadrature weight h^N of one grid cell.
    double cell_volume() const { return cell_volume_; }

    /// ξ_k = 2πk/L for k in FFT storage order {0, 1, ..., n/2-1, -n/2, ..., -1}.
    const std::vector<double>& freqs() const { return freqs_; }

    /// Physical coordinate of axis index i (FFT storage order: x = i*h for
    /// i < n/2, x = (i-n)*h otherwise, so the box is [-L/2, L/2)).
    double coord(int i) const;
    /// Row-major flat index from per-axis indices (ix fastest for dim 2).
    std::size_t index(int ix, int iy = 0) const;
    /// |ξ|^2 table over all grid points, row-major, FFT storage order.
    const std::vector<double>& freq_square() const { return freq_sq_; }

    /// Periodic distance between two coordinates on one axis.
    double axis_distance(double a, double b) const;

    bool operator==(const TorusGrid& other) const {
        return dim_ == other.dim_ && length_ == other.length_ && n_ == other.n_;
    }

  private:
    int dim_;
    double length_;
    int n_;
    double h_;
    std::size_t count_;
    double cell_volume_;
    std::vector<double> freqs_;
    std::vector<double> freq_sq_;
};

/// Real-valued grid function.  Values are row-major over the grid in the
/// same storage order as the transform.
struct Field {
    const TorusGrid* grid = nullptr;
    std::vector<double> values;

    Field() = default;
    Field(const TorusGrid& g, double fill = 0.0)
        : grid(&g), values(g.point_count(), fill) {}
    Field(const TorusGrid& g, std::vector<double> v);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// Throws invalid_field_error when f is unbound or has non-finite entries.
void validate(const Field& f);

/// Discrete L^p norm: (h^N Σ|f|^p)^{1/p}, or max|f| for p = ∞.
double lp_norm(const Field& f, double p);

/// h^N-weighted inner product.
double inner_product(const Field& f, const Field& g);

/// Pointwise |f|.
Field abs(const Field& f);

/// Max of |f| over the outer 10% shell of the box (wrap-around indicator).
double boundary_mass(const Field& f);

/// Generic Fourier multiplier: inverse transform of m(|ξ|^2) · f̂(ξ).
Field apply_multiplier(const Field& f, const std::function<double(double)>& m);
/// Same with a precomputed multiplier table over freq_square().
Field apply_multiplier(const Field& f, const std::vector<double>& table);

/// Spectral (-Δ)^μ: multiplier |ξ|^(2μ), zero mode to zero.
Field fractional_laplacian_apply(const Field& f, FractionalOrder order);

/// Free fractional semigroup: multiplier e^(-t|ξ|^(2μ)); identity at t = 0.
Field free_semigroup_apply(const Field& f, FractionalOrder order, double t);

/// Multiplier table for e^(-t|ξ|^(2μ)) on a given grid.
std::vector<double> semigroup_multiplier(const TorusGrid& grid,
                                         FractionalOrder order, double t);

/// Seeded Gaussian noise smoothed by a short heat flow (so quadrature-based
/// engines see band-limited data).  nonnegative shifts the minimum to 0.
Field random_field(const TorusGrid& grid, std::uint64_t seed,
                   double smoothing = 0.02, bool nonnegative = false);

} // namespace fracsemi

#endif
