#include "fracsemi/torus_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fracsemi/fft.hpp"

namespace fracsemi {

FractionalOrder::FractionalOrder(double mu_) : mu(mu_) {
    if (!(mu > 0.0) || !(mu <= 1.0))
        throw config_error("fractional order requires mu in (0, 1], got " +
                           std::to_string(mu_));
}

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

TorusGrid::TorusGrid(int dim, double length, int points_per_axis)
    : dim_(dim), length_(length), n_(points_per_axis) {
    if (dim != 1 && dim != 2)
        throw config_error("grid dimension must be 1 or 2");
    if (!(length > 0.0))
        throw config_error("box length must be positive");
    if (!is_power_of_two(points_per_axis))
        throw config_error("points per axis must be a power of two");
    h_ = length_ / n_;
    count_ = (dim_ == 1) ? static_cast<std::size_t>(n_)
                         : static_cast<std::size_t>(n_) * n_;
    cell_volume_ = (dim_ == 1) ? h_ : h_ * h_;

    freqs_.resize(n_);
    const double base = 2.0 * std::numbers::pi / length_;
    for (int k = 0; k < n_; ++k) {
        const int kk = (k < n_ / 2) ? k : k - n_;
        freqs_[k] = base * kk;
    }

    freq_sq_.resize(count_);
    if (dim_ == 1) {
        for (int k = 0; k < n_; ++k) freq_sq_[k] = freqs_[k] * freqs_[k];
    } else {
        for (int ky = 0; ky < n_; ++ky)
            for (int kx = 0; kx < n_; ++kx)
                freq_sq_[static_cast<std::size_t>(ky) * n_ + kx] =
                    freqs_[kx] * freqs_[kx] + freqs_[ky] * freqs_[ky];
    }
}

double TorusGrid::coord(int i) const {
    return (i < n_ / 2) ? i * h_ : (i - n_) * h_;
}

std::size_t TorusGrid::index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * n_ + ix;
}

double TorusGrid::axis_distance(double a, double b) const {
    double d = std::fmod(std::abs(a - b), length_);
    return std::min(d, length_ - d);
}

Field::Field(const TorusGrid& g, std::vector<double> v)
    : grid(&g), values(std::move(v)) {
    if (values.size() != g.point_count())
        throw invalid_field_error("field length does not match grid point count");
}

void validate(const Field& f) {
    if (f.grid == nullptr || f.values.size() != f.grid->point_count())
        throw invalid_field_error("field is not bound to a grid");
    for (double v : f.values)
        if (!std::isfinite(v))
            throw invalid_field_error("field contains non-finite values");
}

double lp_norm(const Field& f, double p) {
    validate(f);
    if (!(p >= 1.0))
        throw config_error("lp_norm requires p in [1, inf]");
    if (p == kInfinity) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    if (p == 1.0) {
        for (double v : f.values) acc += std::abs(v);
    } else if (p == 2.0) {
        for (double v : f.values) acc += v * v;
    } else {
        for (double v : f.values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(f.grid->cell_volume() * acc, 1.0 / p);
}

double inner_product(const Field& f, const Field& g) {
    validate(f);
    validate(g);
    if (!(*f.grid == *g.grid))
        throw invalid_field_error("inner product of fields on different grids");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
    return f.grid->cell_volume() * acc;
}

Field abs(const Field& f) {
    Field out = f;
    for (double& v : out.values) v = std::abs(v);
    return out;
}

double boundary_mass(const Field& f) {
    validate(f);
    const TorusGrid& g = *f.grid;
    const double half = 0.5 * g.length();
    const double shell = 0.05 * g.length();
    double m = 0.0;
    const int n = g.points_per_axis();
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i)
            if (half - std::abs(g.coord(i)) <= shell)
                m = std::max(m, std::abs(f[i]));
    } else {
        for (int iy = 0; iy < n; ++iy) {
            const bool edge_y = half - std::abs(g.coord(iy)) <= shell;
            for (int ix = 0; ix < n; ++ix)
                if (edge_y || half - std::abs(g.coord(ix)) <= shell)
                    m = std::max(m, std::abs(f[g.index(ix, iy)]));
        }
    }
    return m;
}

Field apply_multiplier(const Field& f, const std::vector<double>& table) {
    validate(f);
    const TorusGrid& g = *f.grid;
    auto spec = fft::forward(f.values, g.dim(), g.points_per_axis());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= table[i];
    return Field(g, fft::inverse_real(spec, g.dim(), g.points_per_axis()));
}

Field apply_multiplier(const Field& f, const std::function<double(double)>& m) {
    const auto& sq = f.grid->freq_square();
    std::vector<double> table(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) table[i] = m(sq[i]);
    return apply_multiplier(f, table);
}

Field fractional_laplacian_apply(const Field& f, FractionalOrder order) {
    const double mu = order.mu;
    return apply_multiplier(f, [mu](double xi_sq) {
        return xi_sq == 0.0 ? 0.0 : std::pow(xi_sq, mu);
    });
}

std::vector<double> semigroup_multiplier(const TorusGrid& grid,
                                         FractionalOrder order, double t) {
    if (t < 0.0)
        throw config_error("free semigroup requires t >= 0");
    const auto& sq = grid.freq_square();
    std::vector<double> table(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        table[i] = sq[i] == 0.0 ? 1.0 : std::exp(-t * std::pow(sq[i], order.mu));
    return table;
}

Field free_semigroup_apply(const Field& f, FractionalOrder order, double t) {
    if (t < 0.0)
        throw config_error("free semigroup requires t >= 0");
    if (t == 0.0) {
        validate(f);
        return f;
    }
    return apply_multiplier(f, semigroup_multiplier(*f.grid, order, t));
}

Field random_field(const TorusGrid& grid, std::uint64_t seed,
                   double smoothing, bool nonnegative) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field f(grid);
    for (double& v : f.values) v = gauss(rng);
    if (smoothing > 0.0)
        f = free_semigroup_apply(f, FractionalOrder(1.0), smoothing);
    if (nonnegative) {
        const double m = *std::min_element(f.values.begin(), f.values.end());
        for (double& v : f.values) v -= m;
    }
    return f;
}

} // namespace fracsemi
