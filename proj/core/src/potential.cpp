#include "fracsemi/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fracsemi/fft.hpp"

namespace fracsemi {

namespace {

void require_nonnegative(const Field& v) {
    validate(v);
    for (double x : v.values)
        if (x < 0.0) throw config_error("potential values must be nonnegative");
}

void require_ball_radius(const TorusGrid& g, double r) {
    if (!(r > 0.0) || !(r < g.length() / 2.0))
        throw config_error("ball radius must lie in (0, L/2)");
}

} // namespace

std::string family_name(PotentialFamily f) {
    switch (f) {
        case PotentialFamily::constant: return "constant";
        case PotentialFamily::well: return "well";
        case PotentialFamily::bump_array: return "bump_array";
        case PotentialFamily::counterexample: return "counterexample";
        case PotentialFamily::custom: return "custom";
    }
    return "custom";
}

double Potential::sup() const { return lp_norm(values, kInfinity); }
double TruncatedPotential::sup() const { return lp_norm(values, kInfinity); }

Potential make_constant(const TorusGrid& grid, double value, double p0) {
    if (value < 0.0) throw config_error("constant potential must be nonnegative");
    Potential V{&grid, Field(grid, value), p0, PotentialFamily::constant, {{"value", value}}};
    return V;
}

Potential make_well(const TorusGrid& grid, double depth, double width,
                    double center, double p0) {
    if (depth < 0.0 || width <= 0.0)
        throw config_error("well requires depth >= 0 and width > 0");
    Field v(grid, 0.0);
    const int n = grid.points_per_axis();
    const double half = width / 2.0;
    if (grid.dim() == 1) {
        for (int i = 0; i < n; ++i)
            if (grid.axis_distance(grid.coord(i), center) <= half) v[i] = depth;
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double dx = grid.axis_distance(grid.coord(ix), center);
                const double dy = grid.axis_distance(grid.coord(iy), center);
                if (std::hypot(dx, dy) <= half) v[grid.index(ix, iy)] = depth;
            }
    }
    Potential V{&grid, std::move(v), p0, PotentialFamily::well,
                {{"depth", depth}, {"width", width}, {"center", center}}};
    return V;
}

Potential make_bump_array(const TorusGrid& grid, double height, double radius,
                          double spacing, double p0) {
    if (height < 0.0 || radius <= 0.0 || spacing <= 0.0)
        throw config_error("bump_array requires positive height, radius, spacing");
    const double cells = grid.length() / spacing;
    if (std::abs(cells - std::round(cells)) > 1e-9)
        throw config_error("bump_array spacing must divide the box length");
    Field v(grid, 0.0);
    const int n = grid.points_per_axis();
    auto bump = [&](double dist) {
        if (dist >= radius) return 0.0;
        const double c = std::cos(std::numbers::pi * dist / (2.0 * radius));
        return height * c * c;
    };
    auto nearest_center_dist = [&](double x) {
        const double m = std::fmod(std::fmod(x, spacing) + spacing, spacing);
        return std::min(m, spacing - m);
    };
    if (grid.dim() == 1) {
        for (int i = 0; i < n; ++i) v[i] = bump(nearest_center_dist(grid.coord(i)));
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double dx = nearest_center_dist(grid.coord(ix));
                const double dy = nearest_center_dist(grid.coord(iy));
                v[grid.index(ix, iy)] = bump(std::hypot(dx, dy));
            }
    }
    Potential V{&grid, std::move(v), p0, PotentialFamily::bump_array,
                {{"height", height}, {"radius", radius}, {"spacing", spacing}}};
    return V;
}

Potential make_custom(const TorusGrid& grid, Field values, double p0) {
    require_nonnegative(values);
    Potential V{&grid, std::move(values), p0, PotentialFamily::custom, {}};
    return V;
}

Potential make_counterexample(const TorusGrid& grid, double p0) {
    if (!(p0 >= 1.0)) throw config_error("counterexample requires p0 >= 1");
    const double L = grid.length();
    if (std::abs(L - std::round(L)) > 1e-12 || std::fmod(std::round(L), 2.0) != 0.0)
        throw config_error("counterexample requires an even integer box length");
    const int n_max = static_cast<int>(std::round(L)) / 2;
    if (!(grid.spacing() <= 1.0 / (4.0 * n_max)))
        throw config_error("grid does not resolve the smallest bump: need h <= 1/(4 n_max)");

    Field v(grid, 0.0);
    const int n = grid.points_per_axis();
    const int dim = grid.dim();

    // One unit cube per integer lattice point; in each, a bump of radius
    // 1/(2 n_i) with n_i = clamp(|i|, 1, n_max), scaled so the discrete cube
    // integral is exactly 1.
    auto place_bump = [&](double cx, double cy, int idx) {
        const double radius = 1.0 / (2.0 * idx);
        std::vector<std::size_t> members;
        if (dim == 1) {
            const int lo = static_cast<int>(std::floor((cx - radius) / grid.spacing())) - 1;
            const int hi = static_cast<int>(std::ceil((cx + radius) / grid.spacing())) + 1;
            for (int ii = lo; ii <= hi; ++ii) {
                const int wrapped = ((ii % n) + n) % n;
                const double x = ii * grid.spacing();
                if (std::abs(x - cx) < radius)
                    members.push_back(static_cast<std::size_t>(wrapped));
            }
        } else {
            const double h = grid.spacing();
            const int lo = static_cast<int>(std::floor(-radius / h)) - 1;
            const int hi = static_cast<int>(std::ceil(radius / h)) + 1;
            const int icx = static_cast<int>(std::round(cx / h));
            const int icy = static_cast<int>(std::round(cy / h));
            for (int dy = lo; dy <= hi; ++dy)
                for (int dx = lo; dx <= hi; ++dx) {
                    const double x = (icx + dx) * h - cx;
                    const double y = (icy + dy) * h - cy;
                    if (std::hypot(x, y) < radius) {
                        const int wx = (((icx + dx) % n) + n) % n;
                        const int wy = (((icy + dy) % n) + n) % n;
                        members.push_back(grid.index(wx, wy));
                    }
                }
        }
        if (members.empty())
            throw config_error("counterexample bump not resolved by the grid");
        const double amp = 1.0 / (grid.cell_volume() * static_cast<double>(members.size()));
        for (std::size_t m : members) v.values[m] = amp;
    };

    if (dim == 1) {
        for (int i = -n_max; i < n_max; ++i) {
            const int idx = std::clamp(std::abs(i), 1, n_max);
            place_bump(static_cast<double>(i), 0.0, idx);
        }
    } else {
        for (int iy = -n_max; iy < n_max; ++iy)
            for (int ix = -n_max; ix < n_max; ++ix) {
                const double rad = std::hypot(static_cast<double>(ix), static_cast<double>(iy));
                const int idx = std::clamp(static_cast<int>(std::round(std::max(rad, 1.0))), 1, n_max);
                place_bump(static_cast<double>(ix), static_cast<double>(iy), idx);
            }
    }

    Potential V{&grid, std::move(v), p0, PotentialFamily::counterexample,
                {{"n_max", static_cast<double>(n_max)},
                 {"p0", p0},
                 {"r_star", dim == 1 ? 1.1 : 1.25}}};
    return V;
}

Field ball_integral_field(const Field& f, double r) {
    validate(f);
    const TorusGrid& g = *f.grid;
    require_ball_radius(g, r);
    const int n = g.points_per_axis();

    Field ind(g, 0.0);
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i)
            if (std::abs(g.coord(i)) <= r) ind[i] = 1.0;
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (std::hypot(g.coord(ix), g.coord(iy)) <= r)
                    ind[g.index(ix, iy)] = 1.0;
    }

    auto fs = fft::forward(f.values, g.dim(), n);
    auto is = fft::forward(ind.values, g.dim(), n);
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] *= std::conj(is[i]);
    Field out(g, fft::inverse_real(fs, g.dim(), n));
    const double cell = g.cell_volume();
    for (double& x : out.values) x = std::max(x * cell, 0.0);
    return out;
}

double uniform_norm_field(const Field& f, double p0, double ball_radius) {
    if (!(p0 >= 1.0)) throw config_error("uniform norm requires p0 >= 1");
    Field powed = f;
    if (p0 != 1.0)
        for (double& x : powed.values) x = std::pow(std::abs(x), p0);
    else
        for (double& x : powed.values) x = std::abs(x);
    const Field sums = ball_integral_field(powed, ball_radius);
    double m = 0.0;
    for (double x : sums.values) m = std::max(m, x);
    return std::pow(m, 1.0 / p0);
}

double uniform_norm(const Potential& V, double p0, double ball_radius) {
    return uniform_norm_field(V.values, p0, ball_radius);
}

TruncatedPotential truncate(const Potential& V, double M) {
    if (!(M > 0.0)) throw config_error("truncation level M must be positive");
    Field v = V.values;
    for (double& x : v.values) x = std::min(x, M);
    return TruncatedPotential{&V, M, std::move(v)};
}

std::vector<std::pair<double, double>>
approximability_profile(const Potential& V, double p0,
                        const std::vector<double>& M_ladder) {
    if (!std::is_sorted(M_ladder.begin(), M_ladder.end()))
        throw config_error("M ladder must be increasing");
    std::vector<std::pair<double, double>> out;
    out.reserve(M_ladder.size());
    for (double M : M_ladder) {
        const TruncatedPotential VM = truncate(V, M);
        Field diff = V.values;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= VM.values[i];
        out.emplace_back(M, uniform_norm_field(diff, p0, 1.0));
    }
    return out;
}

BallCriterionResult ball_criterion_field(const Field& f, double r) {
    const Field sums = ball_integral_field(f, r);
    BallCriterionResult res;
    res.inf_value = sums[0];
    for (std::size_t i = 0; i < sums.size(); ++i)
        if (sums[i] < res.inf_value) {
            res.inf_value = sums[i];
            res.argmin = i;
        }
    return res;
}

BallCriterionResult ball_criterion(const Potential& V, double r) {
    return ball_criterion_field(V.values, r);
}

BallCriterionResult ball_criterion(const TruncatedPotential& V, double r) {
    return ball_criterion_field(V.values, r);
}

void export_csv(const Potential& V, std::ostream& out) {
    const TorusGrid& g = *V.grid;
    if (g.dim() == 1) {
        out << "x,V\n";
        for (int i = 0; i < g.points_per_axis(); ++i)
            out << g.coord(i) << ',' << V.values[i] << '\n';
    } else {
        out << "x,y,V\n";
        for (int iy = 0; iy < g.points_per_axis(); ++iy)
            for (int ix = 0; ix < g.points_per_axis(); ++ix)
                out << g.coord(ix) << ',' << g.coord(iy) << ','
                    << V.values[g.index(ix, iy)] << '\n';
    }
}

} // namespace fracsemi
