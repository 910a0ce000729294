#ifndef FRACSEMI_POTENTIAL_HPP
#define FRACSEMI_POTENTIAL_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fracsemi/torus_grid.hpp"

namespace fracsemi {

enum class PotentialFamily { constant, well, bump_array, counterexample, custom };

std::string family_name(PotentialFamily f);

/// Nonnegative potential V on a grid, with the exponent p0 of its locally
/// uniform class and the family metadata it was built from.
struct Potential {
    const TorusGrid* grid = nullptr;
    Field values;
    double p0 = 1.0;
    PotentialFamily family = PotentialFamily::custom;
    std::map<std::string, double> params;

    double sup() const;  // ||V||_inf on the grid
};

/// Pointwise clamp V_M = min(V, M).
struct TruncatedPotential {
    const Potential* base = nullptr;
    double M = 0.0;
    Field values;

    double sup() const;
};

Potential make_constant(const TorusGrid& grid, double value, double p0 = 1.0);
/// Indicator well of the given depth on |x - center| <= width/2.
Potential make_well(const TorusGrid& grid, double depth, double width,
                    double center = 0.0, double p0 = 1.0);
/// Periodic array of cos^2 bumps with the given center spacing (L must be a
/// multiple of the spacing).
Potential make_bump_array(const TorusGrid& grid, double height, double radius,
                          double spacing, double p0 = 1.0);
Potential make_custom(const TorusGrid& grid, Field values, double p0 = 1.0);

/// Unbounded-family surrogate: unit cubes at the integer lattice of the
/// torus, each carrying one bump of radius 1/(2n) normalized to discrete
/// cube integral exactly 1, with radial index n = clamp(|i|, 1, n_max) and
/// n_max = L/2.  Truncation deflates far bumps like M/n^N while every cube
/// of V keeps unit mass.
Potential make_counterexample(const TorusGrid& grid, double p0);

/// x -> h^N sum over the periodic ball B(x, r) of f.
Field ball_integral_field(const Field& f, double r);

/// sup over centers of the local L^{p0} norm over balls of the given radius.
double uniform_norm(const Potential& V, double p0, double ball_radius = 1.0);
double uniform_norm_field(const Field& f, double p0, double ball_radius);

TruncatedPotential truncate(const Potential& V, double M);

/// (M, ||V - V_M||_{L^{p0}_U}) along an increasing ladder of M values.
std::vector<std::pair<double, double>>
approximability_profile(const Potential& V, double p0,
                        const std::vector<double>& M_ladder);

struct BallCriterionResult {
    double inf_value = 0.0;
    std::size_t argmin = 0;  // flat grid index of the minimizing center
};

BallCriterionResult ball_criterion_field(const Field& f, double r);
BallCriterionResult ball_criterion(const Potential& V, double r);
BallCriterionResult ball_criterion(const TruncatedPotential& V, double r);

/// CSV export of the potential samples, columns: x[,y],V
void export_csv(const Potential& V, std::ostream& out);

} // namespace fracsemi

#endif
