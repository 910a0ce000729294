#include "fracsemi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

#include "fracsemi/fft.hpp"

namespace fracsemi {

namespace {

using Spectrum = std::vector<std::complex<double>>;

Spectrum to_spectrum(const Field& f) {
    return fft::forward(f.values, f.grid->dim(), f.grid->points_per_axis());
}

Field from_spectrum(const TorusGrid& g, const Spectrum& s) {
    return Field(g, fft::inverse_real(s, g.dim(), g.points_per_axis()));
}

void record(EvolutionResult& res, double t, const Field& u) {
    res.trace.push_back({t, lp_norm(u, 1.0), lp_norm(u, 2.0), lp_norm(u, kInfinity)});
}

double sup_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ------------------------------------------------------------------ picard

// One Picard window of length T0 on quad_nodes uniform time nodes.  The
// Duhamel integral is evaluated spectrally with composite Simpson weights
// (3/8 rule closes odd node counts; the first interval uses an interpolated
// midpoint).  Returns the end-of-window state; iters accumulates.
Field picard_window(const Field& u0, const std::vector<double>& pot,
                    FractionalOrder order, double T0, const EvolutionConfig& cfg,
                    int& iters) {
    const TorusGrid& g = *u0.grid;
    const int q = std::max(cfg.quad_nodes, 5);
    const double hw = T0 / (q - 1);

    // multiplier tables at half-step resolution: multH[k] ~ time k*hw/2
    const auto& sq = g.freq_square();
    std::vector<std::vector<double>> multH(2 * q - 1);
    for (int k = 0; k < 2 * q - 1; ++k) {
        multH[k].resize(sq.size());
        const double t = k * hw / 2.0;
        for (std::size_t i = 0; i < sq.size(); ++i)
            multH[k][i] = (sq[i] == 0.0) ? 1.0 : std::exp(-t * std::pow(sq[i], order.mu));
    }

    const Spectrum u0_hat = to_spectrum(u0);
    // free-flow predictor at every node
    std::vector<Field> u(q);
    for (int i = 0; i < q; ++i) {
        Spectrum s = u0_hat;
        for (std::size_t m = 0; m < s.size(); ++m) s[m] *= multH[2 * i][m];
        u[i] = from_spectrum(g, s);
    }

    // Simpson-type weights for integral over [0, t_i] on nodes 0..i
    auto quad_weights = [&](int i) {
        std::vector<double> w(i + 1, 0.0);
        if (i % 2 == 0) {
            for (int j = 0; j <= i; ++j)
                w[j] = (j == 0 || j == i) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            for (double& x : w) x *= hw / 3.0;
        } else if (i >= 3) {
            if (i - 3 >= 2)
                for (int j = 0; j <= i - 3; ++j)
                    w[j] += ((j == 0 || j == i - 3) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0)) * hw / 3.0;
            for (int j = i - 3; j <= i; ++j)
                w[j] += ((j == i - 3 || j == i) ? 1.0 : 3.0) * 3.0 * hw / 8.0;
        }
        return w;
    };
    std::vector<std::vector<double>> weights(q);
    for (int i = 2; i < q; ++i) weights[i] = quad_weights(i);

    for (int iter = 0; iter < cfg.max_picard_iters; ++iter) {
        // spectra of V u at every node
        std::vector<Spectrum> w_hat(q);
        for (int i = 0; i < q; ++i) {
            Field vu(g);
            for (std::size_t m = 0; m < vu.size(); ++m) vu[m] = pot[m] * u[i][m];
            w_hat[i] = to_spectrum(vu);
        }

        double residual = 0.0;
        for (int i = 1; i < q; ++i) {
            Spectrum integral(sq.size(), 0.0);
            if (i == 1) {
                // Simpson over one interval with quadratically interpolated midpoint
                Spectrum mid(sq.size());
                for (std::size_t m = 0; m < mid.size(); ++m)
                    mid[m] = 0.375 * w_hat[0][m] + 0.75 * w_hat[1][m] - 0.125 * w_hat[2][m];
                for (std::size_t m = 0; m < mid.size(); ++m)
                    integral[m] = (hw / 6.0) * (multH[2][m] * w_hat[0][m] +
                                                4.0 * multH[1][m] * mid[m] + w_hat[1][m]);
            } else {
                const auto& w = weights[i];
                for (int j = 0; j <= i; ++j) {
                    if (w[j] == 0.0) continue;
                    const auto& mult = multH[2 * (i - j)];
                    for (std::size_t m = 0; m < integral.size(); ++m)
                        integral[m] += w[j] * mult[m] * w_hat[j][m];
                }
            }
            Spectrum s(sq.size());
            for (std::size_t m = 0; m < s.size(); ++m)
                s[m] = multH[2 * i][m] * u0_hat[m] - integral[m];
            Field u_new = from_spectrum(g, s);
            residual = std::max(residual, sup_diff(u_new, u[i]));
            u[i] = std::move(u_new);
        }
        ++iters;
        if (residual < cfg.picard_tol) return u[q - 1];
    }
    throw convergence_error("picard iteration cap " + std::to_string(cfg.max_picard_iters) +
                            " reached before tolerance " + std::to_string(cfg.picard_tol));
}

EvolutionResult evolve_picard(const Field& u0, const Field& pot, FractionalOrder order,
                              double t_final, const EvolutionConfig& cfg) {
    const double vsup = lp_norm(pot, kInfinity);
    double T0 = (vsup > 0.0) ? 0.5 / vsup : t_final;
    if (cfg.window > 0.0) {
        if (cfg.window * vsup > 0.5 + 1e-12)
            throw config_error("picard window violates T0 ||V||_inf <= 1/2");
        T0 = cfg.window;
    }
    EvolutionResult res;
    res.final = u0;
    record(res, 0.0, u0);
    double t = 0.0;
    while (t < t_final - 1e-14) {
        const double step = std::min(T0, t_final - t);
        res.final = picard_window(res.final, pot.values, order, step, cfg,
                                  res.picard_iterations);
        ++res.windows;
        t += step;
        record(res, t, res.final);
    }
    return res;
}

// --------------------------------------------------------------- splitting

EvolutionResult evolve_splitting(const Field& u0, const Field& pot, FractionalOrder order,
                                 double t_final, const EvolutionConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw config_error("splitting requires dt > 0");
    const TorusGrid& g = *u0.grid;
    const int steps = std::max(1, static_cast<int>(std::ceil(t_final / cfg.dt - 1e-12)));
    const double dt = t_final / steps;

    std::vector<double> half(pot.size());
    for (std::size_t i = 0; i < pot.size(); ++i) half[i] = std::exp(-pot[i] * dt / 2.0);
    const auto mult = semigroup_multiplier(g, order, dt);

    EvolutionResult res;
    res.final = u0;
    record(res, 0.0, u0);
    for (int s = 0; s < steps; ++s) {
        Field& u = res.final;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half[i];
        u = apply_multiplier(u, mult);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half[i];
        ++res.steps;
        record(res, (s + 1) * dt, u);
    }
    return res;
}

// ------------------------------------------------------------ dense oracle

} // namespace

std::string engine_name(EngineKind k) {
    switch (k) {
        case EngineKind::picard: return "picard";
        case EngineKind::splitting: return "splitting";
        case EngineKind::dense_oracle: return "dense_oracle";
    }
    return "splitting";
}

DenseOperator::DenseOperator(const TorusGrid& grid, const Field& potential,
                             FractionalOrder order)
    : grid_(&grid) {
    const std::size_t npts = grid.point_count();
    if (npts > kPointCap)
        throw capability_error("dense oracle capped at " + std::to_string(kPointCap) +
                               " grid points");
    validate(potential);

    // A0 is circulant (block-circulant in 2D): its defining column is the
    // inverse transform of the symbol |xi|^(2mu).
    const auto& sq = grid.freq_square();
    Spectrum symbol(npts);
    for (std::size_t i = 0; i < npts; ++i)
        symbol[i] = (sq[i] == 0.0) ? 0.0 : std::pow(sq[i], order.mu);
    const auto column = fft::inverse_real(symbol, grid.dim(), grid.points_per_axis());

    const int n = grid.points_per_axis();
    A_.resize(npts, npts);
    if (grid.dim() == 1) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A_(i, j) = column[((i - j) % n + n) % n];
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const std::size_t row = grid.index(ix, iy);
                for (int jy = 0; jy < n; ++jy)
                    for (int jx = 0; jx < n; ++jx)
                        A_(row, grid.index(jx, jy)) =
                            column[grid.index(((ix - jx) % n + n) % n,
                                              ((iy - jy) % n + n) % n)];
            }
    }
    for (std::size_t i = 0; i < npts; ++i) A_(i, i) += potential[i];
    // symmetrize against roundoff
    A_ = ((A_ + A_.transpose()) / 2.0).eval();
    eig_.compute(A_);
    if (eig_.info() != Eigen::Success)
        throw convergence_error("dense eigendecomposition failed");
}

Field DenseOperator::propagate(const Field& u0, double t) const {
    validate(u0);
    const auto& Q = eig_.eigenvectors();
    Eigen::VectorXd c = Q.transpose() *
        Eigen::Map<const Eigen::VectorXd>(u0.values.data(), u0.size());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) *= std::exp(-t * eig_.eigenvalues()(i));
    Eigen::VectorXd out = Q * c;
    Field f(*grid_);
    Eigen::Map<Eigen::VectorXd>(f.values.data(), f.size()) = out;
    return f;
}

Eigen::MatrixXd DenseOperator::propagator(double t) const {
    const auto& Q = eig_.eigenvectors();
    Eigen::VectorXd d = (-t * eig_.eigenvalues().array()).exp();
    return Q * d.asDiagonal() * Q.transpose();
}

EvolutionResult evolve(const Field& u0, const Field& potential, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg) {
    validate(u0);
    validate(potential);
    if (!(t_final >= 0.0)) throw config_error("evolve requires t_final >= 0");
    if (t_final == 0.0) {
        EvolutionResult res;
        res.final = u0;
        record(res, 0.0, u0);
        res.boundary_mass = boundary_mass(u0);
        return res;
    }
    EvolutionResult res;
    switch (cfg.engine) {
        case EngineKind::picard:
            res = evolve_picard(u0, potential, order, t_final, cfg);
            break;
        case EngineKind::splitting:
            res = evolve_splitting(u0, potential, order, t_final, cfg);
            break;
        case EngineKind::dense_oracle: {
            DenseOperator op(*u0.grid, potential, order);
            res.final = op.propagate(u0, t_final);
            record(res, 0.0, u0);
            record(res, t_final, res.final);
            break;
        }
    }
    res.boundary_mass = boundary_mass(res.final);
    return res;
}

EvolutionResult evolve(const Field& u0, const Potential& V, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg) {
    return evolve(u0, V.values, order, t_final, cfg);
}

EvolutionResult evolve(const Field& u0, const TruncatedPotential& V, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg) {
    return evolve(u0, V.values, order, t_final, cfg);
}

double operator_norm_inf(const Field& potential, FractionalOrder order, double t,
                         const EvolutionConfig& cfg) {
    for (double v : potential.values)
        if (v < 0.0) throw config_error("operator_norm_inf requires V >= 0");
    const Field ones(*potential.grid, 1.0);
    return lp_norm(evolve(ones, potential, order, t, cfg).final, kInfinity);
}

double operator_norm_2(const Field& potential, FractionalOrder order, double t) {
    DenseOperator op(*potential.grid, potential, order);
    return std::exp(-t * op.lambda_min());
}

ComparisonReport comparison_check(const Field& u0, const Field& V1, const Field& V2,
                                  FractionalOrder order, double t,
                                  const EvolutionConfig& cfg, double tol) {
    for (std::size_t i = 0; i < V1.size(); ++i)
        if (V1[i] < V2[i] || V2[i] < 0.0)
            throw config_error("comparison_check requires V1 >= V2 >= 0 pointwise");
    for (double v : u0.values)
        if (v < 0.0) throw config_error("comparison_check requires u0 >= 0");

    const Field u_v1 = evolve(u0, V1, order, t, cfg).final;
    const Field u_v2 = evolve(u0, V2, order, t, cfg).final;
    const Field u_free = free_semigroup_apply(u0, order, t);

    ComparisonReport rep;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        rep.max_negative = std::max(rep.max_negative, -u_v1[i]);
        rep.max_order_violation = std::max(rep.max_order_violation, u_v1[i] - u_v2[i]);
        rep.max_free_violation = std::max(rep.max_free_violation, u_v2[i] - u_free[i]);
    }
    rep.ok = rep.max_negative <= tol && rep.max_order_violation <= tol &&
             rep.max_free_violation <= tol;
    return rep;
}

std::vector<TruncationDelta>
truncation_convergence(const Field& u0, const Potential& V, FractionalOrder order,
                       double t, const std::vector<double>& M_ladder,
                       const EvolutionConfig& cfg) {
    if (!std::is_sorted(M_ladder.begin(), M_ladder.end()))
        throw config_error("M ladder must be increasing");
    for (double v : u0.values)
        if (v < 0.0) throw config_error("truncation_convergence requires u0 >= 0");

    const Field u_full = evolve(u0, V, order, t, cfg).final;
    std::vector<TruncationDelta> out;
    out.reserve(M_ladder.size());
    for (double M : M_ladder) {
        const TruncatedPotential VM = truncate(V, M);
        const Field u_m = evolve(u0, VM, order, t, cfg).final;
        Field diff(*u0.grid);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_m[i] - u_full[i];
        out.push_back({M, lp_norm(diff, 1.0), lp_norm(diff, 2.0), lp_norm(diff, kInfinity)});
    }
    return out;
}

void export_csv(const EvolutionResult& result, std::ostream& out) {
    out << "t,l1,l2,linf\n";
    for (const auto& p : result.trace)
        out << p.t << ',' << p.l1 << ',' << p.l2 << ',' << p.linf << '\n';
}

} // namespace fracsemi
