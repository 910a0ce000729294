#include "fracsemi/decay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace fracsemi {

namespace {

bool dense_feasible(const TorusGrid& g) {
    return g.point_count() <= DenseOperator::kPointCap;
}

// Least squares slope of log(norm) over the tail half of the grid.
// Returns the fitted decay rate (>= 0) and enforces R^2 >= 0.999.
double fit_tail_rate(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t lo = t.size() / 2;
    const std::size_t m = t.size() - lo;
    double st = 0.0, sy = 0.0;
    for (std::size_t i = lo; i < t.size(); ++i) {
        st += t[i];
        sy += std::log(y[i]);
    }
    const double mt = st / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = lo; i < t.size(); ++i) {
        const double dx = t[i] - mt, dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    const double ss_res = syy - sxy * sxy / sxx;
    if (syy > 0.0 && 1.0 - ss_res / syy < 0.999)
        throw accuracy_error("norm-trace fit quality below R^2 = 0.999 "
                             "(transient not settled; extend t_grid)");
    return std::max(-slope, 0.0);
}

std::vector<double> norm_trace(const Field& potential, FractionalOrder order,
                               double p, const std::vector<double>& t_grid,
                               const EvolutionConfig& cfg, std::uint64_t seed) {
    const TorusGrid& g = *potential.grid;
    Field u0 = (p == 2.0) ? random_field(g, seed, 0.02, true) : Field(g, 1.0);
    if (p == 2.0) {
        const double n2 = lp_norm(u0, 2.0);
        for (double& v : u0.values) v /= n2;
    }
    std::vector<double> norms;
    norms.reserve(t_grid.size());
    if (dense_feasible(g)) {
        DenseOperator op(g, potential, order);
        for (double t : t_grid)
            norms.push_back(lp_norm(op.propagate(u0, t), p == 2.0 ? 2.0 : kInfinity));
    } else {
        Field u = u0;
        double t_prev = 0.0;
        for (double t : t_grid) {
            u = evolve(u, potential, order, t - t_prev, cfg).final;
            t_prev = t;
            norms.push_back(lp_norm(u, p == 2.0 ? 2.0 : kInfinity));
        }
    }
    return norms;
}

} // namespace

std::string verdict_name(DecayVerdict v) {
    switch (v) {
        case DecayVerdict::decay: return "decay";
        case DecayVerdict::no_decay: return "no_decay";
        case DecayVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double estimate_omega(const Field& potential, FractionalOrder order, double p,
                      const std::vector<double>& t_grid, const EvolutionConfig& cfg,
                      OmegaRoute route, std::uint64_t seed) {
    validate(potential);
    if (p != 1.0 && p != 2.0 && p != kInfinity)
        throw config_error("estimate_omega supports p in {1, 2, inf}");

    if (p == 2.0 && route != OmegaRoute::trace_fit &&
        dense_feasible(*potential.grid)) {
        DenseOperator op(*potential.grid, potential, order);
        return std::max(op.lambda_min(), 0.0);
    }
    if (route == OmegaRoute::eigensolve)
        throw capability_error("eigensolve route requires p = 2 on a dense-feasible grid");

    if (t_grid.size() < 4 || !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw config_error("estimate_omega needs an increasing t_grid of >= 4 points");

    const auto norms = norm_trace(potential, order, p, t_grid, cfg, seed);
    const double base = norms.front();
    bool flat = true;
    for (double v : norms) flat = flat && std::abs(v / base - 1.0) <= 1e-3;
    if (flat) return 0.0;
    if (!(norms.front() / norms.back() >= std::exp(1.0)))
        throw config_error("t_grid spans less than one e-folding of the norm");
    for (std::size_t i = 1; i < norms.size(); ++i)
        if (norms[i] > norms[i - 1] * (1.0 + 1e-9))
            throw accuracy_error("non-monotone norm trace");
    return fit_tail_rate(t_grid, norms);
}

double a_star(const Field& potential, FractionalOrder order) {
    validate(potential);
    const TorusGrid& g = *potential.grid;
    if (dense_feasible(g)) {
        DenseOperator op(g, potential, order);
        return std::max(op.lambda_min(), 0.0);
    }

    // Shifted inverse-power iteration; (A + sigma) x = b solved by CG with
    // the operator applied spectrally.
    const double sigma = 1e-3;
    auto apply_shifted = [&](const Field& x) {
        Field ax = fractional_laplacian_apply(x, order);
        for (std::size_t i = 0; i < ax.size(); ++i)
            ax[i] += (potential[i] + sigma) * x[i];
        return ax;
    };
    auto dot = [](const Field& a, const Field& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    auto cg_solve = [&](const Field& b) {
        Field x(g, 0.0), r = b, p = b;
        double rs = dot(r, r);
        const double target = rs * 1e-24;
        for (int it = 0; it < 10000 && rs > target; ++it) {
            const Field ap = apply_shifted(p);
            const double alpha = rs / dot(p, ap);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            const double rs_new = dot(r, r);
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = r[i] + (rs_new / rs) * p[i];
            rs = rs_new;
        }
        return x;
    };

    Field x = random_field(g, 7, 0.01, true);
    double norm = std::sqrt(dot(x, x));
    for (double& v : x.values) v /= norm;
    double rayleigh_prev = kInfinity;
    for (int it = 0; it < 500; ++it) {
        x = cg_solve(x);
        norm = std::sqrt(dot(x, x));
        for (double& v : x.values) v /= norm;
        Field ax = apply_shifted(x);
        const double rayleigh = dot(x, ax) - sigma;
        if (std::abs(rayleigh - rayleigh_prev) <= 1e-10 * std::max(1.0, std::abs(rayleigh)))
            return std::max(rayleigh, 0.0);
        rayleigh_prev = rayleigh;
    }
    throw convergence_error("inverse-power iteration did not reach the Rayleigh tolerance");
}

ChainVerdict decay_rate_chain(double omega2, double omega_inf, int dim, double mu) {
    ChainVerdict v;
    v.omega2 = omega2;
    v.omega_inf = omega_inf;
    v.tol = (omega2 < 1e-2) ? 1e-3 : 0.05 * omega2;
    v.upper_ok = omega2 >= omega_inf - v.tol;
    v.lower_ok = omega_inf >= omega2 / (1.0 + dim / (4.0 * mu)) - v.tol;
    v.equal_ok = (mu < 1.0) || std::abs(omega2 - omega_inf) <= v.tol;
    return v;
}

CertificateResult decay_certificate(const TruncatedPotential& VM, FractionalOrder order,
                                    double t, double r, double c,
                                    const KernelProfile& profile,
                                    const EvolutionConfig& cfg) {
    const double vsup = VM.sup();
    if (!(t > 0.0) || !(t < 1.0 / vsup))
        throw config_error("certificate requires 0 < t < 1/||V_M||_inf");
    if (!(c > 0.0) || !(r > 0.0))
        throw config_error("certificate requires certified c > 0 and r > 0");

    // g_mu(s) = c * inf_{|z|<=r} k_mu(s, z); the profile is radially
    // decreasing so the infimum sits at |z| = r.  value_at drops to zero
    // once the rescaled radius leaves the profile box, which only makes
    // the bound more conservative (use a wide profile grid for small s).
    auto g_mu = [&](double s) {
        if (s <= 0.0) return 0.0;
        return c * profile.value_at(s, r);
    };

    // adaptive Simpson on [0, t]
    std::function<double(double, double, double, double, double, double, int)> adapt =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            const double m = (a + b) / 2.0;
            const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
            const double flm = g_mu(lm), frm = g_mu(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 1e-12)
                return left + right;
            return adapt(a, m, fa, flm, fm, left, depth - 1) +
                   adapt(m, b, fm, frm, fb, right, depth - 1);
        };
    const double fa = g_mu(0.0), fb = g_mu(t), fm = g_mu(t / 2.0);
    const double whole = t / 6.0 * (fa + 4.0 * fm + fb);
    const double G = adapt(0.0, t, fa, fm, fb, whole, 30);

    CertificateResult res;
    res.t_used = t;
    res.r = r;
    res.c = c;
    res.G_mu = G;
    res.bound_value = 1.0 - (1.0 - t * vsup) * G;
    res.simulated_value = operator_norm_inf(VM.values, order, t, cfg);
    res.ok = res.simulated_value <= res.bound_value + 1e-6 && res.bound_value < 1.0;
    return res;
}

OmegaAstarResult omega_equals_astar(const Field& potential, FractionalOrder order,
                                    std::uint64_t seed) {
    const TorusGrid& g = *potential.grid;
    if (!dense_feasible(g))
        throw capability_error("omega_equals_astar needs a dense-feasible grid");
    DenseOperator op(g, potential, order);
    const auto& lam = op.eigenvalues();
    const double l1 = std::max(lam(0), 0.0);

    OmegaAstarResult res;
    res.a_star = l1;
    if (l1 < 1e-8) {
        res.omega2 = 0.0;
        res.rel_gap = 0.0;
        return res;
    }
    double gap = 0.0;
    for (Eigen::Index i = 1; i < lam.size(); ++i)
        if (lam(i) - lam(0) > 1e-12) {
            gap = lam(i) - lam(0);
            break;
        }
    if (gap <= 0.0) gap = l1;
    const double t_start = std::min(5.0 / gap, 300.0 / l1);
    const double t_end = t_start + 3.0 / l1;

    Field u0 = random_field(g, seed, 0.02, true);
    const double n2 = lp_norm(u0, 2.0);
    for (double& v : u0.values) v /= n2;

    std::vector<double> t_grid, norms;
    for (int i = 0; i <= 40; ++i) {
        const double t = t_start + (t_end - t_start) * i / 40.0;
        t_grid.push_back(t);
        norms.push_back(lp_norm(op.propagate(u0, t), 2.0));
    }
    res.omega2 = fit_tail_rate(t_grid, norms);
    res.rel_gap = std::abs(res.omega2 - res.a_star) / std::max(res.a_star, 1e-12);
    return res;
}

DecayReport assemble_report(const ReportInputs& in) {
    if (in.potential == nullptr)
        throw config_error("assemble_report needs a potential");
    DecayReport rep;
    const TorusGrid& g = *in.potential->grid;
    rep.mu = in.order.mu;
    rep.dim = g.dim();
    rep.length = g.length();
    rep.points = g.points_per_axis();
    rep.potential_family = family_name(in.potential->family);
    rep.omega_1 = in.omega_1;
    rep.omega_2 = in.omega_2;
    rep.omega_inf = in.omega_inf;
    rep.a_star = in.a_star;
    rep.decay_threshold = in.decay_threshold;
    rep.chain = in.chain;
    rep.certificate = in.certificate;
    rep.ball_criterion_table = in.ball_criterion_table;

    const bool chain_ok = !rep.chain.has_value() || rep.chain->ok();
    bool criterion_all_zero = !rep.ball_criterion_table.empty();
    for (const auto& [r, inf] : rep.ball_criterion_table)
        criterion_all_zero = criterion_all_zero && inf <= 1e-9;
    if (rep.a_star > rep.decay_threshold && chain_ok)
        rep.verdict = DecayVerdict::decay;
    else if (criterion_all_zero && rep.a_star < rep.decay_threshold)
        rep.verdict = DecayVerdict::no_decay;
    else
        rep.verdict = DecayVerdict::inconclusive;
    return rep;
}

nlohmann::ordered_json to_json(const DecayReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = rep.schema;
    j["mu"] = rep.mu;
    j["grid"] = {{"dim", rep.dim}, {"length", rep.length}, {"points", rep.points}};
    j["potential_family"] = rep.potential_family;
    j["omega_1"] = rep.omega_1;
    j["omega_2"] = rep.omega_2;
    j["omega_inf"] = rep.omega_inf;
    j["a_star"] = rep.a_star;
    j["decay_threshold"] = rep.decay_threshold;
    if (rep.chain) {
        j["chain"] = {{"omega2", rep.chain->omega2},
                      {"omega_inf", rep.chain->omega_inf},
                      {"tol", rep.chain->tol},
                      {"upper_ok", rep.chain->upper_ok},
                      {"lower_ok", rep.chain->lower_ok},
                      {"equal_ok", rep.chain->equal_ok}};
    }
    if (rep.certificate) {
        j["certificate"] = {{"t_used", rep.certificate->t_used},
                            {"r", rep.certificate->r},
                            {"c", rep.certificate->c},
                            {"G_mu", rep.certificate->G_mu},
                            {"bound_value", rep.certificate->bound_value},
                            {"simulated_value", rep.certificate->simulated_value},
                            {"ok", rep.certificate->ok}};
    }
    auto table = nlohmann::ordered_json::array();
    for (const auto& [r, inf] : rep.ball_criterion_table)
        table.push_back({{"r", r}, {"inf", inf}});
    j["ball_criterion_table"] = table;
    j["verdict"] = verdict_name(rep.verdict);
    return j;
}

} // namespace fracsemi
