#ifndef FRACSEMI_DECAY_HPP
#define FRACSEMI_DECAY_HPP

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "fracsemi/engine.hpp"
#include "fracsemi/kernels.hpp"
#include "fracsemi/potential.hpp"

namespace fracsemi {

enum class DecayVerdict { decay, no_decay, inconclusive };

std::string verdict_name(DecayVerdict v);

struct ChainVerdict {
    double omega2 = 0.0;
    double omega_inf = 0.0;
    double tol = 0.0;
    bool upper_ok = false;    // omega2 >= omega_inf - tol
    bool lower_ok = false;    // omega_inf >= omega2 / (1 + N/(4 mu)) - tol
    bool equal_ok = true;     // mu = 1 only: |omega2 - omega_inf| <= tol
    bool ok() const { return upper_ok && lower_ok && equal_ok; }
};

struct CertificateResult {
    double t_used = 0.0;
    double r = 0.0;
    double c = 0.0;
    double G_mu = 0.0;         // integral of the certified g_mu over [0, t]
    double bound_value = 1.0;  // 1 - (1 - t ||V_M||) G_mu(t)
    double simulated_value = 1.0;
    bool ok = false;
};

struct DecayReport {
    int schema = 1;
    double mu = 0.0;
    int dim = 0;
    double length = 0.0;
    int points = 0;
    std::string potential_family;
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    double omega_inf = 0.0;
    double a_star = 0.0;
    double decay_threshold = 1e-4;
    std::optional<ChainVerdict> chain;
    std::optional<CertificateResult> certificate;
    std::vector<std::pair<double, double>> ball_criterion_table;  // (r, inf)
    DecayVerdict verdict = DecayVerdict::inconclusive;
};

/// Route selection for omega estimates on dense-feasible grids.
enum class OmegaRoute { auto_select, eigensolve, trace_fit };

/// Fitted exponential type for p in {1, 2, inf}. p = 1 reuses the
/// sup-norm trace (self-adjoint duality on the grid); p = 2 defaults to
/// the eigensolve when the grid is dense-feasible.
double estimate_omega(const Field& potential, FractionalOrder order, double p,
                      const std::vector<double>& t_grid, const EvolutionConfig& cfg,
                      OmegaRoute route = OmegaRoute::auto_select,
                      std::uint64_t seed = 20240901);

/// Smallest eigenvalue of A = A0 + diag(V); dense eigensolve under the
/// oracle cap, shifted inverse-power iteration (CG solves) above it.
double a_star(const Field& potential, FractionalOrder order);

ChainVerdict decay_rate_chain(double omega2, double omega_inf, int dim, double mu);

/// Explicit decay certificate: bound = 1 - (1 - t||V_M||) G_mu(t) with
/// g_mu(s) = c * inf_{|z| <= r} k_mu(s, z) taken from the certified discrete
/// kernel profile (zero beyond the half box, hence conservative).
CertificateResult decay_certificate(const TruncatedPotential& VM, FractionalOrder order,
                                    double t, double r, double c,
                                    const KernelProfile& profile,
                                    const EvolutionConfig& cfg);

struct OmegaAstarResult {
    double omega2 = 0.0;
    double a_star = 0.0;
    double rel_gap = 0.0;
};

/// omega_2 from the norm-trace fit vs a_* from the eigensolve.
OmegaAstarResult omega_equals_astar(const Field& potential, FractionalOrder order,
                                    std::uint64_t seed = 20240901);

struct ReportInputs {
    const Potential* potential = nullptr;
    FractionalOrder order{1.0};
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    double omega_inf = 0.0;
    double a_star = 0.0;
    std::optional<ChainVerdict> chain;
    std::optional<CertificateResult> certificate;
    std::vector<std::pair<double, double>> ball_criterion_table;
    double decay_threshold = 1e-4;
};

DecayReport assemble_report(const ReportInputs& in);

nlohmann::ordered_json to_json(const DecayReport& report);

} // namespace fracsemi

#endif
