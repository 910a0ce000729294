#ifndef FRACSEMI_ENGINE_HPP
#define FRACSEMI_ENGINE_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <vector>

#include "fracsemi/potential.hpp"
#include "fracsemi/torus_grid.hpp"

namespace fracsemi {

enum class EngineKind { picard, splitting, dense_oracle };

std::string engine_name(EngineKind k);

struct EvolutionConfig {
    EngineKind engine = EngineKind::splitting;
    double dt = 0.01;            // splitting step
    double window = 0.0;         // picard window cap; 0 = auto 0.5/||V||_inf
    double picard_tol = 1e-10;   // sup-norm fixed-point tolerance
    int quad_nodes = 65;         // Duhamel quadrature nodes per window
    int max_picard_iters = 200;
};

struct TracePoint {
    double t;
    double l1, l2, linf;
};

struct EvolutionResult {
    Field final;
    std::vector<TracePoint> trace;
    int picard_iterations = 0;  // total across windows
    int windows = 0;
    int steps = 0;              // splitting steps
    double boundary_mass = 0.0;
};

/// Dense symmetric discretization A = A0 + diag(V) with its
/// eigendecomposition; the small-grid oracle behind the spectral engines.
/// Capped at 4096 grid points.
class DenseOperator {
  public:
    DenseOperator(const TorusGrid& grid, const Field& potential, FractionalOrder order);

    double lambda_min() const { return eig_.eigenvalues()(0); }
    const Eigen::VectorXd& eigenvalues() const { return eig_.eigenvalues(); }
    const Eigen::MatrixXd& matrix() const { return A_; }

    /// e^{-tA} u0 by symmetric eigendecomposition.
    Field propagate(const Field& u0, double t) const;
    /// Full propagator matrix e^{-tA} (h^N-free entries).
    Eigen::MatrixXd propagator(double t) const;

    static constexpr std::size_t kPointCap = 4096;

  private:
    const TorusGrid* grid_;
    Eigen::MatrixXd A_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_;
};

/// u(t_final) = S_{mu,V}(t_final) u0 by the configured engine.
EvolutionResult evolve(const Field& u0, const Field& potential, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg);
EvolutionResult evolve(const Field& u0, const Potential& V, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg);
EvolutionResult evolve(const Field& u0, const TruncatedPotential& V, FractionalOrder order,
                       double t_final, const EvolutionConfig& cfg);

/// ||S_{mu,V}(t)||_{inf->inf} = sup S_{mu,V}(t) 1 (order preservation).
double operator_norm_inf(const Field& potential, FractionalOrder order, double t,
                         const EvolutionConfig& cfg);

/// e^{-t lambda_min(A)}; dense-oracle grids only.
double operator_norm_2(const Field& potential, FractionalOrder order, double t);

struct ComparisonReport {
    double max_negative = 0.0;       // worst of -u_{V1} below 0
    double max_order_violation = 0.0; // worst of u_{V1} - u_{V2}
    double max_free_violation = 0.0;  // worst of u_{V2} - S_mu(t) u0
    bool ok = false;
};

/// Verifies 0 <= u_{V1}(t) <= u_{V2}(t) <= S_mu(t) u0 for V1 >= V2 >= 0.
ComparisonReport comparison_check(const Field& u0, const Field& V1, const Field& V2,
                                  FractionalOrder order, double t,
                                  const EvolutionConfig& cfg, double tol);

struct TruncationDelta {
    double M;
    double d1, d2, dinf;  // ||u_{V_M}(t) - u_V(t)||_p
};

std::vector<TruncationDelta>
truncation_convergence(const Field& u0, const Potential& V, FractionalOrder order,
                       double t, const std::vector<double>& M_ladder,
                       const EvolutionConfig& cfg);

/// CSV export of a norm trace, columns: t,l1,l2,linf
void export_csv(const EvolutionResult& result, std::ostream& out);

} // namespace fracsemi

#endif
