#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "corrsim/states.hpp"

namespace corrsim {

// Projector onto the eps-typical subspace of rho^(x)n, in the deterministic
// eigenbasis of rho. Strict inequality |-log2 p_I - n S| < eps*n decides
// membership; indices within 1e-9 of the boundary set boundary_flag.
struct TypicalProjector {
  ComplexMatrix projector;
  int n = 0;
  double eps = 0;
  ComplexMatrix basis;           // single-copy eigenvectors (columns)
  RealVector single_eigenvalues; // descending
  std::vector<std::vector<int>> typical_indices;
  bool degenerate_flag = false;  // some |lambda_i - lambda_j| < 1e-10
  bool boundary_flag = false;
};

// Dense route; requires d^n within the ambient cap.
TypicalProjector typical_projector(const DensityMatrix& rho, int n, double eps);

struct TypicalityReport {
  double mass = 0;        // tr(rho^n Pi)
  double dim = 0;         // tr Pi (exact integer when small)
  double log2_dim = 0;    // -inf when dim == 0
  bool sandwich_ok = false;
  bool dim_upper_ok = false;   // dim <= 2^{n(S+eps)}
  bool dim_lower_checked = false;  // only when mass >= 1-eps
  bool dim_lower_ok = false;       // dim >= (1-eps) 2^{n(S-eps)}
  bool converged = false;          // mass >= 1-eps
  bool boundary_flag = false;
  bool degenerate_flag = false;
  double entropy = 0;     // S(rho), bits
  bool counting_path = false;
};

// Dense report; tp must have been built from (rho, n, eps).
TypicalityReport typicality_report(const TypicalProjector& tp,
                                   const DensityMatrix& rho, int n, double eps);

// Counting route over eigenvalue type classes; never builds d^n matrices,
// so n in the hundreds is fine. Depends only on the spectrum, which is
// exactly what the typical set is made of.
TypicalityReport typicality_report_counting(const DensityMatrix& rho, int n,
                                            double eps);

struct GentleResult {
  double delta;
  double lhs;    // || rho - sqrt(X) rho sqrt(X) ||_1
  double bound;  // sqrt(8 delta)
  bool ok;
};

// rho may be subnormalized (Hermitian, PSD, trace <= 1); x must satisfy
// 0 <= x <= 1 within 1e-9.
GentleResult gentle_measurement_check(const ComplexMatrix& rho,
                                      const ComplexMatrix& x);

enum class EnsembleKind { DiscreteWeyl, Haar, PhaseFamily };

EnsembleKind ensemble_kind_from_string(const std::string& s);
std::string to_string(EnsembleKind kind);

// Ensemble of unitaries of size `dimension`, optionally embedded on the
// range of support_projector (identity on the orthocomplement).
struct UnitaryEnsembleSpec {
  EnsembleKind kind = EnsembleKind::DiscreteWeyl;
  int dimension = 2;
  std::optional<ComplexMatrix> support_projector;
  std::uint64_t seed = 0;
};

// discrete_weyl: the full {X^a Z^b} set when count == D^2, else count
// uniform draws with replacement. haar: count independent Haar draws.
// phase_family: U_k = sum_j e^{2 pi i j k / D} |j><j| for k = 1..D
// (count must equal D).
std::vector<ComplexMatrix> generate_ensemble(const UnitaryEnsembleSpec& spec,
                                             int count);

// Cyclic shift X|j> = |j+1 mod D>, phase Z|j> = e^{2 pi i j / D}|j>.
ComplexMatrix weyl_shift(int d);
ComplexMatrix weyl_phase(int d);
ComplexMatrix weyl_unitary(int d, int a, int b);  // X^a Z^b

// Columns of the rank-D support of a projector (eigenvalue > 1/2), in the
// deterministic eigensystem order.
ComplexMatrix support_basis_of_projector(const ComplexMatrix& projector, int rank);

// T u T^dagger + (1 - T T^dagger) for an ambient isometry T.
ComplexMatrix embed_on_support(const ComplexMatrix& u, const ComplexMatrix& t);

// Operator-valued sampler for the concentration bench: draws are in [0, 1],
// mean is exact, and mean >= mu on its support.
struct OperatorSampler {
  std::string name;
  int dim = 1;
  ComplexMatrix mean;
  double mu = 0;
  std::function<ComplexMatrix(RngStream&)> draw;
};

struct ChernoffResult {
  double violation_rate;
  double bound;      // 2 d exp(-N mu eps^2 / 2)
  bool ok;           // rate <= bound + 3 binomial standard errors
  int trials;
  int violations;
};

// Per-trial stream is (seed, trial index); the first draw of each trial is
// verified to lie in [0, 1].
ChernoffResult chernoff_trial(const OperatorSampler& sampler, int n_samples,
                              double eps, int trials, std::uint64_t seed);

OperatorSampler bernoulli_sampler(double mu);

// PSD square root via the Hermitian eigensystem (negatives clamped at tol).
ComplexMatrix sqrt_psd(const ComplexMatrix& m, double tol = 1e-9);

}  // namespace corrsim
