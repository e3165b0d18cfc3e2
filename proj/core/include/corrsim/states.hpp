#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrsim/linalg.hpp"
#include "corrsim/rng.hpp"

namespace corrsim {

// Hermitian, positive semidefinite, unit trace, over an explicit factoring.
// Eigenvalues in [-1e-10, 0) are clamped to 0 and the trace renormalized;
// anything more negative is rejected. The spectrum found during validation
// is kept (descending) so entropy calls do not re-diagonalize.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, DimList dims);

  const ComplexMatrix& matrix() const { return m_; }
  const DimList& dims() const { return dims_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const RealVector& eigenvalues() const { return eigs_; }

  // Same operator, refactored (product of new dims must match).
  DensityMatrix with_dims(DimList new_dims) const;

 private:
  ComplexMatrix m_;
  DimList dims_;
  RealVector eigs_;
};

class PureState {
 public:
  PureState(ComplexVector v, DimList dims);

  const ComplexVector& vector() const { return v_; }
  const DimList& dims() const { return dims_; }
  int dim() const { return static_cast<int>(v_.size()); }

  DensityMatrix to_density() const;
  PureState with_dims(DimList new_dims) const;

 private:
  ComplexVector v_;
  DimList dims_;
};

// psi = sum_i sqrt(coefficients[i]) |left_i> |right_i>, coefficients
// descending and summing to 1; bases are orthonormal columns.
struct SchmidtForm {
  RealVector coefficients;
  ComplexMatrix left_basis;
  ComplexMatrix right_basis;

  int rank(double tol = 1e-10) const;
};

// Shannon entropy in bits; entries below 1e-12 contribute 0.
double shannon_entropy(const RealVector& p);
double binary_entropy(double p);

double von_neumann_entropy(const DensityMatrix& rho);

DensityMatrix reduced_state(const DensityMatrix& rho, const std::vector<int>& keep);

// I(A:B) over the bipartition (side_a, complement); clamped to >= 0,
// values below -1e-9 raise ContractViolation.
double mutual_information(const DensityMatrix& rho, const std::vector<int>& side_a);

// I(A:C|B) = S(AB) + S(BC) - S(ABC) - S(B); not clamped. b may be empty,
// which reduces to plain mutual information between a and c.
double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& c);

SchmidtForm schmidt(const PureState& psi, const std::vector<int>& side_a);

double entanglement_entropy(const PureState& psi, const std::vector<int>& side_a);

// Pure state on Z (x) P with dim(Z) = dim(P), built from the eigensystem's
// deterministic order; tr_Z reproduces the input.
PureState purify(const DensityMatrix& rho);

// Two-branch eta in bits: -x log2 x below 1/e, (1/e) log2 e at and above.
double eta(double x);
double fannes_bound(double eps, double log_dim);

PureState random_haar_pure(const DimList& dims, RngStream& rng);
// ancilla_dim 0 means "same as system dimension".
DensityMatrix random_induced_mixed(const DimList& dims, int ancilla_dim, RngStream& rng);
DensityMatrix random_diagonal(const DimList& dims, RngStream& rng);

// kind: haar_pure | induced_mixed | diagonal (defaults for any knobs).
DensityMatrix random_state(const std::string& kind, const DimList& dims,
                           std::uint64_t seed);

// Named fixtures: "bell", "bell_dephased", "ghz3", "werner:p",
// "haar:dA,dB:seed", "diag:p1,p2,...". Unknown ids raise UnknownStateError.
DensityMatrix make_state(const std::string& id);

// Pure fixtures only ("bell", "ghz3", "haar:...").
PureState make_pure_state(const std::string& id);

PureState bell_pure();
DensityMatrix bell_density();
DensityMatrix bell_dephased();
PureState ghz3_pure();
DensityMatrix werner(double p);

}  // namespace corrsim
