#pragma once

#include <Eigen/Dense>
#include <vector>

#include "corrsim/dims.hpp"
#include "corrsim/errors.hpp"

namespace corrsim {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Kronecker product; left factor is the first subsystem.
// Throws DimensionCapError if the result exceeds the ambient cap.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(const std::vector<ComplexMatrix>& factors);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

// Trace out all factors not in `keep`; `keep` must be strictly increasing
// and in range. Kept factors retain their original order. Trace preserved.
ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            const std::vector<int>& keep);

// Reorder tensor factors: output factor i is input factor perm[i].
// perm must be a permutation of 0..dims.size()-1.
ComplexMatrix permute_systems(const ComplexMatrix& m, const DimList& dims,
                              const std::vector<int>& perm);
ComplexVector permute_systems(const ComplexVector& v, const DimList& dims,
                              const std::vector<int>& perm);

// Transpose only the factors in `which` (basis-wise partial transpose).
ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimList& dims,
                                const std::vector<int>& which);

struct Eigensystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns; orthonormal; canonical phase
};

// Requires max|m - m^dagger| <= 1e-10 (else ContractViolation); input is
// symmetrized as (m + m^dagger)/2 before decomposition. Eigenvalues sorted
// descending, ties keep solver order; each eigenvector's first component of
// modulus > 1e-8 is made real positive.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);

// Sum of singular values; eigenvalue route when Hermitian within 1e-10.
double trace_norm(const ComplexMatrix& m);

// True iff min-eig(x - lo) >= -tol and min-eig(hi - x) >= -tol.
bool operator_in_interval(const ComplexMatrix& x, const ComplexMatrix& lo,
                          const ComplexMatrix& hi, double tol);

// (f (x) 1_dim_b) m (f (x) 1_dim_b)^dagger without forming the Kronecker
// product; m is (f.rows*dim_b) square on factors (A, B).
ComplexMatrix conjugate_factor_a(const ComplexMatrix& m, const ComplexMatrix& f,
                                 int dim_b);
// (1_dim_a (x) f) m (1_dim_a (x) f)^dagger, blockwise.
ComplexMatrix conjugate_factor_b(const ComplexMatrix& m, int dim_a,
                                 const ComplexMatrix& f);

// max_ij |m(i,j)|; zero matrix gives 0.
double max_abs(const ComplexMatrix& m);

// True iff max|m - m^dagger| <= tol.
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

ComplexMatrix identity(int d);

}  // namespace corrsim
