#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrsim/states.hpp"

namespace corrsim {

// Locality of a mixed-unitary ensemble over a declared bipartition:
// ALur/BLur act on one side, Lur is an independent product of both,
// Colur shares one index between the sides, GeneralUnitary is unrestricted.
enum class Locality { ALur, BLur, Lur, Colur, GeneralUnitary };

std::string to_string(Locality loc);
Locality locality_from_string(const std::string& s);

// One ensemble member. Factored members leave u_full empty; an empty
// factor stands for the identity on that side. GeneralUnitary members
// carry u_full and leave the factors empty.
struct ChannelElement {
  double p = 0;
  ComplexMatrix u_a;
  ComplexMatrix u_b;
  ComplexMatrix u_full;
};

class MixedUnitaryChannel {
 public:
  // Verifies probabilities, unitarity, and that the declared locality
  // matches the element structure (Lur additionally requires the ensemble
  // to factor as an outer product of an A-stage and a B-stage).
  MixedUnitaryChannel(Locality locality, std::vector<ChannelElement> elements,
                      int dim_a, int dim_b, int n_label = 1);

  static MixedUnitaryChannel colur(const std::vector<double>& p,
                                   const std::vector<ComplexMatrix>& u_a,
                                   const std::vector<ComplexMatrix>& u_b,
                                   int n_label = 1);
  static MixedUnitaryChannel a_lur(const std::vector<double>& p,
                                   const std::vector<ComplexMatrix>& u_a, int dim_b,
                                   int n_label = 1);
  static MixedUnitaryChannel b_lur(int dim_a, const std::vector<double>& p,
                                   const std::vector<ComplexMatrix>& u_b,
                                   int n_label = 1);
  static MixedUnitaryChannel lur(const std::vector<double>& p_a,
                                 const std::vector<ComplexMatrix>& u_a,
                                 const std::vector<double>& p_b,
                                 const std::vector<ComplexMatrix>& u_b,
                                 int n_label = 1);
  static MixedUnitaryChannel general(const std::vector<double>& p,
                                     const std::vector<ComplexMatrix>& u, int dim_a,
                                     int dim_b, int n_label = 1);
  static MixedUnitaryChannel identity_channel(int dim_a, int dim_b);

  DensityMatrix apply(const DensityMatrix& rho) const;

  Locality locality() const { return locality_; }
  int size() const { return static_cast<int>(elements_.size()); }
  double log_n() const;
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  long long dim_total() const { return static_cast<long long>(dim_a_) * dim_b_; }
  int n_label() const { return n_label_; }
  const std::vector<ChannelElement>& elements() const { return elements_; }
  RealVector probabilities() const;
  ComplexMatrix full_unitary(int i) const;

 private:
  Locality locality_;
  std::vector<ChannelElement> elements_;
  int dim_a_;
  int dim_b_;
  int n_label_;
};

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus);
  static KrausChannel from_mixed_unitary(const MixedUnitaryChannel& channel);

  DensityMatrix apply(const DensityMatrix& rho) const;
  bool unital() const { return unital_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(kraus_.size()); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

 private:
  std::vector<ComplexMatrix> kraus_;
  int dim_;
  bool unital_;
};

// The (log2 N, H(p), S_e) triple; construction asserts the chain
// log_n >= shannon >= entropy_exchange within 1e-9 / 2e-9.
struct NoiseCost {
  NoiseCost(double log_n_, double shannon_, double entropy_exchange_);
  double log_n;
  double shannon;
  double entropy_exchange;
};

// Environment entropy via the N x N ensemble Gram matrix
// W_ij = sqrt(p_i p_j) tr(U_j^dagger U_i rho).
double entropy_exchange(const MixedUnitaryChannel& channel, const DensityMatrix& rho);
double entropy_exchange(const KrausChannel& channel, const DensityMatrix& rho);

// Reference route: S((id_Z (x) T)|psi><psi|) on an explicit purification.
double entropy_exchange_via_purification(const KrausChannel& channel,
                                         const DensityMatrix& rho);
double entropy_exchange_via_purification(const MixedUnitaryChannel& channel,
                                         const DensityMatrix& rho);

NoiseCost noise_costs(const MixedUnitaryChannel& channel, const DensityMatrix& rho);

struct DecorrelationResult {
  double achieved_eps;
  DensityMatrix product_used;
  DensityMatrix output;
};

// Trace-norm distance of the channel output from a product reference;
// defaults to the output's own marginals over the channel bipartition.
DecorrelationResult epsilon_decorrelates(
    const MixedUnitaryChannel& channel, const DensityMatrix& rho,
    const std::optional<DensityMatrix>& reference = std::nullopt);

struct DisentanglementResult {
  bool is_ppt;
  double ppt_min_eig;
  bool certified;  // true when dim_a*dim_b <= 6, where PPT == separable
  DensityMatrix output;
};

DisentanglementResult epsilon_disentangles(const MixedUnitaryChannel& channel,
                                           const DensityMatrix& rho);

// Direct PPT test of a bipartite state (transpose over the second factor).
DisentanglementResult ppt_check(const DensityMatrix& rho);

using CpMap = std::vector<ComplexMatrix>;     // Kraus operators on the A side
using Instrument = std::vector<CpMap>;        // maps summing to trace preserving

struct LopcCheckResult {
  double lhs;                         // I(A:B) of the input
  double rhs;                         // sum_i p_i I(A:B) of outcome states
  double flagged;                     // I(AA':B) with a classical flag A'
  std::vector<double> outcome_probs;
};

// rho must be bipartite (two factors); the instrument acts on the first.
LopcCheckResult local_instrument_check(const DensityMatrix& rho,
                                       const Instrument& instrument);

struct ErasureBounds {
  double lower_hint;  // entropic gap per copy
  double upper_hint;
  double s_in;        // S(rho) per copy
  double s_out;       // S of the channel output
  double s_e;
};

// channel must act on rho^(x)k regrouped as (A^k, B^k) and its output must
// be PPT in a certifying dimension; asserts S_e >= S(out) - k*S(rho) - 1e-8.
ErasureBounds entanglement_erasure_bounds(const MixedUnitaryChannel& channel,
                                          const DensityMatrix& rho, int k);

// rho^(x)k for bipartite rho, regrouped to (A_1..A_k, B_1..B_k) with dims
// [dA^k, dB^k].
DensityMatrix regrouped_tensor_power(const DensityMatrix& rho, int k);

}  // namespace corrsim
