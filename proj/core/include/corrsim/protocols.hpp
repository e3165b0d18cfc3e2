#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "corrsim/channels.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/states.hpp"
#include "corrsim/typicality.hpp"

namespace corrsim {

// Entropy bookkeeping for a bipartite state at one point in a pipeline.
struct CorrelationSnapshot {
  double s_total = 0;
  double s_a = 0;
  double s_b = 0;
  double mutual_information = 0;
};

// rho must have exactly two factors.
CorrelationSnapshot snapshot_of(const DensityMatrix& rho);

// One randomizing step of an erasure pipeline: its cost triple, how close the
// step output is to the product of its own marginals, and the PPT status of
// the output.
struct ErasureStep {
  std::string label;
  Locality locality = Locality::GeneralUnitary;
  double log_n = 0;
  double shannon = 0;
  double entropy_exchange = 0;
  double achieved_eps = 0;
  bool is_ppt = false;
  double ppt_min_eig = 0;
  bool certified = false;
  CorrelationSnapshot before;
  CorrelationSnapshot after;
};

// Totals are the plain sums of the step columns.
struct ErasureReport {
  std::string protocol;
  CorrelationSnapshot initial;
  std::vector<ErasureStep> steps;
  double total_log_n;
  double total_shannon;
  double total_entropy_exchange;
  DensityMatrix final_state;
};

// Applies the steps in order to `initial` (each channel must match the current
// two-factor cut) and assembles the report; totals are sums by construction.
ErasureReport run_erasure_pipeline(
    const DensityMatrix& initial,
    const std::vector<std::pair<std::string, MixedUnitaryChannel>>& steps,
    const std::string& protocol_id);

// Two-step randomization of a Bell pair: a Z-twirl kills the entanglement
// (output is PPT-certified, I drops 2 -> 1), an X-twirl kills the remaining
// classical correlations (output 1/4, I drops 1 -> 0); each step costs one
// bit, totals cost 2.0. x_first runs the same two twirls in swapped order and
// lands on the same totals and final state.
ErasureReport bell_erasure_demo(bool x_first = false);

// The one tolerance knob split across its three internal roles: the width of
// the typicality windows, the floor (relative to the B-typical dimension) kept
// when cutting the B marginal, and the width of the sampled-average interval
// diagnostic. from_single ties all three to one value.
struct Prop2Knobs {
  double eps_typical;
  double eps_cut;
  double eps_interval;
  static Prop2Knobs from_single(double eps) { return {eps, eps, eps}; }
};

struct Prop2Result {
  MixedUnitaryChannel channel;  // uniform A-side ensemble on [dA^n, dB^n]
  double achieved_eps;          // trace distance from the output marginal product
  double rate;                  // log2(N) / n
  int n;
  int n_unitaries;
  double i_single;              // I(A:B) of one copy
  NoiseCost cost;
  DecorrelationResult decorrelation;
  long long rank_joint;      // typical dimension of the joint state
  long long rank_a;          // typical dimension of the A marginal
  long long rank_b;          // typical dimension of the B marginal
  long long rank_b_cut;      // dimension kept by the B-marginal floor cut
  double rho_tilde_trace;    // trace surviving both cut-downs
  bool interval_ok;          // sampled average within (1 +- eps_interval) of its mean
  Prop2Knobs knobs;
};

// Block-randomization construction on n copies of a bipartite state: restrict
// rho^(x)n to its joint and local typical subspaces, floor the B marginal,
// then average N shift/phase unitaries supported on the A-typical subspace.
// Returns the uniform A-side channel together with how well it decorrelates
// rho^(x)n and the rate log2(N)/n. Throws ProtocolError when a typicality
// window at this (n, eps) is empty.
Prop2Result decorrelate_prop2(const DensityMatrix& rho, int n, double eps,
                              int n_unitaries, std::uint64_t seed);
Prop2Result decorrelate_prop2(const DensityMatrix& rho, int n,
                              const Prop2Knobs& knobs, int n_unitaries,
                              std::uint64_t seed);

// Operator-valued sampler drawing X = 2^{n(S-eps)} (U (x) 1) rt (U (x) 1)^dg
// with U uniform over the shift/phase set on the A-typical support and rt the
// doubly cut-down rho^(x)n from the same construction; mean and mu are exact.
// Feeds chernoff_trial.
OperatorSampler prop2_sampler(const DensityMatrix& rho, int n, double eps);

struct DisentangleReport {
  MixedUnitaryChannel channel;  // uniform phase family on the A side
  DensityMatrix output;         // sum_j f_j |a_j b_j><a_j b_j| on [dA, dB]
  NoiseCost cost;               // (log2 D, log2 D, S_e)
  bool is_ppt;
  double ppt_min_eig;
  bool certified;
  int schmidt_rank;             // D
  RealVector schmidt_coefficients;
  double entanglement;          // entropy of the coefficient vector
  double dephasing_residual;    // max |output - exact dephased form|
};

// Phase randomization in the Schmidt basis of a pure state across `side_a`.
// The channel and output live on the state reordered to (side_a, complement)
// with collapsed dims [dA, dB]. The output must match the exact dephased form
// within 1e-10 or a ContractViolation is thrown.
DisentangleReport disentangle_pure(const PureState& psi,
                                   const std::vector<int>& side_a);

struct ClassicalizationReport {
  DensityMatrix sigma;   // Schmidt-dephased state on [dA, dB]
  double i_classical;    // I(A:B) of sigma
  double entanglement;   // entanglement entropy of the input
};

// Dephasing a pure state in its Schmidt basis converts all entanglement into
// classical correlation: asserts i_classical == entanglement within 1e-9.
ClassicalizationReport classical_correlation_dephasing(
    const PureState& psi, const std::vector<int>& side_a);

struct TwoStepReport {
  double two_step;      // S(sigma_A) + S(sigma_B) - S(rho)
  double one_shot;      // I(A:B) of rho
  double gap;           // two_step - one_shot
  bool locally_unital;  // channel locality induces unital marginal maps
  bool gap_ok;          // gap >= -1e-9 (asserted only when locally_unital)
  bool is_ppt;
  double ppt_min_eig;
  bool certified;
};

// Costs of disentangle-then-erase versus direct erasure. The channel output
// must be PPT in a certifying dimension (else PreconditionError); when the
// channel is locally unital the gap is asserted nonnegative within 1e-9.
TwoStepReport two_step_cost_comparison(const DensityMatrix& rho,
                                       const MixedUnitaryChannel& channel);

struct MultipartiteReport {
  double c_er;                     // sum_i S(A_i) - S(A_1..A_p)
  std::vector<double> sequential;  // I(A_k : A_{k+1}..A_p) on the tail marginal
  double telescoping_residual;     // |sum(sequential) - c_er|
};

// Total erasure cost of a p-party state and its party-by-party decomposition;
// the telescoping identity is asserted within 1e-9.
MultipartiteReport multipartite_erasure(const DensityMatrix& rho);

struct SsaScanResult {
  double min_value;            // min over trials of I(A:C|B)
  int violations;              // values below -1e-9 (expected 0)
  int count;
  std::vector<double> values;  // per-trial, in trial order
};

// Conditional mutual information of `count` induced-random states on a
// three-factor dims list, one derived stream per trial.
SsaScanResult ssa_scan(int count, const DimList& dims, std::uint64_t seed);

// Local channel families used by the conjecture scan. SchmidtDephasing
// dephases in the state's own Schmidt bases (the saturation case);
// RandomLocal dephases both sides in independently Haar-rotated product
// bases; TraceReplace discards both sides for maximally mixed states.
enum class DephasingFamily { SchmidtDephasing, RandomLocal, TraceReplace };

std::string to_string(DephasingFamily family);
DephasingFamily dephasing_family_from_string(const std::string& s);

struct ConjectureWitness {
  int trial;
  double excess;
  double i_sigma;
  double entanglement;
  ComplexVector psi;  // the offending input state vector
};

struct ConjectureScanResult {
  double max_excess;  // max over trials of I(A:B)_sigma - E(psi)
  std::vector<ConjectureWitness> witnesses;  // trials with excess > 1e-7
  int count;
  DephasingFamily family;
};

// Searches random pure states for violations of I(A:B)_sigma <= E(psi) under
// a family of local product channels with separable-certified outputs (dims
// must be bipartite with total dimension <= 6). Witnesses are recorded, never
// asserted absent.
ConjectureScanResult conjecture_scan(int count, const DimList& dims,
                                     std::uint64_t seed,
                                     DephasingFamily family);

}  // namespace corrsim
