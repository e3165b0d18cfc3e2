#include "corrsim/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "corrsim/errors.hpp"
#include "corrsim/rng.hpp"

namespace corrsim {

namespace {

long long ipow_ll(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// (A1 B1 ... An Bn) -> (A1..An B1..Bn) on a 2n-factor operator.
ComplexMatrix regroup_copies(const ComplexMatrix& m, int dim_a, int dim_b,
                             int n) {
  std::vector<int> factors;
  std::vector<int> perm;
  factors.reserve(2 * n);
  perm.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    factors.push_back(dim_a);
    factors.push_back(dim_b);
  }
  for (int i = 0; i < n; ++i) perm.push_back(2 * i);
  for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);
  return permute_systems(m, DimList(factors), perm);
}

// Runs fn(0..count-1), possibly across threads; each call owns slot t only.
void parallel_for_trials(int count, const std::function<void(int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
  if (count < 256 || workers <= 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= count || failed.load()) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Everything decorrelate_prop2 and prop2_sampler share: the doubly cut-down
// block state and the A-typical support it is randomized over.
struct Prop2Internals {
  DensityMatrix rho_n;     // rho^(x)n on [dA^n, dB^n]
  ComplexMatrix rho_tilde; // after joint/local typicality cuts and the B floor
  ComplexMatrix pi_a;      // A-typical projector on A^n
  ComplexMatrix basis_a;   // its support basis, dA^n x rank_a
  long long rank_joint;
  long long rank_a;
  long long rank_b;
  long long rank_b_cut;
  int dim_an;
  int dim_bn;
  double scale;            // 2^{n (S(rho) - eps_typical)}
  double i_single;
  double tilde_trace;
};

Prop2Internals build_prop2_internals(const DensityMatrix& rho, int n,
                                     const Prop2Knobs& knobs) {
  if (rho.dims().size() != 2)
    throw PreconditionError(
        "decorrelate_prop2: state must have exactly two factors");
  if (n < 1) throw PreconditionError("decorrelate_prop2: n must be >= 1");
  if (knobs.eps_typical <= 0 || knobs.eps_cut <= 0 || knobs.eps_interval <= 0)
    throw PreconditionError("decorrelate_prop2: eps knobs must be positive");

  const int da = rho.dims().factor(0);
  const int db = rho.dims().factor(1);
  const DensityMatrix rho_a = reduced_state(rho, {0});
  const DensityMatrix rho_b = reduced_state(rho, {1});

  const TypicalProjector tp_joint = typical_projector(rho, n, knobs.eps_typical);
  const TypicalProjector tp_a = typical_projector(rho_a, n, knobs.eps_typical);
  const TypicalProjector tp_b = typical_projector(rho_b, n, knobs.eps_typical);
  auto require_nonempty = [n, &knobs](const TypicalProjector& tp,
                                      const char* which, double entropy) {
    if (tp.typical_indices.empty()) {
      std::ostringstream os;
      os << "decorrelate_prop2: the typicality window for " << which
         << " is empty at n = " << n << ", eps = " << knobs.eps_typical
         << " (entropy " << entropy << " bits): widen eps or increase n";
      throw ProtocolError(os.str());
    }
  };
  require_nonempty(tp_joint, "the joint state", von_neumann_entropy(rho));
  require_nonempty(tp_a, "the A marginal", von_neumann_entropy(rho_a));
  require_nonempty(tp_b, "the B marginal", von_neumann_entropy(rho_b));

  Prop2Internals out{regrouped_tensor_power(rho, n),
                     ComplexMatrix(),
                     ComplexMatrix(),
                     ComplexMatrix(),
                     static_cast<long long>(tp_joint.typical_indices.size()),
                     static_cast<long long>(tp_a.typical_indices.size()),
                     static_cast<long long>(tp_b.typical_indices.size()),
                     0,
                     static_cast<int>(ipow_ll(da, n)),
                     static_cast<int>(ipow_ll(db, n)),
                     0.0,
                     mutual_information(rho, {0}),
                     0.0};

  const ComplexMatrix pi_joint = regroup_copies(tp_joint.projector, da, db, n);
  const ComplexMatrix local_cut = tensor(tp_a.projector, tp_b.projector);
  ComplexMatrix rho_hat =
      local_cut * (pi_joint * out.rho_n.matrix() * pi_joint) * local_cut;
  rho_hat = (0.5 * (rho_hat + rho_hat.adjoint())).eval();

  const DimList block_dims({out.dim_an, out.dim_bn});
  const ComplexMatrix marginal_b = partial_trace(rho_hat, block_dims, {1});
  const double floor_value =
      knobs.eps_cut / static_cast<double>(out.rank_b);
  const Eigensystem es_b = hermitian_eigensystem(marginal_b);
  std::vector<int> kept;
  for (int i = 0; i < es_b.values.size(); ++i)
    if (es_b.values(i) >= floor_value) kept.push_back(i);
  if (kept.empty()) {
    std::ostringstream os;
    os << "decorrelate_prop2: the B-marginal floor cut at " << floor_value
       << " removed the whole support at n = " << n
       << "; widen eps or increase n";
    throw ProtocolError(os.str());
  }
  ComplexMatrix vb(out.dim_bn, static_cast<int>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    vb.col(static_cast<int>(i)) = es_b.vectors.col(kept[i]);
  const ComplexMatrix pi_b_cut = vb * vb.adjoint();

  ComplexMatrix rho_tilde = conjugate_factor_b(rho_hat, out.dim_an, pi_b_cut);
  rho_tilde = (0.5 * (rho_tilde + rho_tilde.adjoint())).eval();

  out.rho_tilde = std::move(rho_tilde);
  out.pi_a = tp_a.projector;
  out.basis_a =
      support_basis_of_projector(tp_a.projector, static_cast<int>(out.rank_a));
  out.rank_b_cut = static_cast<long long>(kept.size());
  out.scale = std::exp2(n * (von_neumann_entropy(rho) - knobs.eps_typical));
  out.tilde_trace = out.rho_tilde.trace().real();
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m = identity(2);
  m(1, 1) = -1.0;
  return m;
}

}  // namespace

CorrelationSnapshot snapshot_of(const DensityMatrix& rho) {
  if (rho.dims().size() != 2)
    throw PreconditionError("snapshot_of: state must have exactly two factors");
  CorrelationSnapshot s;
  s.s_total = von_neumann_entropy(rho);
  s.s_a = von_neumann_entropy(reduced_state(rho, {0}));
  s.s_b = von_neumann_entropy(reduced_state(rho, {1}));
  s.mutual_information = mutual_information(rho, {0});
  return s;
}

ErasureReport run_erasure_pipeline(
    const DensityMatrix& initial,
    const std::vector<std::pair<std::string, MixedUnitaryChannel>>& steps,
    const std::string& protocol_id) {
  const CorrelationSnapshot first = snapshot_of(initial);
  DensityMatrix state = initial;
  std::vector<ErasureStep> done;
  done.reserve(steps.size());
  double total_log_n = 0;
  double total_shannon = 0;
  double total_s_e = 0;

  for (const auto& [label, channel] : steps) {
    if (channel.dim_a() != state.dims().factor(0) ||
        channel.dim_b() != state.dims().factor(1))
      throw PreconditionError(
          "run_erasure_pipeline: channel dims do not match the state cut");
    ErasureStep step;
    step.label = label;
    step.locality = channel.locality();
    step.before = snapshot_of(state);

    const NoiseCost cost = noise_costs(channel, state);
    const DecorrelationResult dec = epsilon_decorrelates(channel, state);
    const DisentanglementResult sep = ppt_check(dec.output);

    step.log_n = cost.log_n;
    step.shannon = cost.shannon;
    step.entropy_exchange = cost.entropy_exchange;
    step.achieved_eps = dec.achieved_eps;
    step.is_ppt = sep.is_ppt;
    step.ppt_min_eig = sep.ppt_min_eig;
    step.certified = sep.certified;

    state = dec.output;
    step.after = snapshot_of(state);
    total_log_n += cost.log_n;
    total_shannon += cost.shannon;
    total_s_e += cost.entropy_exchange;
    done.push_back(std::move(step));
  }

  return ErasureReport{protocol_id, first,          std::move(done),
                       total_log_n, total_shannon,  total_s_e,
                       std::move(state)};
}

ErasureReport bell_erasure_demo(bool x_first) {
  const ComplexMatrix i2 = identity(2);
  const auto z_twirl =
      MixedUnitaryChannel::a_lur({0.5, 0.5}, {i2, pauli_z()}, 2);
  const auto x_twirl =
      MixedUnitaryChannel::a_lur({0.5, 0.5}, {i2, pauli_x()}, 2);
  std::vector<std::pair<std::string, MixedUnitaryChannel>> steps;
  if (x_first) {
    steps.emplace_back("x-twirl", x_twirl);
    steps.emplace_back("z-twirl", z_twirl);
  } else {
    steps.emplace_back("z-twirl", z_twirl);
    steps.emplace_back("x-twirl", x_twirl);
  }
  return run_erasure_pipeline(bell_density(), steps, "bell-erasure");
}

Prop2Result decorrelate_prop2(const DensityMatrix& rho, int n, double eps,
                              int n_unitaries, std::uint64_t seed) {
  return decorrelate_prop2(rho, n, Prop2Knobs::from_single(eps), n_unitaries,
                           seed);
}

Prop2Result decorrelate_prop2(const DensityMatrix& rho, int n,
                              const Prop2Knobs& knobs, int n_unitaries,
                              std::uint64_t seed) {
  if (n_unitaries < 1)
    throw PreconditionError("decorrelate_prop2: n_unitaries must be >= 1");
  Prop2Internals in = build_prop2_internals(rho, n, knobs);

  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::DiscreteWeyl;
  spec.dimension = static_cast<int>(in.rank_a);
  spec.support_projector = in.pi_a;
  spec.seed = seed;
  const std::vector<ComplexMatrix> unitaries =
      generate_ensemble(spec, n_unitaries);

  const std::vector<double> probs(n_unitaries, 1.0 / n_unitaries);
  MixedUnitaryChannel channel =
      MixedUnitaryChannel::a_lur(probs, unitaries, in.dim_bn, n);

  DecorrelationResult dec = epsilon_decorrelates(channel, in.rho_n);
  NoiseCost cost = noise_costs(channel, in.rho_n);

  // The sampled average of the cut-down state against its exact twirl: the
  // concentration event the construction relies on, reported as a diagnostic.
  const int dim = in.dim_an * in.dim_bn;
  ComplexMatrix avg = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& u : unitaries)
    avg += conjugate_factor_a(in.rho_tilde, u, in.dim_bn);
  avg /= static_cast<double>(n_unitaries);
  const ComplexMatrix omega_a = in.pi_a / static_cast<double>(in.rank_a);
  const ComplexMatrix omega_b =
      partial_trace(in.rho_tilde, DimList({in.dim_an, in.dim_bn}), {1});
  const ComplexMatrix mean = tensor(omega_a, omega_b);
  const bool interval_ok = operator_in_interval(
      avg, (1.0 - knobs.eps_interval) * mean, (1.0 + knobs.eps_interval) * mean,
      1e-9);

  const double rate =
      std::log2(static_cast<double>(n_unitaries)) / static_cast<double>(n);

  return Prop2Result{std::move(channel),
                     dec.achieved_eps,
                     rate,
                     n,
                     n_unitaries,
                     in.i_single,
                     cost,
                     std::move(dec),
                     in.rank_joint,
                     in.rank_a,
                     in.rank_b,
                     in.rank_b_cut,
                     in.tilde_trace,
                     interval_ok,
                     knobs};
}

OperatorSampler prop2_sampler(const DensityMatrix& rho, int n, double eps) {
  Prop2Internals in =
      build_prop2_internals(rho, n, Prop2Knobs::from_single(eps));

  const ComplexMatrix omega_b =
      partial_trace(in.rho_tilde, DimList({in.dim_an, in.dim_bn}), {1});
  const Eigensystem es = hermitian_eigensystem(omega_b);
  double min_positive = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 1e-12) min_positive = std::min(min_positive, es.values(i));
  if (!std::isfinite(min_positive))
    throw ProtocolError(
        "prop2_sampler: the cut-down state has no surviving support");

  OperatorSampler sampler;
  sampler.name = "block-weyl";
  sampler.dim = in.dim_an * in.dim_bn;
  sampler.mean =
      in.scale * tensor(in.pi_a / static_cast<double>(in.rank_a), omega_b);
  sampler.mu = in.scale / static_cast<double>(in.rank_a) * min_positive;

  const auto tilde = std::make_shared<ComplexMatrix>(std::move(in.rho_tilde));
  const auto basis = std::make_shared<ComplexMatrix>(std::move(in.basis_a));
  const int support_dim = static_cast<int>(in.rank_a);
  const int dim_bn = in.dim_bn;
  const double scale = in.scale;
  sampler.draw = [tilde, basis, support_dim, dim_bn,
                  scale](RngStream& rng) -> ComplexMatrix {
    const std::uint64_t pick = rng.uniform_int(
        static_cast<std::uint64_t>(support_dim) * support_dim);
    const ComplexMatrix u = embed_on_support(
        weyl_unitary(support_dim, static_cast<int>(pick / support_dim),
                     static_cast<int>(pick % support_dim)),
        *basis);
    return scale * conjugate_factor_a(*tilde, u, dim_bn);
  };
  return sampler;
}

DisentangleReport disentangle_pure(const PureState& psi,
                                   const std::vector<int>& side_a) {
  const DimList& dims = psi.dims();
  const SchmidtForm sf = schmidt(psi, side_a);
  const std::vector<int> side_b = dims.complement(side_a);
  const int da = static_cast<int>(dims.total_of(side_a));
  const int db = static_cast<int>(dims.total_of(side_b));

  std::vector<int> perm = side_a;
  perm.insert(perm.end(), side_b.begin(), side_b.end());
  const ComplexVector reordered = permute_systems(psi.vector(), dims, perm);
  const DensityMatrix input =
      PureState(reordered, DimList({da, db})).to_density();

  const int rank = sf.rank(1e-10);
  const ComplexMatrix support = sf.left_basis.leftCols(rank);
  std::vector<ComplexMatrix> unitaries;
  unitaries.reserve(rank);
  for (int k = 1; k <= rank; ++k) {
    ComplexMatrix u = ComplexMatrix::Zero(rank, rank);
    for (int j = 0; j < rank; ++j)
      u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j * k / rank);
    unitaries.push_back(embed_on_support(u, support));
  }
  const std::vector<double> probs(rank, 1.0 / rank);
  MixedUnitaryChannel channel = MixedUnitaryChannel::a_lur(probs, unitaries, db);

  DensityMatrix output = channel.apply(input);

  ComplexMatrix exact = ComplexMatrix::Zero(da * db, da * db);
  for (int j = 0; j < rank; ++j) {
    const ComplexVector col =
        tensor(ComplexVector(sf.left_basis.col(j)),
               ComplexVector(sf.right_basis.col(j)));
    exact += sf.coefficients(j) * (col * col.adjoint());
  }
  const double residual = max_abs(output.matrix() - exact);
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "disentangle_pure: output deviates from the dephased form by "
       << residual;
    throw ContractViolation(os.str());
  }

  const NoiseCost cost = noise_costs(channel, input);
  const DisentanglementResult sep = ppt_check(output);
  RealVector coeffs = sf.coefficients.cwiseMax(0.0);
  const double entanglement = shannon_entropy(coeffs);

  return DisentangleReport{std::move(channel),
                           std::move(output),
                           cost,
                           sep.is_ppt,
                           sep.ppt_min_eig,
                           sep.certified,
                           rank,
                           std::move(coeffs),
                           entanglement,
                           residual};
}

ClassicalizationReport classical_correlation_dephasing(
    const PureState& psi, const std::vector<int>& side_a) {
  DisentangleReport report = disentangle_pure(psi, side_a);
  const double i_classical = mutual_information(report.output, {0});
  if (std::abs(i_classical - report.entanglement) > 1e-9) {
    std::ostringstream os;
    os << "classical_correlation_dephasing: I(A:B) = " << i_classical
       << " does not match the entanglement " << report.entanglement;
    throw ContractViolation(os.str());
  }
  return ClassicalizationReport{std::move(report.output), i_classical,
                                report.entanglement};
}

TwoStepReport two_step_cost_comparison(const DensityMatrix& rho,
                                       const MixedUnitaryChannel& channel) {
  if (rho.dims().size() != 2)
    throw PreconditionError(
        "two_step_cost_comparison: state must have exactly two factors");
  if (channel.dim_a() != rho.dims().factor(0) ||
      channel.dim_b() != rho.dims().factor(1))
    throw PreconditionError(
        "two_step_cost_comparison: channel dims do not match the state cut");

  const DensityMatrix sigma = channel.apply(rho);
  const DisentanglementResult sep = ppt_check(sigma);
  if (!sep.is_ppt || !sep.certified)
    throw PreconditionError(
        "two_step_cost_comparison: channel output is not separable-certified");

  const double s_in = von_neumann_entropy(rho);
  const double s_a = von_neumann_entropy(reduced_state(sigma, {0}));
  const double s_b = von_neumann_entropy(reduced_state(sigma, {1}));
  const double two_step = s_a + s_b - s_in;
  const double one_shot = mutual_information(rho, {0});
  const double gap = two_step - one_shot;
  const bool locally_unital = channel.locality() != Locality::GeneralUnitary;
  if (locally_unital && gap < -1e-9) {
    std::ostringstream os;
    os << "two_step_cost_comparison: locally unital channel produced gap "
       << gap;
    throw ContractViolation(os.str());
  }
  return TwoStepReport{two_step,       one_shot,        gap,
                       locally_unital, gap >= -1e-9,    sep.is_ppt,
                       sep.ppt_min_eig, sep.certified};
}

MultipartiteReport multipartite_erasure(const DensityMatrix& rho) {
  const int parties = static_cast<int>(rho.dims().size());
  if (parties < 2)
    throw PreconditionError(
        "multipartite_erasure: state must have at least two factors");

  double marginal_sum = 0;
  for (int i = 0; i < parties; ++i)
    marginal_sum += von_neumann_entropy(reduced_state(rho, {i}));
  const double c_er = marginal_sum - von_neumann_entropy(rho);

  std::vector<double> sequential;
  sequential.reserve(parties - 1);
  double running = 0;
  for (int k = 0; k + 1 < parties; ++k) {
    std::vector<int> tail;
    for (int i = k; i < parties; ++i) tail.push_back(i);
    const DensityMatrix marginal = reduced_state(rho, tail);
    const double value = mutual_information(marginal, {0});
    sequential.push_back(value);
    running += value;
  }
  const double residual = std::abs(running - c_er);
  if (residual > 1e-9) {
    std::ostringstream os;
    os << "multipartite_erasure: telescoping mismatch " << residual;
    throw ContractViolation(os.str());
  }
  return MultipartiteReport{c_er, std::move(sequential), residual};
}

SsaScanResult ssa_scan(int count, const DimList& dims, std::uint64_t seed) {
  if (dims.size() != 3)
    throw PreconditionError("ssa_scan: dims must have exactly three factors");
  if (count < 1) throw PreconditionError("ssa_scan: count must be >= 1");

  std::vector<double> values(count);
  parallel_for_trials(count, [&](int t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    const DensityMatrix rho = random_induced_mixed(dims, 0, rng);
    values[t] = conditional_mutual_information(rho, {0}, {1}, {2});
  });

  double min_value = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (const double v : values) {
    min_value = std::min(min_value, v);
    if (v < -1e-9) ++violations;
  }
  return SsaScanResult{min_value, violations, count, std::move(values)};
}

std::string to_string(DephasingFamily family) {
  switch (family) {
    case DephasingFamily::SchmidtDephasing: return "schmidt_dephasing";
    case DephasingFamily::RandomLocal: return "random_local";
    case DephasingFamily::TraceReplace: return "trace_replace";
  }
  throw PreconditionError("to_string: unknown dephasing family");
}

DephasingFamily dephasing_family_from_string(const std::string& s) {
  if (s == "schmidt_dephasing") return DephasingFamily::SchmidtDephasing;
  if (s == "random_local") return DephasingFamily::RandomLocal;
  if (s == "trace_replace") return DephasingFamily::TraceReplace;
  throw PreconditionError("dephasing_family_from_string: unknown family '" +
                          s + "'");
}

ConjectureScanResult conjecture_scan(int count, const DimList& dims,
                                     std::uint64_t seed,
                                     DephasingFamily family) {
  if (dims.size() != 2)
    throw PreconditionError("conjecture_scan: dims must have exactly two factors");
  if (dims.total() > 6)
    throw PreconditionError(
        "conjecture_scan: total dimension must be <= 6 so separability is "
        "certified");
  if (count < 1) throw PreconditionError("conjecture_scan: count must be >= 1");

  const int da = dims.factor(0);
  const int db = dims.factor(1);

  struct Trial {
    double excess;
    double i_sigma;
    double entanglement;
    ComplexVector psi;
  };
  std::vector<Trial> trials(count);

  parallel_for_trials(count, [&](int t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    const PureState psi = random_haar_pure(dims, rng);
    const DensityMatrix rho = psi.to_density();

    ComplexMatrix sigma_m;
    switch (family) {
      case DephasingFamily::SchmidtDephasing: {
        const SchmidtForm sf = schmidt(psi, {0});
        sigma_m = ComplexMatrix::Zero(da * db, da * db);
        for (int j = 0; j < sf.coefficients.size(); ++j) {
          if (sf.coefficients(j) <= 0) continue;
          const ComplexVector col =
              tensor(ComplexVector(sf.left_basis.col(j)),
                     ComplexVector(sf.right_basis.col(j)));
          sigma_m += sf.coefficients(j) * (col * col.adjoint());
        }
        break;
      }
      case DephasingFamily::RandomLocal: {
        const ComplexMatrix va = random_unitary(da, rng);
        const ComplexMatrix wb = random_unitary(db, rng);
        const ComplexMatrix g = tensor(va, wb);
        const ComplexMatrix rotated = g.adjoint() * rho.matrix() * g;
        sigma_m = g * rotated.diagonal().asDiagonal() * g.adjoint();
        break;
      }
      case DephasingFamily::TraceReplace: {
        const ComplexMatrix mix_a = identity(da) / static_cast<double>(da);
        const ComplexMatrix mix_b = identity(db) / static_cast<double>(db);
        sigma_m = tensor(mix_a, mix_b);
        break;
      }
    }
    const DensityMatrix sigma(sigma_m, dims);
    const double i_sigma = mutual_information(sigma, {0});
    const double entanglement = entanglement_entropy(psi, {0});
    trials[t] = Trial{i_sigma - entanglement, i_sigma, entanglement,
                      psi.vector()};
  });

  ConjectureScanResult out;
  out.max_excess = -std::numeric_limits<double>::infinity();
  out.count = count;
  out.family = family;
  for (int t = 0; t < count; ++t) {
    out.max_excess = std::max(out.max_excess, trials[t].excess);
    if (trials[t].excess > 1e-7)
      out.witnesses.push_back(ConjectureWitness{t, trials[t].excess,
                                                trials[t].i_sigma,
                                                trials[t].entanglement,
                                                trials[t].psi});
  }
  return out;
}

}  // namespace corrsim
