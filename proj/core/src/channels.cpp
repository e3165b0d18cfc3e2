#include "corrsim/channels.hpp"

#include <algorithm>
#include <cmath>

namespace corrsim {

namespace {

bool matrices_close(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

bool is_identity_or_empty(const ComplexMatrix& m, int dim, double tol = 1e-9) {
  if (m.size() == 0) return true;
  if (m.rows() != dim || m.cols() != dim) return false;
  return max_abs(m - ComplexMatrix::Identity(dim, dim)) <= tol;
}

void require_unitary(const ComplexMatrix& u, const char* what) {
  if (u.rows() != u.cols()) throw PreconditionError(std::string(what) + ": not square");
  const ComplexMatrix g = u.adjoint() * u;
  if (max_abs(g - ComplexMatrix::Identity(u.rows(), u.cols())) > 1e-9)
    throw PreconditionError(std::string(what) + ": not unitary within 1e-9");
}

// Entropy of a Gram matrix that is PSD up to float noise.
double entropy_of_gram(const ComplexMatrix& w) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (w + w.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("entropy_exchange: Gram eigenvalue solver failed");
  RealVector vals = solver.eigenvalues();
  if (vals.minCoeff() < -1e-9)
    throw ContractViolation("entropy_exchange: Gram matrix not PSD");
  return shannon_entropy(vals.cwiseMax(0.0));
}

// Group indices of near-equal matrices; returns group id per index and
// representative list. Empty factors are materialized as identities first.
struct FactorGroups {
  std::vector<int> group_of;
  std::vector<ComplexMatrix> reps;
};

FactorGroups group_factors(const std::vector<ChannelElement>& elements, bool a_side,
                           int dim) {
  FactorGroups out;
  out.group_of.resize(elements.size());
  for (size_t i = 0; i < elements.size(); ++i) {
    const ComplexMatrix& raw = a_side ? elements[i].u_a : elements[i].u_b;
    const ComplexMatrix mat =
        raw.size() ? raw : ComplexMatrix(ComplexMatrix::Identity(dim, dim));
    int found = -1;
    for (size_t g = 0; g < out.reps.size(); ++g) {
      if (matrices_close(out.reps[g], mat, 1e-8)) {
        found = static_cast<int>(g);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(out.reps.size());
      out.reps.push_back(mat);
    }
    out.group_of[i] = found;
  }
  return out;
}

}  // namespace

std::string to_string(Locality loc) {
  switch (loc) {
    case Locality::ALur: return "a_lur";
    case Locality::BLur: return "b_lur";
    case Locality::Lur: return "lur";
    case Locality::Colur: return "colur";
    case Locality::GeneralUnitary: return "general_unitary";
  }
  throw PreconditionError("to_string: bad Locality");
}

Locality locality_from_string(const std::string& s) {
  std::string k = s;
  std::transform(k.begin(), k.end(), k.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (k == "a_lur") return Locality::ALur;
  if (k == "b_lur") return Locality::BLur;
  if (k == "lur") return Locality::Lur;
  if (k == "colur") return Locality::Colur;
  if (k == "general_unitary" || k == "general") return Locality::GeneralUnitary;
  throw PreconditionError("locality_from_string: unknown locality \"" + s + "\"");
}

MixedUnitaryChannel::MixedUnitaryChannel(Locality locality,
                                         std::vector<ChannelElement> elements,
                                         int dim_a, int dim_b, int n_label)
    : locality_(locality),
      elements_(std::move(elements)),
      dim_a_(dim_a),
      dim_b_(dim_b),
      n_label_(n_label) {
  if (dim_a_ < 1 || dim_b_ < 1)
    throw PreconditionError("MixedUnitaryChannel: dimensions must be >= 1");
  check_dim_cap(dim_total(), "MixedUnitaryChannel");
  if (elements_.empty())
    throw PreconditionError("MixedUnitaryChannel: empty ensemble");
  if (n_label_ < 1) throw PreconditionError("MixedUnitaryChannel: n_label must be >= 1");

  double psum = 0;
  for (const auto& el : elements_) {
    if (el.p < 0) throw PreconditionError("MixedUnitaryChannel: negative probability");
    psum += el.p;
    if (el.u_full.size()) {
      if (locality_ != Locality::GeneralUnitary)
        throw PreconditionError(
            "MixedUnitaryChannel: unfactored unitary under a local tag");
      if (el.u_full.rows() != dim_total())
        throw PreconditionError("MixedUnitaryChannel: unitary dimension mismatch");
      require_unitary(el.u_full, "MixedUnitaryChannel");
      continue;
    }
    if (el.u_a.size()) {
      if (el.u_a.rows() != dim_a_)
        throw PreconditionError("MixedUnitaryChannel: A-factor dimension mismatch");
      require_unitary(el.u_a, "MixedUnitaryChannel A-factor");
    }
    if (el.u_b.size()) {
      if (el.u_b.rows() != dim_b_)
        throw PreconditionError("MixedUnitaryChannel: B-factor dimension mismatch");
      require_unitary(el.u_b, "MixedUnitaryChannel B-factor");
    }
  }
  if (std::abs(psum - 1.0) > 1e-10)
    throw PreconditionError("MixedUnitaryChannel: probabilities sum to " +
                            std::to_string(psum) + ", expected 1");

  switch (locality_) {
    case Locality::ALur:
      for (const auto& el : elements_)
        if (!is_identity_or_empty(el.u_b, dim_b_))
          throw PreconditionError("MixedUnitaryChannel: A_LUR element touches B");
      break;
    case Locality::BLur:
      for (const auto& el : elements_)
        if (!is_identity_or_empty(el.u_a, dim_a_))
          throw PreconditionError("MixedUnitaryChannel: B_LUR element touches A");
      break;
    case Locality::Lur: {
      // The ensemble must factor as an outer product of independent stages.
      const FactorGroups ga = group_factors(elements_, true, dim_a_);
      const FactorGroups gb = group_factors(elements_, false, dim_b_);
      const size_t na = ga.reps.size(), nb = gb.reps.size();
      if (na * nb != elements_.size())
        throw PreconditionError("MixedUnitaryChannel: LUR ensemble is not a grid");
      std::vector<double> qa(na, 0), rb(nb, 0);
      std::vector<int> seen(na * nb, 0);
      for (size_t i = 0; i < elements_.size(); ++i) {
        qa[ga.group_of[i]] += elements_[i].p;
        rb[gb.group_of[i]] += elements_[i].p;
        if (seen[ga.group_of[i] * nb + gb.group_of[i]]++)
          throw PreconditionError("MixedUnitaryChannel: LUR grid cell repeated");
      }
      for (size_t i = 0; i < elements_.size(); ++i) {
        const double expect = qa[ga.group_of[i]] * rb[gb.group_of[i]];
        if (std::abs(elements_[i].p - expect) > 1e-8)
          throw PreconditionError(
              "MixedUnitaryChannel: LUR probabilities do not factor");
      }
      break;
    }
    case Locality::Colur:
    case Locality::GeneralUnitary:
      break;
  }
}

MixedUnitaryChannel MixedUnitaryChannel::colur(const std::vector<double>& p,
                                               const std::vector<ComplexMatrix>& u_a,
                                               const std::vector<ComplexMatrix>& u_b,
                                               int n_label) {
  if (p.size() != u_a.size() || p.size() != u_b.size() || p.empty())
    throw PreconditionError("colur: ensemble lists must have equal nonzero length");
  std::vector<ChannelElement> els(p.size());
  for (size_t i = 0; i < p.size(); ++i)
    els[i] = ChannelElement{p[i], u_a[i], u_b[i], {}};
  const int da = static_cast<int>(u_a[0].rows());
  const int db = static_cast<int>(u_b[0].rows());
  return MixedUnitaryChannel(Locality::Colur, std::move(els), da, db, n_label);
}

MixedUnitaryChannel MixedUnitaryChannel::a_lur(const std::vector<double>& p,
                                               const std::vector<ComplexMatrix>& u_a,
                                               int dim_b, int n_label) {
  if (p.size() != u_a.size() || p.empty())
    throw PreconditionError("a_lur: ensemble lists must have equal nonzero length");
  std::vector<ChannelElement> els(p.size());
  for (size_t i = 0; i < p.size(); ++i) els[i] = ChannelElement{p[i], u_a[i], {}, {}};
  const int da = static_cast<int>(u_a[0].rows());
  return MixedUnitaryChannel(Locality::ALur, std::move(els), da, dim_b, n_label);
}

MixedUnitaryChannel MixedUnitaryChannel::b_lur(int dim_a, const std::vector<double>& p,
                                               const std::vector<ComplexMatrix>& u_b,
                                               int n_label) {
  if (p.size() != u_b.size() || p.empty())
    throw PreconditionError("b_lur: ensemble lists must have equal nonzero length");
  std::vector<ChannelElement> els(p.size());
  for (size_t i = 0; i < p.size(); ++i) els[i] = ChannelElement{p[i], {}, u_b[i], {}};
  const int db = static_cast<int>(u_b[0].rows());
  return MixedUnitaryChannel(Locality::BLur, std::move(els), dim_a, db, n_label);
}

MixedUnitaryChannel MixedUnitaryChannel::lur(const std::vector<double>& p_a,
                                             const std::vector<ComplexMatrix>& u_a,
                                             const std::vector<double>& p_b,
                                             const std::vector<ComplexMatrix>& u_b,
                                             int n_label) {
  if (p_a.size() != u_a.size() || p_b.size() != u_b.size() || p_a.empty() || p_b.empty())
    throw PreconditionError("lur: stage lists must have equal nonzero length");
  std::vector<ChannelElement> els;
  els.reserve(p_a.size() * p_b.size());
  for (size_t i = 0; i < p_a.size(); ++i)
    for (size_t j = 0; j < p_b.size(); ++j)
      els.push_back(ChannelElement{p_a[i] * p_b[j], u_a[i], u_b[j], {}});
  const int da = static_cast<int>(u_a[0].rows());
  const int db = static_cast<int>(u_b[0].rows());
  return MixedUnitaryChannel(Locality::Lur, std::move(els), da, db, n_label);
}

MixedUnitaryChannel MixedUnitaryChannel::general(const std::vector<double>& p,
                                                 const std::vector<ComplexMatrix>& u,
                                                 int dim_a, int dim_b, int n_label) {
  if (p.size() != u.size() || p.empty())
    throw PreconditionError("general: ensemble lists must have equal nonzero length");
  std::vector<ChannelElement> els(p.size());
  for (size_t i = 0; i < p.size(); ++i) els[i] = ChannelElement{p[i], {}, {}, u[i]};
  return MixedUnitaryChannel(Locality::GeneralUnitary, std::move(els), dim_a, dim_b,
                             n_label);
}

MixedUnitaryChannel MixedUnitaryChannel::identity_channel(int dim_a, int dim_b) {
  std::vector<ChannelElement> els{ChannelElement{1.0, {}, {}, {}}};
  return MixedUnitaryChannel(Locality::Colur, std::move(els), dim_a, dim_b, 1);
}

double MixedUnitaryChannel::log_n() const { return std::log2(double(size())); }

RealVector MixedUnitaryChannel::probabilities() const {
  RealVector p(size());
  for (int i = 0; i < size(); ++i) p(i) = elements_[i].p;
  return p;
}

ComplexMatrix MixedUnitaryChannel::full_unitary(int i) const {
  if (i < 0 || i >= size()) throw IndexError("full_unitary: index out of range");
  const ChannelElement& el = elements_[i];
  if (el.u_full.size()) return el.u_full;
  const ComplexMatrix a =
      el.u_a.size() ? el.u_a : ComplexMatrix(ComplexMatrix::Identity(dim_a_, dim_a_));
  const ComplexMatrix b =
      el.u_b.size() ? el.u_b : ComplexMatrix(ComplexMatrix::Identity(dim_b_, dim_b_));
  return tensor(a, b);
}

DensityMatrix MixedUnitaryChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != dim_total())
    throw PreconditionError("apply: state dimension " + std::to_string(rho.dim()) +
                            " does not match channel " + std::to_string(dim_total()));
  const ComplexMatrix& in = rho.matrix();
  ComplexMatrix acc = ComplexMatrix::Zero(in.rows(), in.cols());
  for (const auto& el : elements_) {
    if (el.p == 0) continue;
    if (el.u_full.size()) {
      acc.noalias() += el.p * (el.u_full * in * el.u_full.adjoint());
      continue;
    }
    if (!el.u_a.size() && !el.u_b.size()) {
      acc += el.p * in;
      continue;
    }
    ComplexMatrix t = in;
    if (el.u_a.size()) t = conjugate_factor_a(t, el.u_a, dim_b_);
    if (el.u_b.size()) t = conjugate_factor_b(t, dim_a_, el.u_b);
    acc += el.p * t;
  }
  acc = 0.5 * (acc + acc.adjoint());
  return DensityMatrix(std::move(acc), rho.dims());
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw PreconditionError("KrausChannel: empty operator list");
  dim_ = static_cast<int>(kraus_[0].rows());
  ComplexMatrix complete = ComplexMatrix::Zero(dim_, dim_);
  ComplexMatrix dual = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_ || k.cols() != dim_)
      throw PreconditionError("KrausChannel: operators must be square, same size");
    complete.noalias() += k.adjoint() * k;
    dual.noalias() += k * k.adjoint();
  }
  const ComplexMatrix id = ComplexMatrix::Identity(dim_, dim_);
  if (max_abs(complete - id) > 1e-9)
    throw PreconditionError("KrausChannel: completeness sum differs from identity");
  unital_ = max_abs(dual - id) <= 1e-9;
}

KrausChannel KrausChannel::from_mixed_unitary(const MixedUnitaryChannel& channel) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(channel.size());
  for (int i = 0; i < channel.size(); ++i)
    ops.push_back(std::sqrt(channel.elements()[i].p) * channel.full_unitary(i));
  return KrausChannel(std::move(ops));
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != dim_)
    throw PreconditionError("KrausChannel::apply: dimension mismatch");
  const ComplexMatrix& in = rho.matrix();
  ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) acc.noalias() += k * in * k.adjoint();
  acc = 0.5 * (acc + acc.adjoint());
  return DensityMatrix(std::move(acc), rho.dims());
}

NoiseCost::NoiseCost(double log_n_, double shannon_, double entropy_exchange_)
    : log_n(log_n_), shannon(shannon_), entropy_exchange(entropy_exchange_) {
  if (log_n < shannon - 1e-9 || shannon < entropy_exchange - 1e-9)
    throw ContractViolation("NoiseCost: chain log N >= H(p) >= S_e violated");
}

double entropy_exchange(const MixedUnitaryChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim_total())
    throw PreconditionError("entropy_exchange: dimension mismatch");
  const int n = channel.size();
  const auto& els = channel.elements();
  ComplexMatrix w(n, n);

  if (channel.locality() == Locality::ALur || channel.locality() == Locality::BLur) {
    const bool a_side = channel.locality() == Locality::ALur;
    const int d_loc = a_side ? channel.dim_a() : channel.dim_b();
    const DimList cut{channel.dim_a(), channel.dim_b()};
    const ComplexMatrix marg = partial_trace(
        rho.matrix(), cut, std::vector<int>{a_side ? 0 : 1});
    const ComplexMatrix id = ComplexMatrix::Identity(d_loc, d_loc);
    std::vector<ComplexMatrix> u(n), prod(n);
    for (int i = 0; i < n; ++i) {
      const ComplexMatrix& f = a_side ? els[i].u_a : els[i].u_b;
      u[i] = f.size() ? f : id;
      prod[i] = u[i] * marg;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w(i, j) = std::sqrt(els[i].p * els[j].p) *
                  u[j].conjugate().cwiseProduct(prod[i]).sum();
    return entropy_of_gram(w);
  }

  if (channel.locality() == Locality::GeneralUnitary) {
    const ComplexMatrix& in = rho.matrix();
    std::vector<ComplexMatrix> t(n);
    std::vector<ComplexMatrix> u(n);
    for (int i = 0; i < n; ++i) {
      u[i] = channel.full_unitary(i);
      t[i] = u[i] * in;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w(i, j) = std::sqrt(els[i].p * els[j].p) *
                  u[j].conjugate().cwiseProduct(t[i]).sum();
    return entropy_of_gram(w);
  }

  // Factored (COLUR / LUR): per-pair trace over the block structure.
  const int da = channel.dim_a(), db = channel.dim_b();
  const ComplexMatrix ida = ComplexMatrix::Identity(da, da);
  const ComplexMatrix idb = ComplexMatrix::Identity(db, db);
  const ComplexMatrix& in = rho.matrix();
  std::vector<ComplexMatrix> ua(n), ub(n);
  for (int i = 0; i < n; ++i) {
    ua[i] = els[i].u_a.size() ? els[i].u_a : ida;
    ub[i] = els[i].u_b.size() ? els[i].u_b : idb;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix m1 = ua[j].adjoint() * ua[i];
      const ComplexMatrix m2 = ub[j].adjoint() * ub[i];
      Complex acc = 0;
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < da; ++l) {
          if (m1(k, l) == Complex(0, 0)) continue;
          acc += m1(k, l) *
                 (m2 * in.block(static_cast<long long>(l) * db,
                                static_cast<long long>(k) * db, db, db))
                     .trace();
        }
      w(i, j) = std::sqrt(els[i].p * els[j].p) * acc;
    }
  return entropy_of_gram(w);
}

double entropy_exchange(const KrausChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim())
    throw PreconditionError("entropy_exchange: dimension mismatch");
  const int n = channel.size();
  const ComplexMatrix& in = rho.matrix();
  std::vector<ComplexMatrix> t(n);
  for (int i = 0; i < n; ++i) t[i] = channel.kraus()[i] * in;
  ComplexMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w(i, j) = channel.kraus()[j].conjugate().cwiseProduct(t[i]).sum();
  return entropy_of_gram(w);
}

double entropy_exchange_via_purification(const KrausChannel& channel,
                                         const DensityMatrix& rho) {
  const PureState psi = purify(rho);
  const int d = rho.dim();
  const ComplexMatrix joint = psi.vector() * psi.vector().adjoint();
  ComplexMatrix acc = ComplexMatrix::Zero(joint.rows(), joint.cols());
  for (const auto& k : channel.kraus()) acc += conjugate_factor_b(joint, d, k);
  acc = 0.5 * (acc + acc.adjoint());
  return von_neumann_entropy(DensityMatrix(std::move(acc), DimList{d, d}));
}

double entropy_exchange_via_purification(const MixedUnitaryChannel& channel,
                                         const DensityMatrix& rho) {
  return entropy_exchange_via_purification(KrausChannel::from_mixed_unitary(channel),
                                           rho);
}

NoiseCost noise_costs(const MixedUnitaryChannel& channel, const DensityMatrix& rho) {
  return NoiseCost(channel.log_n(), shannon_entropy(channel.probabilities()),
                   entropy_exchange(channel, rho));
}

DecorrelationResult epsilon_decorrelates(
    const MixedUnitaryChannel& channel, const DensityMatrix& rho,
    const std::optional<DensityMatrix>& reference) {
  const DimList cut{channel.dim_a(), channel.dim_b()};
  const DensityMatrix out = channel.apply(rho).with_dims(cut);
  DensityMatrix product = [&]() {
    if (reference) {
      if (reference->dim() != channel.dim_total())
        throw PreconditionError("epsilon_decorrelates: reference dimension mismatch");
      return reference->with_dims(cut);
    }
    const DensityMatrix ma = reduced_state(out, {0});
    const DensityMatrix mb = reduced_state(out, {1});
    return DensityMatrix(tensor(ma.matrix(), mb.matrix()), cut);
  }();
  const double eps = trace_norm(out.matrix() - product.matrix());
  return DecorrelationResult{eps, std::move(product), out};
}

DisentanglementResult ppt_check(const DensityMatrix& rho) {
  if (rho.dims().size() != 2)
    throw PreconditionError("ppt_check: state must have exactly two factors");
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims(), {1});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (pt + pt.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("ppt_check: eigenvalue solver failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  const bool certified = rho.dim() <= 6;
  return DisentanglementResult{min_eig >= -1e-9, min_eig, certified, rho};
}

DisentanglementResult epsilon_disentangles(const MixedUnitaryChannel& channel,
                                           const DensityMatrix& rho) {
  const DimList cut{channel.dim_a(), channel.dim_b()};
  return ppt_check(channel.apply(rho).with_dims(cut));
}

LopcCheckResult local_instrument_check(const DensityMatrix& rho,
                                       const Instrument& instrument) {
  if (rho.dims().size() != 2)
    throw PreconditionError("local_instrument_check: state must be bipartite");
  if (instrument.empty())
    throw PreconditionError("local_instrument_check: empty instrument");
  const int da = rho.dims().factor(0);
  const int db = rho.dims().factor(1);

  ComplexMatrix complete = ComplexMatrix::Zero(da, da);
  for (const auto& map : instrument)
    for (const auto& k : map) {
      if (k.rows() != da || k.cols() != da)
        throw PreconditionError("local_instrument_check: Kraus dimension mismatch");
      complete.noalias() += k.adjoint() * k;
    }
  if (max_abs(complete - ComplexMatrix::Identity(da, da)) > 1e-9)
    throw ContractViolation("local_instrument_check: instrument not trace preserving");

  const int n_out = static_cast<int>(instrument.size());
  const ComplexMatrix& in = rho.matrix();
  LopcCheckResult out{mutual_information(rho, {0}), 0.0, 0.0, {}};

  // Flag state sigma = sum_i |i><i|_{A'} (x) map_i(rho) on A' A B.
  check_dim_cap(static_cast<long long>(n_out) * da * db, "local_instrument_check");
  ComplexMatrix flag =
      ComplexMatrix::Zero(static_cast<long long>(n_out) * da * db,
                          static_cast<long long>(n_out) * da * db);
  for (int i = 0; i < n_out; ++i) {
    ComplexMatrix mi = ComplexMatrix::Zero(da * db, da * db);
    for (const auto& k : instrument[i]) mi += conjugate_factor_a(in, k, db);
    const double pi = mi.trace().real();
    out.outcome_probs.push_back(pi);
    if (pi > 1e-12) {
      const DensityMatrix rho_i(mi / pi, rho.dims());
      out.rhs += pi * mutual_information(rho_i, {0});
    }
    flag.block(static_cast<long long>(i) * da * db, static_cast<long long>(i) * da * db,
               da * db, da * db) = mi;
  }
  const DensityMatrix sigma(std::move(flag), DimList{n_out, da, db});
  out.flagged = mutual_information(sigma, {0, 1});

  if (out.lhs < out.rhs - 1e-9)
    throw ContractViolation("local_instrument_check: monotonicity chain violated");
  return out;
}

DensityMatrix regrouped_tensor_power(const DensityMatrix& rho, int k) {
  if (rho.dims().size() != 2)
    throw PreconditionError("regrouped_tensor_power: state must be bipartite");
  if (k < 1) throw PreconditionError("regrouped_tensor_power: k must be >= 1");
  const int da = rho.dims().factor(0);
  const int db = rho.dims().factor(1);
  if (k == 1) return rho.with_dims(DimList{da, db});

  ComplexMatrix power = rho.matrix();
  std::vector<int> inter_dims{da, db};
  for (int c = 1; c < k; ++c) {
    power = tensor(power, rho.matrix());
    inter_dims.push_back(da);
    inter_dims.push_back(db);
  }
  // (A1 B1 A2 B2 ...) -> (A1..Ak B1..Bk)
  std::vector<int> perm;
  for (int c = 0; c < k; ++c) perm.push_back(2 * c);
  for (int c = 0; c < k; ++c) perm.push_back(2 * c + 1);
  power = permute_systems(power, DimList(inter_dims), perm);

  long long big_a = 1, big_b = 1;
  for (int c = 0; c < k; ++c) {
    big_a *= da;
    big_b *= db;
  }
  return DensityMatrix(std::move(power),
                       DimList{static_cast<int>(big_a), static_cast<int>(big_b)});
}

ErasureBounds entanglement_erasure_bounds(const MixedUnitaryChannel& channel,
                                          const DensityMatrix& rho, int k) {
  const DensityMatrix rk = regrouped_tensor_power(rho, k);
  if (rk.dim() != channel.dim_total())
    throw PreconditionError(
        "entanglement_erasure_bounds: channel does not match rho^k");
  const DisentanglementResult dis = epsilon_disentangles(channel, rk);
  if (!dis.is_ppt || !dis.certified)
    throw PreconditionError(
        "entanglement_erasure_bounds: output not separable-certified");
  const double s_in = von_neumann_entropy(rho);
  const double s_out = von_neumann_entropy(dis.output);
  const double s_e = entropy_exchange(channel, rk);
  if (s_e < s_out - k * s_in - 1e-8)
    throw ContractViolation(
        "entanglement_erasure_bounds: entropy-exchange lower bound violated");
  const double gap = (s_out - k * s_in) / k;
  return ErasureBounds{gap, gap, s_in, s_out, s_e};
}

}  // namespace corrsim
