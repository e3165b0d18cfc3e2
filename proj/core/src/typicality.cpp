#include "corrsim/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace corrsim {

namespace {

long long checked_pow(long long d, int n, const char* context) {
  long long out = 1;
  for (int i = 0; i < n; ++i) {
    out *= d;
    check_dim_cap(out, context);
  }
  return out;
}

}  // namespace

TypicalProjector typical_projector(const DensityMatrix& rho, int n, double eps) {
  if (n < 1) throw PreconditionError("typical_projector: n must be >= 1");
  if (eps <= 0) throw PreconditionError("typical_projector: eps must be positive");
  const int d = rho.dim();
  const long long total = checked_pow(d, n, "typical_projector");

  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  TypicalProjector tp;
  tp.n = n;
  tp.eps = eps;
  tp.basis = es.vectors;
  tp.single_eigenvalues = es.values;

  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(es.values(i) - es.values(j)) < 1e-10) tp.degenerate_flag = true;

  const double s = shannon_entropy(es.values.cwiseMax(0.0));
  std::vector<double> log2_lam(d);
  for (int i = 0; i < d; ++i)
    log2_lam[i] = (es.values(i) > 1e-15) ? std::log2(es.values(i)) : 0.0;

  // Enumerate all index strings; keep those with |-log2 p_I - nS| < eps n.
  std::vector<long long> typical_cols;
  std::vector<int> idx(n, 0);
  for (long long x = 0; x < total; ++x) {
    bool zero = false;
    double log2_p = 0;
    for (int k = 0; k < n; ++k) {
      if (tp.single_eigenvalues(idx[k]) <= 1e-15) {
        zero = true;
        break;
      }
      log2_p += log2_lam[idx[k]];
    }
    if (!zero) {
      const double dev = std::abs(-log2_p - n * s);
      if (std::abs(dev - eps * n) <= 1e-9) tp.boundary_flag = true;
      if (dev < eps * n) {
        tp.typical_indices.push_back(idx);
        typical_cols.push_back(x);
      }
    }
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < d) break;
      idx[k] = 0;
    }
  }

  // Pi = W_typ W_typ^dagger where W_typ holds the typical eigenstrings.
  ComplexMatrix basis_power = es.vectors;
  for (int k = 1; k < n; ++k) basis_power = tensor(basis_power, es.vectors);
  ComplexMatrix w(total, static_cast<long long>(typical_cols.size()));
  for (size_t c = 0; c < typical_cols.size(); ++c)
    w.col(c) = basis_power.col(typical_cols[c]);
  tp.projector = w * w.adjoint();
  return tp;
}

TypicalityReport typicality_report(const TypicalProjector& tp,
                                   const DensityMatrix& rho, int n, double eps) {
  if (tp.n != n || tp.eps != eps)
    throw PreconditionError("typicality_report: projector built for different (n, eps)");
  const int d = rho.dim();
  const long long total = checked_pow(d, n, "typicality_report");
  if (tp.projector.rows() != total)
    throw PreconditionError("typicality_report: projector dimension mismatch");

  TypicalityReport rep;
  rep.counting_path = false;
  rep.boundary_flag = tp.boundary_flag;
  rep.degenerate_flag = tp.degenerate_flag;
  rep.entropy = shannon_entropy(tp.single_eigenvalues.cwiseMax(0.0));

  ComplexMatrix rho_n = rho.matrix();
  for (int k = 1; k < n; ++k) rho_n = tensor(rho_n, rho.matrix());

  rep.mass = (rho_n * tp.projector).trace().real();
  rep.dim = std::round(tp.projector.trace().real());
  rep.log2_dim = (rep.dim > 0) ? std::log2(rep.dim)
                               : -std::numeric_limits<double>::infinity();

  const double s = rep.entropy;
  const ComplexMatrix sandwiched = tp.projector * rho_n * tp.projector;
  const double lo = std::exp2(-n * (s + eps));
  const double hi = std::exp2(-n * (s - eps));
  rep.sandwich_ok = operator_in_interval(sandwiched, lo * tp.projector,
                                         hi * tp.projector, 1e-9);

  rep.dim_upper_ok = rep.log2_dim <= n * (s + eps) + 1e-9;
  rep.converged = rep.mass >= 1.0 - eps;
  if (rep.converged) {
    rep.dim_lower_checked = true;
    rep.dim_lower_ok = rep.dim >= (1.0 - eps) * std::exp2(n * (s - eps)) - 1e-9;
  }
  return rep;
}

TypicalityReport typicality_report_counting(const DensityMatrix& rho, int n,
                                            double eps) {
  if (n < 1) throw PreconditionError("typicality_report_counting: n must be >= 1");
  if (eps <= 0)
    throw PreconditionError("typicality_report_counting: eps must be positive");
  const RealVector lam = rho.eigenvalues();
  const int d = static_cast<int>(lam.size());

  TypicalityReport rep;
  rep.counting_path = true;
  rep.entropy = shannon_entropy(lam.cwiseMax(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(lam(i) - lam(j)) < 1e-10) rep.degenerate_flag = true;

  const double s = rep.entropy;
  std::vector<double> ln_lam(d);
  for (int i = 0; i < d; ++i) ln_lam[i] = (lam(i) > 1e-15) ? std::log(lam(i)) : 0.0;
  constexpr double ln2 = std::numbers::ln2;

  // Walk all type classes (m_1..m_d), sum multiplicity and mass in log space.
  double mass = 0;
  double dim = 0;
  bool sandwich_ok = true;
  std::vector<int> counts(d, 0);
  const double lgn = std::lgamma(double(n) + 1.0);

  std::function<void(int, int)> walk = [&](int slot, int remaining) {
    if (slot == d - 1) {
      counts[slot] = remaining;
      bool zero = false;
      double log2_p = 0;
      for (int i = 0; i < d; ++i) {
        if (counts[i] == 0) continue;
        if (lam(i) <= 1e-15) {
          zero = true;
          break;
        }
        log2_p += counts[i] * ln_lam[i] / ln2;
      }
      if (!zero) {
        const double dev = std::abs(-log2_p - n * s);
        if (std::abs(dev - eps * n) <= 1e-9) rep.boundary_flag = true;
        if (dev < eps * n) {
          double ln_mult = lgn;
          for (int i = 0; i < d; ++i) ln_mult -= std::lgamma(double(counts[i]) + 1.0);
          dim += std::exp(ln_mult);
          mass += std::exp(ln_mult + log2_p * ln2);
          // Typicality is exactly the sandwich statement for each string.
          if (log2_p < -n * (s + eps) - 1e-9 || log2_p > -n * (s - eps) + 1e-9)
            sandwich_ok = false;
        }
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[slot] = c;
      walk(slot + 1, remaining - c);
    }
  };
  walk(0, n);

  rep.mass = mass;
  rep.dim = dim;
  rep.log2_dim =
      (dim > 0) ? std::log2(dim) : -std::numeric_limits<double>::infinity();
  rep.sandwich_ok = sandwich_ok;
  rep.dim_upper_ok = rep.log2_dim <= n * (s + eps) + 1e-9;
  rep.converged = rep.mass >= 1.0 - eps;
  if (rep.converged) {
    rep.dim_lower_checked = true;
    rep.dim_lower_ok =
        rep.log2_dim >= std::log2(1.0 - eps) + n * (s - eps) - 1e-9;
  }
  return rep;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m, double tol) {
  const Eigensystem es = hermitian_eigensystem(m);
  if (es.values.minCoeff() < -tol)
    throw PreconditionError("sqrt_psd: matrix not PSD within tolerance");
  RealVector vals = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * vals.asDiagonal() * es.vectors.adjoint();
}

GentleResult gentle_measurement_check(const ComplexMatrix& rho,
                                      const ComplexMatrix& x) {
  if (rho.rows() != rho.cols() || x.rows() != x.cols() || rho.rows() != x.rows())
    throw PreconditionError("gentle_measurement_check: dimension mismatch");
  if (!is_hermitian(rho, 1e-10))
    throw PreconditionError("gentle_measurement_check: rho not Hermitian");
  const ComplexMatrix id = ComplexMatrix::Identity(x.rows(), x.cols());
  if (!operator_in_interval(x, ComplexMatrix::Zero(x.rows(), x.cols()), id, 1e-9))
    throw PreconditionError("gentle_measurement_check: x outside [0, 1]");

  GentleResult out;
  const double tr_rho = rho.trace().real();
  const double tr_rho_x = (rho * x).trace().real();
  out.delta = tr_rho - tr_rho_x;
  if (out.delta < -1e-9)
    throw ContractViolation("gentle_measurement_check: tr(rho X) exceeds tr(rho)");

  const ComplexMatrix root = sqrt_psd(0.5 * (x + x.adjoint()));
  out.lhs = trace_norm(rho - root * rho * root);
  out.bound = std::sqrt(8.0 * std::max(out.delta, 0.0));
  out.ok = out.lhs <= out.bound + 1e-9;
  return out;
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "discrete_weyl" || s == "weyl") return EnsembleKind::DiscreteWeyl;
  if (s == "haar") return EnsembleKind::Haar;
  if (s == "phase_family") return EnsembleKind::PhaseFamily;
  throw PreconditionError("ensemble_kind_from_string: unknown kind \"" + s + "\"");
}

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::DiscreteWeyl: return "discrete_weyl";
    case EnsembleKind::Haar: return "haar";
    case EnsembleKind::PhaseFamily: return "phase_family";
  }
  throw PreconditionError("to_string: bad EnsembleKind");
}

ComplexMatrix weyl_shift(int d) {
  check_dim_cap(d, "weyl_shift");
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1;
  return x;
}

ComplexMatrix weyl_phase(int d) {
  check_dim_cap(d, "weyl_phase");
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  return z;
}

ComplexMatrix weyl_unitary(int d, int a, int b) {
  if (a < 0 || a >= d || b < 0 || b >= d)
    throw PreconditionError("weyl_unitary: exponents must lie in [0, d)");
  ComplexMatrix out = ComplexMatrix::Identity(d, d);
  const ComplexMatrix x = weyl_shift(d);
  const ComplexMatrix z = weyl_phase(d);
  for (int i = 0; i < a; ++i) out = x * out;
  for (int i = 0; i < b; ++i) out = out * z;
  return out;
}

ComplexMatrix support_basis_of_projector(const ComplexMatrix& projector, int rank) {
  const Eigensystem es = hermitian_eigensystem(projector);
  int found = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 0.5) ++found;
  if (found != rank)
    throw PreconditionError("support_basis_of_projector: rank mismatch (" +
                            std::to_string(found) + " vs " + std::to_string(rank) + ")");
  return es.vectors.leftCols(rank);
}

ComplexMatrix embed_on_support(const ComplexMatrix& u, const ComplexMatrix& t) {
  if (t.cols() != u.rows() || u.rows() != u.cols())
    throw PreconditionError("embed_on_support: dimension mismatch");
  const ComplexMatrix amb_id = ComplexMatrix::Identity(t.rows(), t.rows());
  return t * u * t.adjoint() + (amb_id - t * t.adjoint());
}

std::vector<ComplexMatrix> generate_ensemble(const UnitaryEnsembleSpec& spec,
                                             int count) {
  if (spec.dimension < 1)
    throw PreconditionError("generate_ensemble: dimension must be >= 1");
  if (count < 1) throw PreconditionError("generate_ensemble: count must be >= 1");
  const int d = spec.dimension;

  ComplexMatrix t;  // ambient isometry (empty = no embedding)
  if (spec.support_projector) {
    t = support_basis_of_projector(*spec.support_projector, d);
  }
  auto lift = [&](const ComplexMatrix& u) {
    return t.size() ? embed_on_support(u, t) : u;
  };

  std::vector<ComplexMatrix> out;
  out.reserve(count);
  RngStream rng(spec.seed);

  switch (spec.kind) {
    case EnsembleKind::DiscreteWeyl: {
      if (static_cast<long long>(count) == static_cast<long long>(d) * d) {
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) out.push_back(lift(weyl_unitary(d, a, b)));
      } else {
        for (int i = 0; i < count; ++i) {
          const std::uint64_t pick = rng.uniform_int(static_cast<std::uint64_t>(d) * d);
          out.push_back(lift(weyl_unitary(d, static_cast<int>(pick / d),
                                          static_cast<int>(pick % d))));
        }
      }
      break;
    }
    case EnsembleKind::Haar: {
      for (int i = 0; i < count; ++i) out.push_back(lift(random_unitary(d, rng)));
      break;
    }
    case EnsembleKind::PhaseFamily: {
      if (count != d)
        throw PreconditionError("generate_ensemble: phase_family count must equal D");
      for (int k = 1; k <= d; ++k) {
        ComplexMatrix u = ComplexMatrix::Zero(d, d);
        for (int j = 0; j < d; ++j)
          u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j * k / d);
        out.push_back(lift(u));
      }
      break;
    }
  }
  return out;
}

ChernoffResult chernoff_trial(const OperatorSampler& sampler, int n_samples,
                              double eps, int trials, std::uint64_t seed) {
  if (n_samples < 1 || trials < 1)
    throw PreconditionError("chernoff_trial: n_samples and trials must be >= 1");
  if (eps <= 0) throw PreconditionError("chernoff_trial: eps must be positive");
  const int d = sampler.dim;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix zero = ComplexMatrix::Zero(d, d);

  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    ComplexMatrix sum = zero;
    for (int i = 0; i < n_samples; ++i) {
      const ComplexMatrix x = sampler.draw(rng);
      if (i == 0 && !operator_in_interval(x, zero, id, 1e-9))
        throw PreconditionError("chernoff_trial: sampler output outside [0, 1]");
      sum += x;
    }
    const ComplexMatrix mean = sum / double(n_samples);
    if (!operator_in_interval(mean, (1.0 - eps) * sampler.mean,
                              (1.0 + eps) * sampler.mean, 1e-9))
      ++violations;
  }

  ChernoffResult out;
  out.trials = trials;
  out.violations = violations;
  out.violation_rate = double(violations) / trials;
  out.bound = 2.0 * d * std::exp(-double(n_samples) * sampler.mu * eps * eps / 2.0);
  const double p = std::min(out.bound, 1.0);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / trials);
  out.ok = out.violation_rate <= out.bound + 3.0 * se + 1e-12;
  return out;
}

OperatorSampler bernoulli_sampler(double mu) {
  if (mu <= 0 || mu > 1)
    throw PreconditionError("bernoulli_sampler: mu must lie in (0, 1]");
  OperatorSampler s;
  s.name = "bernoulli";
  s.dim = 1;
  s.mean = ComplexMatrix::Constant(1, 1, mu);
  s.mu = mu;
  s.draw = [mu](RngStream& rng) {
    return ComplexMatrix::Constant(1, 1, rng.uniform() < mu ? 1.0 : 0.0);
  };
  return s;
}

}  // namespace corrsim
