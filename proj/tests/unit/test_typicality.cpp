#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "corrsim/errors.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/states.hpp"
#include "corrsim/typicality.hpp"
#include "test_helpers.hpp"

using namespace corrsim;
namespace th = test_helpers;

namespace {

ComplexMatrix tensor_power(const ComplexMatrix& m, int n) {
  ComplexMatrix out = m;
  for (int i = 1; i < n; ++i) out = tensor(out, m);
  return out;
}

}  // namespace

TEST_SUITE("typicality") {

TEST_CASE("typical projector is a projector commuting with the state") {
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  const TypicalProjector tp = typical_projector(rho, 6, 0.3);
  const ComplexMatrix rn = tensor_power(rho.matrix(), 6);
  CHECK(th::approx_equal(tp.projector * tp.projector, tp.projector, 1e-10));
  CHECK(is_hermitian(tp.projector));
  CHECK(max_abs(tp.projector * rn - rn * tp.projector) < 1e-10);
}

TEST_CASE("frozen mass and dimension for the skewed qubit") {
  // At n = 10, eps = 0.2 exactly the ten one-flip strings are typical:
  // mass = 10 * 0.9^9 * 0.1.
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  const TypicalProjector tp = typical_projector(rho, 10, 0.2);
  const TypicalityReport rep = typicality_report(tp, rho, 10, 0.2);
  CHECK(rep.dim == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rep.mass == doctest::Approx(0.387420489).epsilon(1e-9));
  CHECK(rep.sandwich_ok);
  CHECK(rep.dim_upper_ok);
  CHECK_FALSE(rep.converged);
  CHECK_FALSE(rep.counting_path);
  CHECK(rep.entropy == doctest::Approx(binary_entropy(0.9)));
}

TEST_CASE("sandwich bounds verified directly") {
  const DensityMatrix rho = make_state("diag:0.8,0.2");
  const int n = 8;
  const double eps = 0.3;
  const TypicalProjector tp = typical_projector(rho, n, eps);
  const ComplexMatrix rn = tensor_power(rho.matrix(), n);
  const ComplexMatrix cut = tp.projector * rn * tp.projector;
  const double s = binary_entropy(0.8);
  const ComplexMatrix lo = std::exp2(-n * (s + eps)) * tp.projector;
  const ComplexMatrix hi = std::exp2(-n * (s - eps)) * tp.projector;
  CHECK(operator_in_interval(cut, lo, hi, 1e-9));
}

TEST_CASE("membership window is strict") {
  // Flat spectrum: every string sits exactly at the entropy, so the typical
  // set is everything for any eps > 0.
  const DensityMatrix flat = make_state("diag:0.5,0.5");
  const TypicalProjector tp = typical_projector(flat, 4, 1e-6);
  CHECK(th::approx_equal(tp.projector, identity(16), 1e-12));
  CHECK(tp.degenerate_flag);
}

TEST_CASE("empty windows are allowed and reported as zero mass") {
  // At n = 1, eps = 0.25 neither eigenvalue of diag(0.9, 0.1) is typical.
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  const TypicalProjector tp = typical_projector(rho, 1, 0.25);
  CHECK(max_abs(tp.projector) == 0.0);
  const TypicalityReport rep = typicality_report(tp, rho, 1, 0.25);
  CHECK(rep.mass == 0.0);
  CHECK(rep.dim == 0.0);
  CHECK(std::isinf(rep.log2_dim));
}

TEST_CASE("counting route agrees with the dense route") {
  for (const char* id : {"diag:0.9,0.1", "diag:0.6,0.3,0.1"}) {
    const DensityMatrix rho = make_state(id);
    for (int n : {2, 5, 8}) {
      for (double eps : {0.1, 0.3, 0.6}) {
        // Dense reports cost d^3n; keep the cross-check grid small.
        if (std::pow(double(rho.dim()), n) > 1024) continue;
        const TypicalityReport dense =
            typicality_report(typical_projector(rho, n, eps), rho, n, eps);
        const TypicalityReport count = typicality_report_counting(rho, n, eps);
        CHECK(count.counting_path);
        CHECK(count.mass == doctest::Approx(dense.mass).epsilon(1e-9));
        CHECK(count.dim == doctest::Approx(dense.dim).epsilon(1e-9));
        CHECK(count.sandwich_ok == dense.sandwich_ok);
        CHECK(count.converged == dense.converged);
      }
    }
  }
}

TEST_CASE("counting route reaches large block lengths") {
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  const TypicalityReport rep = typicality_report_counting(rho, 200, 0.1);
  CHECK(rep.mass > 0.0);
  CHECK(rep.mass < 1.0);
  CHECK(rep.dim_upper_ok);
  // Mass grows with the window width.
  const TypicalityReport wider = typicality_report_counting(rho, 200, 0.2);
  CHECK(wider.mass >= rep.mass);
  CHECK(wider.converged);
  CHECK(wider.dim_lower_checked);
  CHECK(wider.dim_lower_ok);
}

TEST_CASE("non-diagonal states typicalize in their eigenbasis") {
  RngStream rng(300);
  const ComplexMatrix u = random_unitary(2, rng);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 0.2;
  const DensityMatrix rho(u * d * u.adjoint(), DimList{2});
  const TypicalityReport rot =
      typicality_report(typical_projector(rho, 6, 0.3), rho, 6, 0.3);
  const TypicalityReport diag = typicality_report_counting(
      make_state("diag:0.8,0.2"), 6, 0.3);
  CHECK(rot.mass == doctest::Approx(diag.mass).epsilon(1e-9));
  CHECK(rot.dim == doctest::Approx(diag.dim).epsilon(1e-9));
}

TEST_CASE("gentle measurement on a known projector") {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 0.9;
  rho(1, 1) = 0.1;
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 0) = 1.0;
  const GentleResult r = gentle_measurement_check(rho, x);
  CHECK(r.delta == doctest::Approx(0.1));
  CHECK(r.lhs == doctest::Approx(0.1));
  CHECK(r.bound == doctest::Approx(std::sqrt(0.8)));
  CHECK(r.ok);
  // The identity measurement disturbs nothing.
  const GentleResult id = gentle_measurement_check(rho, identity(2));
  CHECK(id.delta == doctest::Approx(0.0));
  CHECK(id.lhs == doctest::Approx(0.0));
}

TEST_CASE("gentle measurement holds on random soft operators") {
  RngStream rng(301);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix rho = th::random_density_matrix(4, rng);
    // Random X with spectrum in [0, 1].
    const ComplexMatrix u = random_unitary(4, rng);
    RealVector ev(4);
    for (int i = 0; i < 4; ++i) ev(i) = rng.uniform();
    const ComplexMatrix x = u * ev.asDiagonal() * u.adjoint();
    const GentleResult r = gentle_measurement_check(rho, x);
    CHECK(r.lhs <= r.bound + 1e-9);
    CHECK(r.ok);
  }
}

TEST_CASE("gentle measurement validates its operator") {
  ComplexMatrix big = identity(2) * 1.5;
  CHECK_THROWS_AS(gentle_measurement_check(identity(2) / 2.0, big),
                  PreconditionError);
  ComplexMatrix neg = identity(2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(gentle_measurement_check(identity(2) / 2.0, neg),
                  PreconditionError);
}

TEST_CASE("weyl pair relations") {
  for (int d : {2, 3, 5}) {
    const ComplexMatrix x = weyl_shift(d);
    const ComplexMatrix z = weyl_phase(d);
    ComplexMatrix xd = identity(d), zd = identity(d);
    for (int i = 0; i < d; ++i) {
      xd = ComplexMatrix(xd * x);
      zd = ComplexMatrix(zd * z);
    }
    CHECK(th::approx_equal(xd, identity(d), 1e-10));
    CHECK(th::approx_equal(zd, identity(d), 1e-10));
    // ZX = omega XZ with omega = exp(2 pi i / d).
    const Complex omega = std::exp(Complex(0, 2.0 * std::numbers::pi / d));
    CHECK(th::approx_equal(ComplexMatrix(z * x), ComplexMatrix(omega * x * z),
                           1e-10));
    // Exponents are reduced mod d by the caller; X^2 Z wraps at d = 2.
    CHECK(th::approx_equal(weyl_unitary(d, 2 % d, 1),
                           ComplexMatrix(x * x * z), 1e-10));
  }
}

TEST_CASE("discrete weyl ensemble is the full distinct set at count d^2") {
  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::DiscreteWeyl;
  spec.dimension = 3;
  const auto us = generate_ensemble(spec, 9);
  REQUIRE(us.size() == 9);
  for (std::size_t i = 0; i < us.size(); ++i) {
    CHECK(th::approx_equal(us[i].adjoint() * us[i], identity(3), 1e-10));
    for (std::size_t j = i + 1; j < us.size(); ++j)
      CHECK(max_abs(us[i] - us[j]) > 0.1);
  }
}

TEST_CASE("full weyl twirl outputs the maximally mixed state") {
  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::DiscreteWeyl;
  spec.dimension = 2;
  const auto us = generate_ensemble(spec, 4);
  RngStream rng(302);
  const ComplexMatrix rho = th::random_density_matrix(2, rng);
  ComplexMatrix avg = ComplexMatrix::Zero(2, 2);
  for (const auto& u : us) avg += u * rho * u.adjoint() / 4.0;
  CHECK(th::approx_equal(avg, identity(2) / 2.0, 1e-10));
}

TEST_CASE("haar ensembles reproduce by seed") {
  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::Haar;
  spec.dimension = 3;
  spec.seed = 17;
  const auto a = generate_ensemble(spec, 5);
  const auto b = generate_ensemble(spec, 5);
  REQUIRE(a.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(th::approx_equal(a[i], b[i], 0.0));
    CHECK(th::approx_equal(a[i].adjoint() * a[i], identity(3), 1e-10));
  }
}

TEST_CASE("phase family dephases in the computational basis") {
  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::PhaseFamily;
  spec.dimension = 4;
  const auto us = generate_ensemble(spec, 4);
  REQUIRE(us.size() == 4);
  CHECK_THROWS_AS(generate_ensemble(spec, 3), PreconditionError);
  RngStream rng(303);
  const ComplexMatrix rho = th::random_density_matrix(4, rng);
  ComplexMatrix avg = ComplexMatrix::Zero(4, 4);
  for (const auto& u : us) avg += u * rho * u.adjoint() / 4.0;
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() = rho.diagonal();
  CHECK(th::approx_equal(avg, diag, 1e-10));
}

TEST_CASE("support embedding acts as the identity off the support") {
  // Rank-2 projector inside dimension 4.
  ComplexMatrix pi = ComplexMatrix::Zero(4, 4);
  pi(0, 0) = pi(2, 2) = 1.0;
  const ComplexMatrix basis = support_basis_of_projector(pi, 2);
  CHECK(th::approx_equal(basis.adjoint() * basis, identity(2), 1e-10));
  CHECK(th::approx_equal(basis * basis.adjoint(), pi, 1e-10));

  RngStream rng(304);
  const ComplexMatrix u = random_unitary(2, rng);
  const ComplexMatrix big = embed_on_support(u, basis);
  CHECK(th::approx_equal(big.adjoint() * big, identity(4), 1e-10));
  // Vectors off the support are fixed.
  ComplexVector off = ComplexVector::Zero(4);
  off(1) = 1.0;
  CHECK((big * off - off).norm() < 1e-10);
  // On the support it acts as u in the basis coordinates.
  CHECK(th::approx_equal(ComplexMatrix(basis.adjoint() * big * basis), u,
                         1e-10));
}

TEST_CASE("embedded ensembles fix the orthocomplement") {
  UnitaryEnsembleSpec spec;
  spec.kind = EnsembleKind::DiscreteWeyl;
  spec.dimension = 2;
  ComplexMatrix pi = ComplexMatrix::Zero(3, 3);
  pi(0, 0) = pi(1, 1) = 1.0;
  spec.support_projector = pi;
  const auto us = generate_ensemble(spec, 4);
  ComplexVector off = ComplexVector::Zero(3);
  off(2) = 1.0;
  for (const auto& u : us) {
    CHECK(u.rows() == 3);
    CHECK((u * off - off).norm() < 1e-10);
  }
}

TEST_CASE("bernoulli sampler satisfies the concentration bound") {
  const OperatorSampler s = bernoulli_sampler(0.5);
  CHECK(s.dim == 1);
  CHECK(s.mu == doctest::Approx(0.5));
  const ChernoffResult r = chernoff_trial(s, 64, 0.5, 200, 11);
  CHECK(r.trials == 200);
  CHECK(r.ok);
  CHECK(r.violation_rate <= 1.0);
  CHECK(r.bound == doctest::Approx(2.0 * std::exp(-64 * 0.5 * 0.25 / 2.0)));
}

TEST_CASE("chernoff trials reject out-of-range samplers") {
  OperatorSampler bad;
  bad.name = "bad";
  bad.dim = 2;
  bad.mean = identity(2);
  bad.mu = 1.0;
  bad.draw = [](RngStream&) { return ComplexMatrix(2.0 * identity(2)); };
  CHECK_THROWS_AS(chernoff_trial(bad, 4, 0.5, 2, 1), PreconditionError);
}

TEST_CASE("chernoff results reproduce by seed") {
  const OperatorSampler s = bernoulli_sampler(0.3);
  const ChernoffResult a = chernoff_trial(s, 32, 0.4, 100, 5);
  const ChernoffResult b = chernoff_trial(s, 32, 0.4, 100, 5);
  CHECK(a.violations == b.violations);
  CHECK(a.violation_rate == b.violation_rate);
}

TEST_CASE("sqrt_psd squares back") {
  RngStream rng(305);
  const ComplexMatrix g = th::random_matrix(4, 4, rng);
  const ComplexMatrix p = g * g.adjoint();
  const ComplexMatrix r = sqrt_psd(p);
  CHECK(th::approx_equal(r * r, p, 1e-8));
  CHECK(is_hermitian(r));
}

}  // TEST_SUITE
