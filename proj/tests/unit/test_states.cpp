#include <doctest.h>

#include <cmath>

#include "corrsim/errors.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/states.hpp"
#include "test_helpers.hpp"

using namespace corrsim;
namespace th = test_helpers;

namespace {

double log2_safe(double x) { return std::log2(x); }

// Independent frozen oracle for the entropy of a spectrum.
double shannon_oracle(std::initializer_list<double> probs) {
  double s = 0;
  for (double p : probs)
    if (p > 0) s -= p * log2_safe(p);
  return s;
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(identity(4) / 4.0, DimList{2, 2}));
  // Trace must be 1.
  CHECK_THROWS_AS(DensityMatrix(identity(4), DimList{2, 2}),
                  PreconditionError);
  // Dims must multiply to the matrix size.
  CHECK_THROWS_AS(DensityMatrix(identity(4) / 4.0, DimList{2, 3}),
                  PreconditionError);
  // Hermiticity.
  ComplexMatrix m = identity(2) / 2.0;
  m(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityMatrix(m, DimList{2}), PreconditionError);
  // Eigenvalues below -1e-10 are rejected, tiny dips are clamped.
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.01;
  neg(1, 1) = -0.01;
  CHECK_THROWS_AS(DensityMatrix(neg, DimList{2}), ContractViolation);
  ComplexMatrix dip = ComplexMatrix::Zero(2, 2);
  dip(0, 0) = 1.0 + 5e-11;
  dip(1, 1) = -5e-11;
  CHECK_NOTHROW(DensityMatrix(dip, DimList{2}));
}

TEST_CASE("density matrix keeps its spectrum") {
  const DensityMatrix rho = bell_dephased();
  REQUIRE(rho.eigenvalues().size() == 4);
  CHECK(rho.eigenvalues()(0) == doctest::Approx(0.5));
  CHECK(rho.eigenvalues()(1) == doctest::Approx(0.5));
  CHECK(rho.eigenvalues()(3) == doctest::Approx(0.0));
}

TEST_CASE("with_dims refactors without changing the operator") {
  const DensityMatrix rho = bell_density();
  const DensityMatrix flat = rho.with_dims(DimList{4});
  CHECK(th::approx_equal(flat.matrix(), rho.matrix(), 0.0));
  CHECK_THROWS_AS(rho.with_dims(DimList{3}), PreconditionError);
}

TEST_CASE("pure state validation") {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = 1.0;
  CHECK_NOTHROW(PureState(v, DimList{2, 2}));
  CHECK_THROWS_AS(PureState(2.0 * v, DimList{2, 2}), PreconditionError);
  CHECK_THROWS_AS(PureState(v, DimList{2}), PreconditionError);
}

TEST_CASE("to_density matches the outer product") {
  const PureState psi = bell_pure();
  CHECK(th::approx_equal(psi.to_density().matrix(),
                         ComplexMatrix(psi.vector() * psi.vector().adjoint()),
                         1e-12));
}

TEST_CASE("shannon and binary entropy") {
  RealVector p(2);
  p << 0.5, 0.5;
  CHECK(shannon_entropy(p) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
  CHECK(binary_entropy(0.8) ==
        doctest::Approx(shannon_oracle({0.8, 0.2})).epsilon(1e-12));
  RealVector q(3);
  q << 0.5, 0.25, 0.25;
  CHECK(shannon_entropy(q) == doctest::Approx(1.5));
}

TEST_CASE("von Neumann entropy of fixtures") {
  CHECK(von_neumann_entropy(bell_density()) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(bell_dephased()) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(DensityMatrix(identity(4) / 4.0, DimList{2, 2})) ==
        doctest::Approx(2.0));
  // Werner spectrum at p = 1/2: (5/8, 1/8, 1/8, 1/8).
  CHECK(von_neumann_entropy(werner(0.5)) ==
        doctest::Approx(shannon_oracle({5. / 8, 1. / 8, 1. / 8, 1. / 8}))
            .epsilon(1e-12));
}

TEST_CASE("reduced states of ghz3") {
  const DensityMatrix ghz = make_state("ghz3");
  const DensityMatrix one = reduced_state(ghz, {0});
  CHECK(th::approx_equal(one.matrix(), identity(2) / 2.0, 1e-12));
  const DensityMatrix two = reduced_state(ghz, {0, 1});
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;
  CHECK(th::approx_equal(two.matrix(), expect, 1e-12));
  CHECK(two.dims() == DimList{2, 2});
}

TEST_CASE("mutual information of fixtures") {
  CHECK(mutual_information(bell_density(), {0}) == doctest::Approx(2.0));
  CHECK(mutual_information(bell_dephased(), {0}) == doctest::Approx(1.0));
  const ComplexMatrix half = identity(2) / 2.0;
  const DensityMatrix product(tensor(half, half), DimList{2, 2});
  CHECK(mutual_information(product, {0}) == doctest::Approx(0.0));
  // Werner marginals are maximally mixed, so I = 2 - S(rho).
  CHECK(mutual_information(werner(0.5), {0}) ==
        doctest::Approx(2.0 - shannon_oracle({5. / 8, 1. / 8, 1. / 8, 1. / 8}))
            .epsilon(1e-12));
}

TEST_CASE("conditional mutual information") {
  const DensityMatrix ghz = make_state("ghz3");
  CHECK(conditional_mutual_information(ghz, {0}, {1}, {2}) ==
        doctest::Approx(1.0));
  // Empty conditioner reduces to plain mutual information.
  CHECK(conditional_mutual_information(bell_density(), {0}, {}, {1}) ==
        doctest::Approx(2.0));
}

TEST_CASE("subadditivity and araki-lieb on random states") {
  for (int t = 0; t < 100; ++t) {
    RngStream rng(100, t);
    const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
    const double s_ab = von_neumann_entropy(rho);
    const double s_a = von_neumann_entropy(reduced_state(rho, {0}));
    const double s_b = von_neumann_entropy(reduced_state(rho, {1}));
    CHECK(s_ab <= s_a + s_b + 1e-9);
    CHECK(s_ab >= std::abs(s_a - s_b) - 1e-9);
  }
}

TEST_CASE("entropy continuity bound on random pairs") {
  for (int t = 0; t < 100; ++t) {
    RngStream rng(101, t);
    const DensityMatrix rho = random_induced_mixed(DimList{4}, 0, rng);
    const DensityMatrix sigma = random_induced_mixed(DimList{4}, 0, rng);
    const double mix = 0.02 * rng.uniform();
    const DensityMatrix close(
        (1 - mix) * rho.matrix() + mix * sigma.matrix(), DimList{4});
    const double dist = trace_norm(rho.matrix() - close.matrix());
    const double gap =
        std::abs(von_neumann_entropy(rho) - von_neumann_entropy(close));
    CHECK(gap <= fannes_bound(dist, 2.0) + 1e-9);
  }
}

TEST_CASE("eta branches meet at 1/e") {
  CHECK(eta(0.0) == doctest::Approx(0.0));
  const double at = 1.0 / std::exp(1.0);
  CHECK(eta(at - 1e-12) == doctest::Approx(eta(at)).epsilon(1e-9));
  CHECK(eta(0.9) == doctest::Approx(eta(at)));
  CHECK(eta(0.1) == doctest::Approx(-0.1 * std::log2(0.1)));
}

TEST_CASE("schmidt of bell and of a skewed state") {
  const SchmidtForm bell = schmidt(bell_pure(), {0});
  CHECK(bell.coefficients(0) == doctest::Approx(0.5));
  CHECK(bell.coefficients(1) == doctest::Approx(0.5));
  CHECK(bell.rank() == 2);

  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::sqrt(0.8);
  v(3) = std::sqrt(0.2);
  const PureState skew(v, DimList{2, 2});
  const SchmidtForm sf = schmidt(skew, {0});
  CHECK(sf.coefficients(0) == doctest::Approx(0.8));
  CHECK(sf.coefficients(1) == doctest::Approx(0.2));
  // Reconstruction: sum_j sqrt(c_j) l_j (x) r_j.
  ComplexVector rebuilt = ComplexVector::Zero(4);
  for (int j = 0; j < sf.coefficients.size(); ++j) {
    if (sf.coefficients(j) <= 0) continue;
    rebuilt += std::sqrt(sf.coefficients(j)) *
               tensor(ComplexVector(sf.left_basis.col(j)),
                      ComplexVector(sf.right_basis.col(j)));
  }
  CHECK(th::approx_equal(ComplexMatrix(rebuilt * rebuilt.adjoint()),
                         ComplexMatrix(v * v.adjoint()), 1e-10));
}

TEST_CASE("schmidt across an uneven cut") {
  const SchmidtForm sf = schmidt(ghz3_pure(), {0, 2});
  // GHZ across any single-party cut has coefficients (1/2, 1/2).
  CHECK(sf.coefficients(0) == doctest::Approx(0.5));
  CHECK(sf.coefficients(1) == doctest::Approx(0.5));
  CHECK(sf.rank() == 2);
  CHECK(sf.left_basis.rows() == 4);
  CHECK(sf.right_basis.rows() == 2);
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(bell_pure(), {0}) == doctest::Approx(1.0));
  CHECK(entanglement_entropy(ghz3_pure(), {0}) == doctest::Approx(1.0));
  ComplexVector prod = ComplexVector::Zero(4);
  prod(0) = prod(1) = 1.0 / std::sqrt(2.0);  // |0>(|0>+|1>)
  CHECK(entanglement_entropy(PureState(prod, DimList{2, 2}), {0}) ==
        doctest::Approx(0.0));
  // Entanglement equals mutual information over two for pure states.
  for (int t = 0; t < 20; ++t) {
    RngStream rng(102, t);
    const PureState psi = random_haar_pure(DimList{2, 3}, rng);
    CHECK(mutual_information(psi.to_density(), {0}) ==
          doctest::Approx(2.0 * entanglement_entropy(psi, {0})).epsilon(1e-9));
  }
}

TEST_CASE("purification traces back to the input") {
  for (int t = 0; t < 10; ++t) {
    RngStream rng(103, t);
    const DensityMatrix rho = random_induced_mixed(DimList{3}, 0, rng);
    const PureState psi = purify(rho);
    CHECK(psi.dims() == DimList{3, 3});
    const DensityMatrix back = reduced_state(psi.to_density(), {1});
    CHECK(th::approx_equal(back.matrix(), rho.matrix(), 1e-9));
  }
}

TEST_CASE("named fixtures") {
  CHECK(th::approx_equal(make_state("bell").matrix(), bell_density().matrix(),
                         0.0));
  CHECK(th::approx_equal(make_state("bell_dephased").matrix(),
                         bell_dephased().matrix(), 0.0));
  const DensityMatrix w = make_state("werner:0.3");
  CHECK(th::approx_equal(w.matrix(), werner(0.3).matrix(), 0.0));
  CHECK(w.dims() == DimList{2, 2});
  // Werner eigenvalues: p + (1-p)/4 once, (1-p)/4 three times.
  CHECK(w.eigenvalues()(0) == doctest::Approx(0.3 + 0.7 / 4));
  CHECK(w.eigenvalues()(3) == doctest::Approx(0.7 / 4));

  const DensityMatrix h1 = make_state("haar:2,3:5");
  CHECK(h1.dims() == DimList{2, 3});
  CHECK(th::approx_equal(h1.matrix(), make_state("haar:2,3:5").matrix(), 0.0));
  CHECK_FALSE(th::approx_equal(h1.matrix(), make_state("haar:2,3:6").matrix(),
                               1e-3));

  const DensityMatrix d = make_state("diag:0.9,0.1");
  CHECK(d.matrix()(0, 0).real() == doctest::Approx(0.9));
  CHECK(d.dims() == DimList{2});
}

TEST_CASE("state id validation") {
  CHECK_THROWS_AS(make_state("nosuch"), UnknownStateError);
  CHECK_THROWS_AS(make_state("werner:1.5"), UnknownStateError);
  CHECK_THROWS_AS(make_state("werner:-0.1"), UnknownStateError);
  CHECK_THROWS_AS(make_state("diag:1.0"), UnknownStateError);
  CHECK_THROWS_AS(make_state("diag:0.5,0.2"), UnknownStateError);
  CHECK_THROWS_AS(make_state("diag:-0.5,1.5"), UnknownStateError);
  CHECK_THROWS_AS(make_state("haar:1,2:0"), UnknownStateError);
  CHECK_THROWS_AS(make_pure_state("werner:0.5"), UnknownStateError);
  CHECK_THROWS_AS(make_pure_state("bell_dephased"), UnknownStateError);
  CHECK_NOTHROW(make_pure_state("haar:2,2:1"));
}

TEST_CASE("random state kinds") {
  const DensityMatrix d = random_state("diagonal", DimList{4}, 3);
  ComplexMatrix off = d.matrix();
  off.diagonal().setZero();
  CHECK(max_abs(off) == 0.0);
  CHECK_NOTHROW(random_state("haar_pure", DimList{2, 2}, 3));
  CHECK_NOTHROW(random_state("induced_mixed", DimList{2, 2}, 3));
  CHECK_THROWS_AS(random_state("bogus", DimList{2}, 3), UnknownStateError);
  // Induced states are reproducible by seed.
  CHECK(th::approx_equal(random_state("induced_mixed", DimList{2, 2}, 9).matrix(),
                         random_state("induced_mixed", DimList{2, 2}, 9).matrix(),
                         0.0));
}

}  // TEST_SUITE
