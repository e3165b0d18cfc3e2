#include <doctest.h>

#include <cmath>
#include <vector>

#include "corrsim/channels.hpp"
#include "corrsim/errors.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/states.hpp"
#include "test_helpers.hpp"

using namespace corrsim;
namespace th = test_helpers;

namespace {

ComplexMatrix pauli_z() {
  ComplexMatrix z = identity(2);
  z(1, 1) = -1.0;
  return z;
}

ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

MixedUnitaryChannel z_twirl() {
  return MixedUnitaryChannel::a_lur({0.5, 0.5}, {identity(2), pauli_z()}, 2);
}

MixedUnitaryChannel random_general_channel(int n_elems, int da, int db,
                                           RngStream& rng) {
  const RealVector p = random_simplex_point(n_elems, rng);
  std::vector<double> probs(p.data(), p.data() + p.size());
  std::vector<ComplexMatrix> us;
  for (int i = 0; i < n_elems; ++i) us.push_back(random_unitary(da * db, rng));
  return MixedUnitaryChannel::general(probs, us, da, db);
}

}  // namespace

TEST_SUITE("channels") {

TEST_CASE("locality string round trip") {
  for (Locality loc : {Locality::ALur, Locality::BLur, Locality::Lur,
                       Locality::Colur, Locality::GeneralUnitary}) {
    CHECK(locality_from_string(to_string(loc)) == loc);
  }
  CHECK_THROWS_AS(locality_from_string("bogus"), PreconditionError);
}

TEST_CASE("channel construction validates") {
  // Probabilities must sum to 1.
  CHECK_THROWS_AS(
      MixedUnitaryChannel::a_lur({0.5, 0.4}, {identity(2), pauli_z()}, 2),
      PreconditionError);
  CHECK_THROWS_AS(
      MixedUnitaryChannel::a_lur({1.5, -0.5}, {identity(2), pauli_z()}, 2),
      PreconditionError);
  // Factors must be unitary.
  ComplexMatrix bad = identity(2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(MixedUnitaryChannel::a_lur({1.0}, {bad}, 2),
                  PreconditionError);
  // Element structure must match the declared locality.
  ChannelElement full;
  full.p = 1.0;
  full.u_full = identity(4);
  CHECK_THROWS_AS(MixedUnitaryChannel(Locality::ALur, {full}, 2, 2),
                  PreconditionError);
  // A factored element under the general tag is legal: the tag may declare
  // less locality than the element has.
  ChannelElement split;
  split.p = 1.0;
  split.u_a = identity(2);
  const MixedUnitaryChannel coarse(Locality::GeneralUnitary, {split}, 2, 2);
  CHECK(th::approx_equal(coarse.full_unitary(0), identity(4), 1e-12));
}

TEST_CASE("factory shapes and log_n") {
  const MixedUnitaryChannel za = z_twirl();
  CHECK(za.locality() == Locality::ALur);
  CHECK(za.size() == 2);
  CHECK(za.log_n() == doctest::Approx(1.0));
  CHECK(za.dim_a() == 2);
  CHECK(za.dim_b() == 2);

  const MixedUnitaryChannel id2 = MixedUnitaryChannel::identity_channel(2, 3);
  CHECK(id2.size() == 1);
  CHECK(id2.log_n() == doctest::Approx(0.0));

  const MixedUnitaryChannel lur = MixedUnitaryChannel::lur(
      {0.5, 0.5}, {identity(2), pauli_z()}, {0.5, 0.5},
      {identity(2), pauli_x()});
  CHECK(lur.locality() == Locality::Lur);
  CHECK(lur.size() == 4);
  CHECK(lur.log_n() == doctest::Approx(2.0));

  const MixedUnitaryChannel co = MixedUnitaryChannel::colur(
      {0.5, 0.5}, {identity(2), pauli_z()}, {identity(2), pauli_x()});
  CHECK(co.locality() == Locality::Colur);
  CHECK(co.size() == 2);
  CHECK(co.log_n() == doctest::Approx(1.0));
}

TEST_CASE("apply matches the explicit kraus sum") {
  RngStream rng(200);
  const DensityMatrix rho = random_induced_mixed(DimList{2, 3}, 0, rng);
  const MixedUnitaryChannel ch = random_general_channel(3, 2, 3, rng);
  ComplexMatrix expect = ComplexMatrix::Zero(6, 6);
  for (const auto& e : ch.elements())
    expect += e.p * e.u_full * rho.matrix() * e.u_full.adjoint();
  CHECK(th::approx_equal(ch.apply(rho).matrix(), expect, 1e-10));
}

TEST_CASE("z twirl dephases the bell state") {
  const DensityMatrix out = z_twirl().apply(bell_density());
  CHECK(th::approx_equal(out.matrix(), bell_dephased().matrix(), 1e-12));
}

TEST_CASE("a-side channels leave the b marginal alone") {
  RngStream rng(201);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
    const MixedUnitaryChannel ch = MixedUnitaryChannel::a_lur(
        {0.3, 0.7}, {random_unitary(2, rng), random_unitary(2, rng)}, 2);
    const DensityMatrix out = ch.apply(rho);
    CHECK(th::approx_equal(reduced_state(out, {1}).matrix(),
                           reduced_state(rho, {1}).matrix(), 1e-10));
  }
}

TEST_CASE("mixed unitary channels are unital") {
  RngStream rng(202);
  const DensityMatrix max_mixed(identity(6) / 6.0, DimList{2, 3});
  const MixedUnitaryChannel ch = random_general_channel(4, 2, 3, rng);
  CHECK(th::approx_equal(ch.apply(max_mixed).matrix(), max_mixed.matrix(),
                         1e-10));
}

TEST_CASE("kraus channel equivalence and validation") {
  RngStream rng(203);
  const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
  const MixedUnitaryChannel mu = random_general_channel(3, 2, 2, rng);
  const KrausChannel kc = KrausChannel::from_mixed_unitary(mu);
  CHECK(kc.unital());
  CHECK(th::approx_equal(kc.apply(rho).matrix(), mu.apply(rho).matrix(),
                         1e-10));
  CHECK_THROWS_AS(KrausChannel({identity(2) * 0.5}), PreconditionError);
  CHECK_THROWS_AS(KrausChannel(std::vector<ComplexMatrix>{}),
                  PreconditionError);
}

TEST_CASE("noise cost chain holds on random channels") {
  RngStream rng(204);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
    const int n_elems = 2 + static_cast<int>(rng.uniform_int(6));
    const MixedUnitaryChannel ch = random_general_channel(n_elems, 2, 2, rng);
    const NoiseCost cost = noise_costs(ch, rho);
    CHECK(cost.log_n >= cost.shannon - 1e-9);
    CHECK(cost.shannon >= cost.entropy_exchange - 2e-9);
    CHECK(cost.log_n == doctest::Approx(std::log2(double(n_elems))));
  }
}

TEST_CASE("noise cost constructor rejects a broken chain") {
  CHECK_THROWS_AS(NoiseCost(1.0, 1.5, 0.5), ContractViolation);
  CHECK_THROWS_AS(NoiseCost(1.0, 0.5, 0.8), ContractViolation);
  CHECK_NOTHROW(NoiseCost(1.0, 1.0, 1.0));
}

TEST_CASE("entropy exchange routes agree") {
  RngStream rng(205);
  for (int t = 0; t < 25; ++t) {
    const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
    const int n_elems = 2 + static_cast<int>(rng.uniform_int(15));
    const MixedUnitaryChannel ch =
        random_general_channel(n_elems, 2, 2, rng);
    const double gram = entropy_exchange(ch, rho);
    const double pur = entropy_exchange_via_purification(ch, rho);
    CHECK(std::abs(gram - pur) < 1e-8);
  }
}

TEST_CASE("entropy exchange of the z twirl on bell is one bit") {
  // The ensemble Gram matrix is diag(1/2, 1/2): the off-diagonal term
  // carries tr(Z_A rho_bell) = 0.
  CHECK(entropy_exchange(z_twirl(), bell_density()) == doctest::Approx(1.0));
  const NoiseCost cost = noise_costs(z_twirl(), bell_density());
  CHECK(cost.log_n == doctest::Approx(1.0));
  CHECK(cost.shannon == doctest::Approx(1.0));
  CHECK(cost.entropy_exchange == doctest::Approx(1.0));
}

TEST_CASE("phase family entropy exchange reads off the spectrum") {
  // On diag(0.8, 0.2) with B trivial, the two-phase ensemble
  // {1, diag(1, -1)} has W eigenvalues (0.8, 0.2).
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 0.2;
  const DensityMatrix rho(d, DimList{2, 1});
  const MixedUnitaryChannel ch =
      MixedUnitaryChannel::a_lur({0.5, 0.5}, {identity(2), pauli_z()}, 1);
  const double expect = -(0.8 * std::log2(0.8) + 0.2 * std::log2(0.2));
  CHECK(entropy_exchange(ch, rho) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("epsilon_decorrelates measures distance from the marginal product") {
  // Identity channel on bell: || bell - I/2 (x) I/2 ||_1 = 3/2.
  const auto r = epsilon_decorrelates(
      MixedUnitaryChannel::identity_channel(2, 2), bell_density());
  CHECK(r.achieved_eps == doctest::Approx(1.5));
  // Z twirl output against its own marginals: diag(1/2,0,0,1/2) vs I/4.
  const auto r2 = epsilon_decorrelates(z_twirl(), bell_density());
  CHECK(r2.achieved_eps == doctest::Approx(1.0));
  // Product states decorrelate at eps 0 under the identity.
  const ComplexMatrix half = identity(2) / 2.0;
  const DensityMatrix prod(tensor(half, half), DimList{2, 2});
  const auto r3 = epsilon_decorrelates(
      MixedUnitaryChannel::identity_channel(2, 2), prod);
  CHECK(r3.achieved_eps == doctest::Approx(0.0));
  // Explicit reference overrides the marginals.
  const auto r4 = epsilon_decorrelates(
      MixedUnitaryChannel::identity_channel(2, 2), prod, bell_density());
  CHECK(r4.achieved_eps == doctest::Approx(1.5));
}

TEST_CASE("ppt check on fixtures") {
  const auto bell = ppt_check(bell_density());
  CHECK_FALSE(bell.is_ppt);
  CHECK(bell.ppt_min_eig == doctest::Approx(-0.5));
  CHECK(bell.certified);

  // Werner states flip PPT exactly at p = 1/3.
  const auto sep = ppt_check(werner(1.0 / 3.0));
  CHECK(sep.is_ppt);
  CHECK(sep.ppt_min_eig == doctest::Approx(0.0));
  const auto ent = ppt_check(werner(0.4));
  CHECK_FALSE(ent.is_ppt);
  CHECK(ent.ppt_min_eig == doctest::Approx((1.0 - 3.0 * 0.4) / 4.0));

  // Certification stops past dimension six.
  RngStream rng(206);
  const auto big = ppt_check(random_induced_mixed(DimList{2, 4}, 0, rng));
  CHECK_FALSE(big.certified);
  const auto qutrit = ppt_check(random_induced_mixed(DimList{2, 3}, 0, rng));
  CHECK(qutrit.certified);
}

TEST_CASE("epsilon_disentangles composes apply and ppt") {
  const auto r = epsilon_disentangles(z_twirl(), bell_density());
  CHECK(r.is_ppt);
  CHECK(r.certified);
  CHECK(th::approx_equal(r.output.matrix(), bell_dephased().matrix(), 1e-12));
}

TEST_CASE("local instrument check on the bell state") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Instrument measure{{p0}, {p1}};
  const auto r = local_instrument_check(bell_density(), measure);
  CHECK(r.lhs == doctest::Approx(2.0));
  // Outcome states are product, so the averaged mutual information is 0.
  CHECK(r.rhs == doctest::Approx(0.0));
  CHECK(r.outcome_probs.size() == 2);
  CHECK(r.outcome_probs[0] == doctest::Approx(0.5));
  // Keeping the classical flag retains one bit of correlation.
  CHECK(r.flagged == doctest::Approx(1.0));
  CHECK(r.lhs >= r.rhs - 1e-9);
}

TEST_CASE("local instrument check rejects bad instruments") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  CHECK_THROWS_AS(local_instrument_check(bell_density(), Instrument{{p0}}),
                  ContractViolation);
  CHECK_THROWS_AS(local_instrument_check(bell_density(), Instrument{}),
                  PreconditionError);
  CHECK_THROWS_AS(
      local_instrument_check(
          DensityMatrix(identity(8) / 8.0, DimList{2, 2, 2}), Instrument{{p0}}),
      PreconditionError);
}

TEST_CASE("instrument averaging never raises mutual information") {
  RngStream rng(207);
  for (int t = 0; t < 25; ++t) {
    const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
    // Random two-outcome projective measurement on A.
    const ComplexMatrix u = random_unitary(2, rng);
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    const Instrument inst{{ComplexMatrix(u * p0 * u.adjoint())},
                          {ComplexMatrix(u * p1 * u.adjoint())}};
    const auto r = local_instrument_check(rho, inst);
    CHECK(r.lhs >= r.rhs - 1e-9);
    CHECK(r.flagged >= r.rhs - 1e-9);
  }
}

TEST_CASE("regrouped tensor power") {
  const DensityMatrix rho = bell_dephased();
  const DensityMatrix r2 = regrouped_tensor_power(rho, 2);
  CHECK(r2.dims() == DimList{4, 4});
  CHECK(r2.matrix().trace().real() == doctest::Approx(1.0));
  // Marginals of the regrouped power are the tensor powers of the marginals.
  const DensityMatrix a2 = reduced_state(r2, {0});
  const ComplexMatrix expect = tensor(reduced_state(rho, {0}).matrix(),
                                      reduced_state(rho, {0}).matrix());
  CHECK(th::approx_equal(a2.matrix(), expect, 1e-10));
  // k = 1 is the identity regrouping.
  CHECK(th::approx_equal(regrouped_tensor_power(rho, 1).matrix(), rho.matrix(),
                         1e-12));
}

TEST_CASE("erasure bounds on the z twirl") {
  const ErasureBounds b =
      entanglement_erasure_bounds(z_twirl(), bell_density(), 1);
  CHECK(b.s_in == doctest::Approx(0.0));
  CHECK(b.s_out == doctest::Approx(1.0));
  CHECK(b.s_e == doctest::Approx(1.0));
  CHECK(b.lower_hint == doctest::Approx(1.0));
  CHECK(b.s_e >= b.lower_hint - 1e-8);
}

}  // TEST_SUITE
