#include "corrsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace corrsim {

namespace {

// splitmix64 step; used only to mix (seed, index) into engine seed material.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t x = master_seed ^ (stream_index * 0x9e3779b97f4a7c15ULL + 1);
  std::seed_seq seq{
      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(x >> 32),
      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(x >> 32),
      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(x >> 32),
      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(x >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : engine_(make_engine(master_seed, stream_index)) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  // 53 high bits -> [0, 1), uniform on the dyadic grid.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1); avoids log(0).
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw PreconditionError("uniform_int: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Complex RngStream::normal_complex() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

ComplexMatrix random_unitary(int d, RngStream& rng) {
  check_dim_cap(d, "random_unitary");
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so the distribution is Haar rather than QR-convention biased.
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0) ? rjj / mag : Complex(1, 0);
  }
  return q;
}

ComplexVector random_unit_vector(int d, RngStream& rng) {
  check_dim_cap(d, "random_unit_vector");
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal_complex();
  const double n = v.norm();
  if (n == 0) return random_unit_vector(d, rng);
  return v / n;
}

RealVector random_simplex_point(int d, RngStream& rng) {
  if (d < 1) throw PreconditionError("random_simplex_point: d must be >= 1");
  RealVector p(d);
  double sum = 0;
  for (int i = 0; i < d; ++i) {
    p(i) = -std::log(1.0 - rng.uniform());
    sum += p(i);
  }
  return p / sum;
}

}  // namespace corrsim
