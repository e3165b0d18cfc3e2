#pragma once

#include <cstdint>
#include <random>

#include "corrsim/linalg.hpp"

namespace corrsim {

// Deterministic stream derived from (master seed, stream index), so sweeps
// can fan out to independent substreams that reproduce regardless of
// evaluation order. Gaussian variates use an internal Box-Muller pair cache.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0);

  std::uint64_t next_u64();
  double uniform();          // [0, 1)
  double normal();           // standard normal
  std::uint64_t uniform_int(std::uint64_t n);  // [0, n), rejection sampled
  Complex normal_complex();  // (normal + i*normal)/sqrt(2)

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Haar-distributed unitary via Ginibre QR with R-phase correction.
ComplexMatrix random_unitary(int d, RngStream& rng);

// Uniform unit vector (normalized complex Gaussian).
ComplexVector random_unit_vector(int d, RngStream& rng);

// Flat Dirichlet point on the d-simplex (normalized exponentials).
RealVector random_simplex_point(int d, RngStream& rng);

}  // namespace corrsim
