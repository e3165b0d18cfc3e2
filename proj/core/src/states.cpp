#include "corrsim/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrsim {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // log2(e)

double xlog2x(double x) { return (x < 1e-12) ? 0.0 : x * std::log2(x); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& id) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UnknownStateError("make_state: malformed parameter in id \"" + id + "\"");
  }
}

long long parse_int(const std::string& s, const std::string& id) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UnknownStateError("make_state: malformed parameter in id \"" + id + "\"");
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, DimList dims)
    : m_(std::move(m)), dims_(std::move(dims)) {
  if (m_.rows() != m_.cols())
    throw PreconditionError("DensityMatrix: matrix not square");
  if (dims_.size() == 0 || dims_.total() != m_.rows())
    throw PreconditionError("DensityMatrix: dims " + dims_.to_string() +
                            " do not match dimension " + std::to_string(m_.rows()));
  check_dim_cap(m_.rows(), "DensityMatrix");
  if (!is_hermitian(m_, 1e-10))
    throw PreconditionError("DensityMatrix: not Hermitian within 1e-10");
  m_ = 0.5 * (m_ + m_.adjoint());

  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw PreconditionError("DensityMatrix: trace " + std::to_string(tr) +
                            " not 1 within 1e-10");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("DensityMatrix: eigenvalue solver failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -1e-10)
    throw ContractViolation("DensityMatrix: eigenvalue " + std::to_string(min_eig) +
                            " below -1e-10");

  if (min_eig < 0) {
    // Clamp float-noise negatives to 0 and renormalize.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> full(m_);
    RealVector vals = full.eigenvalues().cwiseMax(0.0);
    vals /= vals.sum();
    m_ = full.eigenvectors() * vals.asDiagonal() * full.eigenvectors().adjoint();
    m_ = 0.5 * (m_ + m_.adjoint());
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    eigs_ = vals;
  } else {
    m_ /= tr;
    RealVector vals = solver.eigenvalues() / tr;
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    eigs_ = vals;
  }
}

DensityMatrix DensityMatrix::with_dims(DimList new_dims) const {
  if (new_dims.total() != dims_.total())
    throw PreconditionError("with_dims: total dimension mismatch");
  return DensityMatrix(m_, std::move(new_dims));
}

PureState::PureState(ComplexVector v, DimList dims)
    : v_(std::move(v)), dims_(std::move(dims)) {
  if (dims_.size() == 0 || dims_.total() != v_.size())
    throw PreconditionError("PureState: dims do not match vector length");
  check_dim_cap(v_.size(), "PureState");
  const double n = v_.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw PreconditionError("PureState: norm " + std::to_string(n) +
                            " not 1 within 1e-10");
  v_ /= n;
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix(v_ * v_.adjoint(), dims_);
}

PureState PureState::with_dims(DimList new_dims) const {
  if (new_dims.total() != dims_.total())
    throw PreconditionError("with_dims: total dimension mismatch");
  return PureState(v_, std::move(new_dims));
}

int SchmidtForm::rank(double tol) const {
  int r = 0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i)
    if (coefficients(i) > tol) ++r;
  return r;
}

double shannon_entropy(const RealVector& p) {
  double h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -1e-12)
      throw PreconditionError("shannon_entropy: negative probability");
    h -= xlog2x(p(i));
  }
  return h;
}

double binary_entropy(double p) {
  if (p < -1e-12 || p > 1 + 1e-12)
    throw PreconditionError("binary_entropy: p outside [0, 1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return shannon_entropy(rho.eigenvalues());
}

DensityMatrix reduced_state(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw IndexError("reduced_state: keep set must be nonempty");
  std::vector<int> kept_dims;
  for (int i : keep) kept_dims.push_back(rho.dims().factor(i));
  return DensityMatrix(partial_trace(rho.matrix(), rho.dims(), keep),
                       DimList(kept_dims));
}

namespace {

// Entropy of the reduced state on `part`; 0 for the empty part.
double entropy_of_part(const DensityMatrix& rho, const std::vector<int>& part) {
  if (part.empty()) return 0.0;
  if (static_cast<int>(part.size()) == rho.dims().size())
    return von_neumann_entropy(rho);
  return von_neumann_entropy(reduced_state(rho, part));
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> u = a;
  u.insert(u.end(), b.begin(), b.end());
  std::sort(u.begin(), u.end());
  return u;
}

void require_partition(const DimList& dims, std::vector<std::vector<int>> parts,
                       const char* what) {
  std::vector<int> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i) {
    if (all[i] < 0 || all[i] >= dims.size())
      throw IndexError(std::string(what) + ": subsystem index out of range");
    if (i > 0 && all[i] == all[i - 1])
      throw IndexError(std::string(what) + ": subsystem index repeated");
  }
  if (static_cast<int>(all.size()) != dims.size())
    throw IndexError(std::string(what) + ": grouping must cover all subsystems");
}

}  // namespace

double mutual_information(const DensityMatrix& rho, const std::vector<int>& side_a) {
  if (side_a.empty() || static_cast<int>(side_a.size()) >= rho.dims().size())
    throw IndexError("mutual_information: cut must split into two nonempty sides");
  const auto side_b = rho.dims().complement(side_a);  // validates side_a too
  const double value = entropy_of_part(rho, side_a) + entropy_of_part(rho, side_b) -
                       von_neumann_entropy(rho);
  if (value < -1e-9)
    throw ContractViolation("mutual_information: value " + std::to_string(value) +
                            " below -1e-9");
  return std::max(value, 0.0);
}

double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& c) {
  if (a.empty() || c.empty())
    throw IndexError("conditional_mutual_information: a and c must be nonempty");
  require_partition(rho.dims(), {a, b, c}, "conditional_mutual_information");
  const auto ab = sorted_union(a, b);
  const auto bc = sorted_union(b, c);
  return entropy_of_part(rho, ab) + entropy_of_part(rho, bc) -
         von_neumann_entropy(rho) - entropy_of_part(rho, b);
}

SchmidtForm schmidt(const PureState& psi, const std::vector<int>& side_a) {
  const DimList& dims = psi.dims();
  if (side_a.empty() || static_cast<int>(side_a.size()) >= dims.size())
    throw IndexError("schmidt: cut must split into two nonempty sides");
  const auto side_b = dims.complement(side_a);

  // Bring side_a factors to the front, then reshape to a dA x dB matrix.
  std::vector<int> perm = side_a;
  perm.insert(perm.end(), side_b.begin(), side_b.end());
  const ComplexVector v = permute_systems(psi.vector(), dims, perm);
  const long long da = dims.total_of(side_a);
  const long long db = dims.total_of(side_b);
  ComplexMatrix coeff(da, db);
  for (long long i = 0; i < da; ++i)
    for (long long j = 0; j < db; ++j) coeff(i, j) = v(i * db + j);

  Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtForm out;
  const RealVector sv = svd.singularValues();
  out.coefficients = sv.cwiseProduct(sv);
  out.left_basis = svd.matrixU();
  out.right_basis = svd.matrixV().conjugate();
  return out;
}

double entanglement_entropy(const PureState& psi, const std::vector<int>& side_a) {
  return shannon_entropy(schmidt(psi, side_a).coefficients);
}

PureState purify(const DensityMatrix& rho) {
  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  const int d = rho.dim();
  check_dim_cap(static_cast<long long>(d) * d, "purify");
  ComplexVector v = ComplexVector::Zero(static_cast<long long>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double lam = std::max(es.values(i), 0.0);
    if (lam < 1e-15) continue;
    v.segment(static_cast<long long>(i) * d, d) = std::sqrt(lam) * es.vectors.col(i);
  }
  std::vector<int> dims_out{d};
  for (int i = 0; i < rho.dims().size(); ++i) dims_out.push_back(rho.dims().factor(i));
  return PureState(std::move(v), DimList(dims_out));
}

double eta(double x) {
  if (x < 0) throw PreconditionError("eta: negative argument");
  constexpr double inv_e = 1.0 / 2.718281828459045;
  if (x >= inv_e) return inv_e * kLog2E;
  return -xlog2x(x);
}

double fannes_bound(double eps, double log_dim) {
  return eps * log_dim + eta(eps);
}

PureState random_haar_pure(const DimList& dims, RngStream& rng) {
  return PureState(random_unit_vector(static_cast<int>(dims.total()), rng), dims);
}

DensityMatrix random_induced_mixed(const DimList& dims, int ancilla_dim, RngStream& rng) {
  const int d = static_cast<int>(dims.total());
  const int k = (ancilla_dim == 0) ? d : ancilla_dim;
  if (k < 1) throw PreconditionError("random_induced_mixed: ancilla_dim must be >= 1");
  // G is d x k Ginibre; G G^dagger / tr is the induced-measure state.
  ComplexMatrix g(d, k);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = rng.normal_complex();
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m), dims);
}

DensityMatrix random_diagonal(const DimList& dims, RngStream& rng) {
  const int d = static_cast<int>(dims.total());
  const RealVector p = random_simplex_point(d, rng);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = p(i);
  return DensityMatrix(std::move(m), dims);
}

DensityMatrix random_state(const std::string& kind, const DimList& dims,
                           std::uint64_t seed) {
  RngStream rng(seed);
  if (kind == "haar_pure") return random_haar_pure(dims, rng).to_density();
  if (kind == "induced_mixed") return random_induced_mixed(dims, 0, rng);
  if (kind == "diagonal") return random_diagonal(dims, rng);
  throw UnknownStateError("random_state: unknown kind \"" + kind + "\"");
}

PureState bell_pure() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), DimList{2, 2});
}

DensityMatrix bell_density() { return bell_pure().to_density(); }

DensityMatrix bell_dephased() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  return DensityMatrix(std::move(m), DimList{2, 2});
}

PureState ghz3_pure() {
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), DimList{2, 2, 2});
}

DensityMatrix werner(double p) {
  if (p < 0 || p > 1) throw PreconditionError("werner: p outside [0, 1]");
  ComplexMatrix m = p * bell_density().matrix() +
                    (1.0 - p) * 0.25 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix(std::move(m), DimList{2, 2});
}

DensityMatrix make_state(const std::string& id) {
  if (id == "bell") return bell_density();
  if (id == "bell_dephased") return bell_dephased();
  if (id == "ghz3") return ghz3_pure().to_density();
  if (id.rfind("werner:", 0) == 0) {
    const double p = parse_double(id.substr(7), id);
    if (p < 0 || p > 1)
      throw UnknownStateError("make_state: werner parameter outside [0, 1]");
    return werner(p);
  }
  if (id.rfind("haar:", 0) == 0) {
    const auto parts = split(id.substr(5), ':');
    if (parts.size() != 2)
      throw UnknownStateError("make_state: expected haar:dA,dB:seed in \"" + id + "\"");
    const auto dims_part = split(parts[0], ',');
    if (dims_part.size() != 2)
      throw UnknownStateError("make_state: expected haar:dA,dB:seed in \"" + id + "\"");
    const long long da = parse_int(dims_part[0], id);
    const long long db = parse_int(dims_part[1], id);
    const long long seed = parse_int(parts[1], id);
    if (da < 2 || db < 2)
      throw UnknownStateError("make_state: haar factors must be >= 2");
    RngStream rng(static_cast<std::uint64_t>(seed));
    return random_haar_pure(DimList{static_cast<int>(da), static_cast<int>(db)}, rng)
        .to_density();
  }
  if (id.rfind("diag:", 0) == 0) {
    const auto entries = split(id.substr(5), ',');
    if (entries.size() < 2)
      throw UnknownStateError("make_state: diag needs at least two entries");
    RealVector p(entries.size());
    double sum = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
      p(i) = parse_double(entries[i], id);
      if (p(i) < 0) throw UnknownStateError("make_state: diag entries must be >= 0");
      sum += p(i);
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw UnknownStateError("make_state: diag entries must sum to 1");
    ComplexMatrix m = ComplexMatrix::Zero(p.size(), p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) m(i, i) = p(i) / sum;
    return DensityMatrix(std::move(m), DimList{static_cast<int>(p.size())});
  }
  throw UnknownStateError("make_state: unknown state id \"" + id + "\"");
}

PureState make_pure_state(const std::string& id) {
  if (id == "bell") return bell_pure();
  if (id == "ghz3") return ghz3_pure();
  if (id.rfind("haar:", 0) == 0) {
    const auto parts = split(id.substr(5), ':');
    if (parts.size() != 2)
      throw UnknownStateError("make_pure_state: expected haar:dA,dB:seed");
    const auto dims_part = split(parts[0], ',');
    if (dims_part.size() != 2)
      throw UnknownStateError("make_pure_state: expected haar:dA,dB:seed");
    const long long da = parse_int(dims_part[0], id);
    const long long db = parse_int(dims_part[1], id);
    const long long seed = parse_int(parts[1], id);
    if (da < 2 || db < 2)
      throw UnknownStateError("make_pure_state: haar factors must be >= 2");
    RngStream rng(static_cast<std::uint64_t>(seed));
    return random_haar_pure(DimList{static_cast<int>(da), static_cast<int>(db)}, rng);
  }
  throw UnknownStateError("make_pure_state: \"" + id + "\" is not a pure fixture");
}

}  // namespace corrsim
