#include "corrsim/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

namespace corrsim {

namespace {

std::atomic<int> g_dim_cap{1 << 14};

std::string dim_string(long long r, long long c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

// Row strides of each factor: stride[i] = product of dims after i.
std::vector<long long> strides_of(const DimList& dims) {
  std::vector<long long> s(dims.size());
  long long acc = 1;
  for (int i = dims.size() - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims.factor(i);
  }
  return s;
}

// Composite indices of the sublattice spanned by `indices`, ordered
// lexicographically by those factors, expressed in the ambient space.
std::vector<long long> sublattice_offsets(const DimList& dims,
                                          const std::vector<int>& indices) {
  const auto strides = strides_of(dims);
  std::vector<long long> offsets{0};
  for (int f : indices) {
    std::vector<long long> next;
    next.reserve(offsets.size() * dims.factor(f));
    for (long long base : offsets)
      for (int k = 0; k < dims.factor(f); ++k) next.push_back(base + k * strides[f]);
    offsets = std::move(next);
  }
  return offsets;
}

void require_strictly_increasing(const std::vector<int>& indices, int bound,
                                 const char* what) {
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= bound)
      throw IndexError(std::string(what) + ": index out of range");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw IndexError(std::string(what) + ": indices must be strictly increasing");
  }
}

}  // namespace

DimList::DimList(std::initializer_list<int> dims) : dims_(dims) { validate(); }
DimList::DimList(std::vector<int> dims) : dims_(std::move(dims)) { validate(); }

void DimList::validate() const {
  long long prod = 1;
  for (int d : dims_) {
    if (d < 1) throw PreconditionError("DimList: factors must be >= 1");
    prod *= d;
    if (prod > (1LL << 40)) throw PreconditionError("DimList: product overflow");
  }
}

int DimList::factor(int i) const {
  if (i < 0 || i >= size()) throw IndexError("DimList::factor: index out of range");
  return dims_[i];
}

long long DimList::total() const {
  long long prod = 1;
  for (int d : dims_) prod *= d;
  return prod;
}

long long DimList::total_of(const std::vector<int>& indices) const {
  require_strictly_increasing(indices, size(), "DimList::total_of");
  long long prod = 1;
  for (int i : indices) prod *= factor(i);
  return prod;
}

std::vector<int> DimList::complement(const std::vector<int>& indices) const {
  require_strictly_increasing(indices, size(), "DimList::complement");
  std::vector<int> out;
  size_t j = 0;
  for (int i = 0; i < size(); ++i) {
    if (j < indices.size() && indices[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::string DimList::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << "x";
    os << dims_[i];
  }
  return os.str();
}

int dim_cap() { return g_dim_cap.load(std::memory_order_relaxed); }

void set_dim_cap(int cap) {
  if (cap < 2) throw PreconditionError("set_dim_cap: cap must be >= 2");
  g_dim_cap.store(cap, std::memory_order_relaxed);
}

void check_dim_cap(long long d, const char* context) {
  if (d <= 0) throw PreconditionError(std::string(context) + ": non-positive dimension");
  if (d > dim_cap()) {
    std::ostringstream os;
    os << context << ": dimension " << d << " exceeds cap " << dim_cap();
    throw DimensionCapError(os.str());
  }
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const long long rows = static_cast<long long>(a.rows()) * b.rows();
  const long long cols = static_cast<long long>(a.cols()) * b.cols();
  check_dim_cap(rows, "tensor");
  check_dim_cap(cols, "tensor");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw PreconditionError("tensor: empty factor list");
  ComplexMatrix out = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  const long long rows = static_cast<long long>(a.size()) * b.size();
  check_dim_cap(rows, "tensor");
  ComplexVector out(rows);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw PreconditionError("partial_trace: matrix not square");
  if (m.rows() != dims.total())
    throw PreconditionError("partial_trace: dims " + dims.to_string() +
                            " do not match matrix " + dim_string(m.rows(), m.cols()));
  require_strictly_increasing(keep, dims.size(), "partial_trace");

  const auto traced = dims.complement(keep);
  const auto keep_off = sublattice_offsets(dims, keep);
  const auto traced_off = sublattice_offsets(dims, traced);
  const long long dk = static_cast<long long>(keep_off.size());

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long long a = 0; a < dk; ++a)
    for (long long b = 0; b < dk; ++b) {
      Complex acc = 0;
      for (long long t : traced_off) acc += m(keep_off[a] + t, keep_off[b] + t);
      out(a, b) = acc;
    }
  return out;
}

namespace {

std::vector<long long> permutation_index_map(const DimList& dims,
                                             const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != dims.size())
    throw PreconditionError("permute_systems: permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= dims.size() || seen[p])
      throw PreconditionError("permute_systems: not a permutation");
    seen[p] = true;
  }
  const auto old_strides = strides_of(dims);
  std::vector<int> new_dims(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims.factor(perm[i]);

  const long long total = dims.total();
  std::vector<long long> map(total);
  std::vector<int> idx(perm.size(), 0);
  for (long long x = 0; x < total; ++x) {
    long long old_index = 0;
    for (size_t i = 0; i < perm.size(); ++i)
      old_index += static_cast<long long>(idx[i]) * old_strides[perm[i]];
    map[x] = old_index;
    for (int i = static_cast<int>(perm.size()) - 1; i >= 0; --i) {
      if (++idx[i] < new_dims[i]) break;
      idx[i] = 0;
    }
  }
  return map;
}

}  // namespace

ComplexMatrix permute_systems(const ComplexMatrix& m, const DimList& dims,
                              const std::vector<int>& perm) {
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw PreconditionError("permute_systems: dims do not match matrix");
  const auto map = permutation_index_map(dims, perm);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

ComplexVector permute_systems(const ComplexVector& v, const DimList& dims,
                              const std::vector<int>& perm) {
  if (v.size() != dims.total())
    throw PreconditionError("permute_systems: dims do not match vector");
  const auto map = permutation_index_map(dims, perm);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(map[i]);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimList& dims,
                                const std::vector<int>& which) {
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw PreconditionError("partial_transpose: dims do not match matrix");
  require_strictly_increasing(which, dims.size(), "partial_transpose");
  const auto strides = strides_of(dims);

  std::vector<bool> flip(dims.size(), false);
  for (int f : which) flip[f] = true;

  const long long total = dims.total();
  ComplexMatrix out(total, total);
  std::vector<int> ri(dims.size()), ci(dims.size());
  for (long long r = 0; r < total; ++r) {
    long long rr = r;
    for (int f = 0; f < dims.size(); ++f) {
      ri[f] = static_cast<int>(rr / strides[f]);
      rr %= strides[f];
    }
    for (long long c = 0; c < total; ++c) {
      long long cc = c;
      for (int f = 0; f < dims.size(); ++f) {
        ci[f] = static_cast<int>(cc / strides[f]);
        cc %= strides[f];
      }
      long long r2 = 0, c2 = 0;
      for (int f = 0; f < dims.size(); ++f) {
        r2 += static_cast<long long>(flip[f] ? ci[f] : ri[f]) * strides[f];
        c2 += static_cast<long long>(flip[f] ? ri[f] : ci[f]) * strides[f];
      }
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw PreconditionError("hermitian_eigensystem: matrix not square");
  if (!is_hermitian(m, 1e-10))
    throw ContractViolation("hermitian_eigensystem: input not Hermitian within 1e-10");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("hermitian_eigensystem: solver failed to converge");

  const RealVector asc = solver.eigenvalues();
  const ComplexMatrix vec = solver.eigenvectors();
  const int n = static_cast<int>(asc.size());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return asc(a) > asc(b); });

  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = asc(order[k]);
    ComplexVector col = vec.col(order[k]);
    for (int i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-8) {
        col *= std::conj(col(i)) / std::abs(col(i));
        break;
      }
    }
    out.vectors.col(k) = col;
  }
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() == m.cols() && is_hermitian(m, 1e-10)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw ContractViolation("trace_norm: eigenvalue solver failed");
    return solver.eigenvalues().cwiseAbs().sum();
  }
  if (std::max(m.rows(), m.cols()) <= 256) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

bool operator_in_interval(const ComplexMatrix& x, const ComplexMatrix& lo,
                          const ComplexMatrix& hi, double tol) {
  if (x.rows() != x.cols() || lo.rows() != x.rows() || lo.cols() != x.cols() ||
      hi.rows() != x.rows() || hi.cols() != x.cols())
    throw PreconditionError("operator_in_interval: dimension mismatch");
  auto min_eig = [](const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw ContractViolation("operator_in_interval: eigenvalue solver failed");
    return solver.eigenvalues().minCoeff();
  };
  return min_eig(x - lo) >= -tol && min_eig(hi - x) >= -tol;
}

ComplexMatrix conjugate_factor_a(const ComplexMatrix& m, const ComplexMatrix& f,
                                 int dim_b) {
  if (f.rows() != f.cols()) throw PreconditionError("conjugate_factor_a: f not square");
  const int da = static_cast<int>(f.rows());
  if (m.rows() != m.cols() || m.rows() != static_cast<long long>(da) * dim_b)
    throw PreconditionError("conjugate_factor_a: dimension mismatch");
  const long long d = m.rows();
  // t = (f (x) 1) m: mix row-blocks of size dim_b.
  ComplexMatrix t = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < da; ++k) {
      if (f(i, k) == Complex(0, 0)) continue;
      t.middleRows(static_cast<long long>(i) * dim_b, dim_b) +=
          f(i, k) * m.middleRows(static_cast<long long>(k) * dim_b, dim_b);
    }
  // out = t (f^dagger (x) 1): mix column-blocks.
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < da; ++j)
    for (int l = 0; l < da; ++l) {
      const Complex w = std::conj(f(j, l));
      if (w == Complex(0, 0)) continue;
      out.middleCols(static_cast<long long>(j) * dim_b, dim_b) +=
          w * t.middleCols(static_cast<long long>(l) * dim_b, dim_b);
    }
  return out;
}

ComplexMatrix conjugate_factor_b(const ComplexMatrix& m, int dim_a,
                                 const ComplexMatrix& f) {
  if (f.rows() != f.cols()) throw PreconditionError("conjugate_factor_b: f not square");
  const int db = static_cast<int>(f.rows());
  if (m.rows() != m.cols() || m.rows() != static_cast<long long>(dim_a) * db)
    throw PreconditionError("conjugate_factor_b: dimension mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  const ComplexMatrix fdag = f.adjoint();
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      out.block(static_cast<long long>(i) * db, static_cast<long long>(j) * db, db, db) =
          f *
          m.block(static_cast<long long>(i) * db, static_cast<long long>(j) * db, db, db) *
          fdag;
  return out;
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix identity(int d) {
  check_dim_cap(d, "identity");
  return ComplexMatrix::Identity(d, d);
}

}  // namespace corrsim
