#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace corrsim {

// Ordered subsystem dimensions of a tensor-factored space.
// Entries must be >= 1; the product is the ambient dimension.
class DimList {
 public:
  DimList() = default;
  DimList(std::initializer_list<int> dims);
  explicit DimList(std::vector<int> dims);

  int size() const { return static_cast<int>(dims_.size()); }
  int factor(int i) const;
  long long total() const;
  const std::vector<int>& factors() const { return dims_; }

  // Dimension of the subspace spanned by a strictly increasing set of
  // factor indices.
  long long total_of(const std::vector<int>& indices) const;

  // Complement of a strictly increasing index set, also strictly increasing.
  std::vector<int> complement(const std::vector<int>& indices) const;

  bool operator==(const DimList& other) const { return dims_ == other.dims_; }
  bool operator!=(const DimList& other) const { return dims_ != other.dims_; }

  // "2x2x3" style, for error messages and reports.
  std::string to_string() const;

 private:
  void validate() const;
  std::vector<int> dims_;
};

// Process-wide ambient-dimension cap (default 2^14). Set once at startup,
// before any computation; reads are lock-free.
int dim_cap();
void set_dim_cap(int cap);

// Throws DimensionCapError when d exceeds the cap; a non-positive d is a
// precondition failure.
void check_dim_cap(long long d, const char* context);

}  // namespace corrsim
