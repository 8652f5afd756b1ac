#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace plsga {

using Gene = std::uint32_t;

/// A chromosome: a set of selected column indices kept strictly increasing,
/// so two subsets are equal exactly when they select the same columns.
class VariableSubset {
 public:
  VariableSubset() = default;
  /// Sorts and removes duplicates.
  explicit VariableSubset(std::vector<Gene> genes);

  const std::vector<Gene>& genes() const noexcept { return genes_; }
  std::size_t size() const noexcept { return genes_.size(); }
  bool empty() const noexcept { return genes_.empty(); }
  bool contains(Gene g) const noexcept;

  /// Column indices widened for indexing into data matrices.
  std::vector<std::size_t> columns() const;

  /// Inclusion mask of length p.
  std::vector<bool> mask(std::size_t p) const;
  static VariableSubset from_mask(const std::vector<bool>& mask);

  /// 64-bit hash of the canonical gene list.
  std::uint64_t hash() const noexcept;

  friend bool operator==(const VariableSubset&, const VariableSubset&) = default;
  friend auto operator<=>(const VariableSubset& a, const VariableSubset& b) { return a.genes_ <=> b.genes_; }

 private:
  std::vector<Gene> genes_;
};

struct VariableSubsetHash {
  std::size_t operator()(const VariableSubset& s) const noexcept { return static_cast<std::size_t>(s.hash()); }
};

}  // namespace plsga
