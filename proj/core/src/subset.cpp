#include "plsga/subset.hpp"

#include <algorithm>

#include "plsga/random.hpp"

namespace plsga {

VariableSubset::VariableSubset(std::vector<Gene> genes) : genes_(std::move(genes)) {
  std::sort(genes_.begin(), genes_.end());
  genes_.erase(std::unique(genes_.begin(), genes_.end()), genes_.end());
}

bool VariableSubset::contains(Gene g) const noexcept {
  return std::binary_search(genes_.begin(), genes_.end(), g);
}

std::vector<std::size_t> VariableSubset::columns() const {
  return {genes_.begin(), genes_.end()};
}

std::vector<bool> VariableSubset::mask(std::size_t p) const {
  std::vector<bool> m(p, false);
  for (Gene g : genes_) {
    m.at(g) = true;
  }
  return m;
}

VariableSubset VariableSubset::from_mask(const std::vector<bool>& mask) {
  std::vector<Gene> genes;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      genes.push_back(static_cast<Gene>(i));
    }
  }
  VariableSubset s;
  s.genes_ = std::move(genes);
  return s;
}

std::uint64_t VariableSubset::hash() const noexcept {
  std::uint64_t h = mix64(genes_.size());
  for (Gene g : genes_) {
    h = mix64(h ^ g);
  }
  return h;
}

}  // namespace plsga
