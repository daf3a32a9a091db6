#include "bogo/modes.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "bogo/error.hpp"

namespace bogo {

ModeSet::ModeSet(std::vector<double> labels, int cutoff, std::size_t dimension_budget)
    : labels_(std::move(labels)), cutoff_(cutoff), budget_(dimension_budget) {
  if (labels_.empty()) throw ValidationError("mode set needs at least one label");
  if (cutoff_ < 1) throw ValidationError(fmt::format("cutoff must be >= 1, got {}", cutoff_));
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("mode labels must be distinct");

  const std::size_t local = local_dimension();
  const std::size_t slots = slot_count();
  strides_.assign(slots, 1);
  std::size_t dim = 1;
  for (std::size_t s = slots; s-- > 0;) {
    strides_[s] = dim;
    if (dim > budget_ / local)
      throw ValidationError(fmt::format(
          "Fock dimension ({}+1)^{} exceeds the dimension budget {}", cutoff_, slots, budget_));
    dim *= local;
  }
  dimension_ = dim;
}

std::size_t ModeSet::slot(Field field, std::size_t mode) const {
  if (mode >= mode_count())
    throw ValidationError(fmt::format("mode index {} out of range ({} modes)", mode, mode_count()));
  return field == Field::phi ? mode : mode_count() + mode;
}

std::vector<int> ModeSet::occupations(std::size_t index) const {
  std::vector<int> occ(slot_count());
  for (std::size_t s = 0; s < occ.size(); ++s) occ[s] = occupation(index, s);
  return occ;
}

std::size_t ModeSet::index(std::span<const int> occupations) const {
  if (occupations.size() != slot_count())
    throw ValidationError("occupation vector does not match the slot count");
  std::size_t idx = 0;
  for (std::size_t s = 0; s < occupations.size(); ++s) {
    if (occupations[s] < 0 || occupations[s] > cutoff_)
      throw ValidationError(fmt::format("occupation {} outside [0, {}]", occupations[s], cutoff_));
    idx += static_cast<std::size_t>(occupations[s]) * strides_[s];
  }
  return idx;
}

namespace {

template <class Pred>
std::vector<std::size_t> select_indices(const ModeSet& modes, Pred&& keep) {
  std::vector<std::size_t> out;
  std::vector<int> occ(modes.slot_count());
  for (std::size_t i = 0; i < modes.dimension(); ++i) {
    for (std::size_t s = 0; s < occ.size(); ++s) occ[s] = modes.occupation(i, s);
    if (keep(occ)) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> interior_indices(const ModeSet& modes, int margin) {
  const int limit = modes.cutoff() - margin;
  return select_indices(modes, [limit](const std::vector<int>& occ) {
    return std::all_of(occ.begin(), occ.end(), [limit](int n) { return n <= limit; });
  });
}

std::vector<std::size_t> closed_sector_indices(const ModeSet& modes) {
  const std::size_t m = modes.mode_count();
  const int c = modes.cutoff();
  return select_indices(modes, [m, c](const std::vector<int>& occ) {
    for (std::size_t k = 0; k < m; ++k)
      if (occ[k] + occ[m + k] > c) return false;
    return true;
  });
}

std::vector<std::size_t> boundary_indices(const ModeSet& modes) {
  const int c = modes.cutoff();
  return select_indices(modes, [c](const std::vector<int>& occ) {
    return std::any_of(occ.begin(), occ.end(), [c](int n) { return n == c; });
  });
}

}  // namespace bogo
