#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bogo {

enum class Field { phi, phi_tilde };

// A finite set of wavevector labels shared by the two fields, together with
// the per-slot occupation cutoff of the truncated Fock space.
//
// Slot order is canonical: all phi modes first, then all phi-tilde modes, so
// slot(Field::phi_tilde, k) == mode_count() + k. Basis states are indexed in
// mixed radix (cutoff+1) with slot 0 the most significant digit.
class ModeSet {
 public:
  static constexpr std::size_t kDefaultDimensionBudget = 4'000'000;

  ModeSet(std::vector<double> labels, int cutoff,
          std::size_t dimension_budget = kDefaultDimensionBudget);

  const std::vector<double>& labels() const { return labels_; }
  std::size_t mode_count() const { return labels_.size(); }
  std::size_t slot_count() const { return 2 * labels_.size(); }
  int cutoff() const { return cutoff_; }
  std::size_t local_dimension() const { return static_cast<std::size_t>(cutoff_) + 1; }
  std::size_t dimension() const { return dimension_; }
  std::size_t dimension_budget() const { return budget_; }

  std::size_t slot(Field field, std::size_t mode) const;
  std::size_t stride(std::size_t slot) const { return strides_[slot]; }

  std::vector<int> occupations(std::size_t index) const;
  int occupation(std::size_t index, std::size_t slot) const {
    return static_cast<int>((index / strides_[slot]) % local_dimension());
  }
  std::size_t index(std::span<const int> occupations) const;

  ModeSet with_cutoff(int cutoff) const { return ModeSet(labels_, cutoff, budget_); }
  bool same_labels(const ModeSet& other) const { return labels_ == other.labels_; }

  bool operator==(const ModeSet& other) const {
    return labels_ == other.labels_ && cutoff_ == other.cutoff_;
  }

 private:
  std::vector<double> labels_;
  int cutoff_;
  std::size_t budget_;
  std::size_t dimension_;
  std::vector<std::size_t> strides_;
};

// Basis indices whose every slot occupation is at most cutoff - margin.
// Quadratic operators act exactly on this subspace when margin >= 2.
std::vector<std::size_t> interior_indices(const ModeSet& modes, int margin = 2);

// Basis indices with n_k + n~_k <= cutoff for every mode k. The cross-field
// observable and every number-conserving pair operator leave this subspace
// invariant, so its spectrum there is free of truncation artifacts.
std::vector<std::size_t> closed_sector_indices(const ModeSet& modes);

// Basis indices with at least one slot at the cutoff.
std::vector<std::size_t> boundary_indices(const ModeSet& modes);

}  // namespace bogo
