#pragma once
// Party bookkeeping: labeled tensor factors, row-major digit indexing, cuts.

#include <string>
#include <vector>

#include "entloc/common.hpp"

namespace entloc {

// An ordered list of labeled parties with local dimensions. Basis index is
// the row-major digit string over the party order (first party varies
// slowest), matching the |ijk...> ket convention with 0-based digits.
class PartySystem {
 public:
  PartySystem(std::vector<std::string> labels, std::vector<int> dims);

  int party_count() const { return static_cast<int>(dims_.size()); }
  long total_dim() const { return total_; }
  int dim(int pos) const { return dims_.at(pos); }
  const std::string& label(int pos) const { return labels_.at(pos); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  long stride(int pos) const { return strides_.at(pos); }

  // Throws UnknownParty.
  int position(const std::string& label) const;
  bool has_label(const std::string& label) const;

  long index_of(const std::vector<int>& digits) const;
  std::vector<int> digits_of(long index) const;

  bool operator==(const PartySystem& o) const {
    return labels_ == o.labels_ && dims_ == o.dims_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  std::vector<long> strides_;
  long total_ = 0;
};

// A cut: ordered disjoint measured groups plus the (nonempty) residual.
// Group party order follows the order given at construction; residual
// parties stay in system order. Carries its own copy of the system.
class Cut {
 public:
  Cut(const PartySystem& sys, std::vector<std::vector<std::string>> measured_groups);

  // Grammar: "A:B|CD" - colons split measured groups, '|' separates the
  // residual (optional; when present it must spell out the complement).
  // Concatenated labels form one group; tokenization is longest-match.
  static Cut parse(const PartySystem& sys, const std::string& text);

  const PartySystem& system() const { return sys_; }
  int group_count() const { return static_cast<int>(groups_.size()); }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  const std::vector<int>& residual() const { return residual_; }
  long group_dim(int g) const { return group_dims_.at(g); }
  const std::vector<long>& group_dims() const { return group_dims_; }
  long measured_dim() const { return measured_total_; }
  long residual_dim() const { return residual_dim_; }
  bool two_block() const { return groups_.size() == 1; }

  // Full basis index from per-group joint indices and a residual index.
  long full_index(const std::vector<long>& group_indices, long residual_index) const;

  std::string to_string() const;

 private:
  PartySystem sys_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> residual_;
  std::vector<long> group_dims_;
  long measured_total_ = 1;
  long residual_dim_ = 1;
  // per party: strides for digit scatter into the full index
  std::vector<std::vector<long>> group_digit_strides_;  // within-group, row-major
  std::vector<long> residual_digit_strides_;
};

}  // namespace entloc
