#include "entloc/system.hpp"

#include <algorithm>
#include <set>

namespace entloc {

namespace {
constexpr long kMaxTotalDim = 4096;
}

PartySystem::PartySystem(std::vector<std::string> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size() || labels_.empty())
    throw InvalidDimension("labels and dims must be nonempty lists of equal length");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw InvalidDimension("empty party label");
    if (!seen.insert(l).second) throw InvalidDimension("duplicate party label: " + l);
  }
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) throw InvalidDimension("local dimensions must be positive");
    total_ *= d;
    if (total_ > kMaxTotalDim) throw InvalidDimension("total dimension exceeds 4096");
  }
  strides_.assign(dims_.size(), 1);
  for (int i = static_cast<int>(dims_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * dims_[i + 1];
}

int PartySystem::position(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw UnknownParty("unknown party label: " + label);
}

bool PartySystem::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

long PartySystem::index_of(const std::vector<int>& digits) const {
  if (digits.size() != dims_.size()) throw InvalidDimension("digit count mismatch");
  long idx = 0;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims_[i]) throw InvalidDimension("digit out of range");
    idx += digits[i] * strides_[i];
  }
  return idx;
}

std::vector<int> PartySystem::digits_of(long index) const {
  if (index < 0 || index >= total_) throw InvalidDimension("index out of range");
  std::vector<int> digits(dims_.size());
  for (size_t i = 0; i < dims_.size(); ++i) {
    digits[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return digits;
}

Cut::Cut(const PartySystem& sys, std::vector<std::vector<std::string>> measured_groups)
    : sys_(sys) {
  if (measured_groups.empty()) throw InvalidCut("no measured groups");
  std::set<int> used;
  for (const auto& group : measured_groups) {
    if (group.empty()) throw InvalidCut("empty measured group");
    std::vector<int> positions;
    long dim = 1;
    for (const auto& label : group) {
      int pos = sys_.position(label);  // UnknownParty on bad label
      if (!used.insert(pos).second)
        throw InvalidCut("party appears twice across measured groups: " + label);
      positions.push_back(pos);
      dim *= sys_.dim(pos);
    }
    groups_.push_back(std::move(positions));
    group_dims_.push_back(dim);
    measured_total_ *= dim;
  }
  for (int p = 0; p < sys_.party_count(); ++p)
    if (!used.count(p)) residual_.push_back(p);
  if (residual_.empty()) throw InvalidCut("residual must be nonempty");
  residual_dim_ = 1;
  for (int p : residual_) residual_dim_ *= sys_.dim(p);

  // within-group and within-residual row-major strides, for digit scatter
  for (const auto& g : groups_) {
    std::vector<long> s(g.size(), 1);
    for (int i = static_cast<int>(g.size()) - 2; i >= 0; --i)
      s[i] = s[i + 1] * sys_.dim(g[i + 1]);
    group_digit_strides_.push_back(std::move(s));
  }
  residual_digit_strides_.assign(residual_.size(), 1);
  for (int i = static_cast<int>(residual_.size()) - 2; i >= 0; --i)
    residual_digit_strides_[i] = residual_digit_strides_[i + 1] * sys_.dim(residual_[i + 1]);
}

namespace {

// longest-match tokenization of concatenated party labels
std::vector<std::string> tokenize_labels(const PartySystem& sys, const std::string& text) {
  // sort candidate labels by length descending for the greedy match
  std::vector<std::string> labels = sys.labels();
  std::sort(labels.begin(), labels.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (const auto& l : labels) {
      if (text.compare(pos, l.size(), l) == 0) {
        out.push_back(l);
        pos += l.size();
        matched = true;
        break;
      }
    }
    if (!matched)
      throw UnknownParty("unrecognized party label near '" + text.substr(pos) + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    if (p == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

}  // namespace

Cut Cut::parse(const PartySystem& sys, const std::string& text) {
  if (text.empty()) throw InvalidCut("empty cut string");
  auto bar_parts = split(text, '|');
  if (bar_parts.size() > 2) throw InvalidCut("more than one '|' in cut: " + text);
  const std::string& measured_text = bar_parts[0];
  if (measured_text.empty()) throw InvalidCut("no measured side in cut: " + text);

  std::vector<std::vector<std::string>> groups;
  for (const auto& piece : split(measured_text, ':')) {
    if (piece.empty()) throw InvalidCut("empty measured group in cut: " + text);
    groups.push_back(tokenize_labels(sys, piece));
  }
  Cut cut(sys, groups);

  if (bar_parts.size() == 2) {
    if (bar_parts[1].empty()) throw InvalidCut("empty residual in cut: " + text);
    auto residual_labels = tokenize_labels(sys, bar_parts[1]);
    std::set<int> given;
    for (const auto& l : residual_labels)
      if (!given.insert(sys.position(l)).second)
        throw InvalidCut("party repeated in residual: " + l);
    std::set<int> actual(cut.residual_.begin(), cut.residual_.end());
    if (given != actual)
      throw InvalidCut("residual does not equal the complement of the measured groups: " + text);
  }
  return cut;
}

long Cut::full_index(const std::vector<long>& group_indices, long residual_index) const {
  if (group_indices.size() != groups_.size()) throw InvalidCut("group index count mismatch");
  long idx = 0;
  for (size_t g = 0; g < groups_.size(); ++g) {
    long mu = group_indices[g];
    if (mu < 0 || mu >= group_dims_[g]) throw InvalidCut("group index out of range");
    for (size_t j = 0; j < groups_[g].size(); ++j) {
      int party = groups_[g][j];
      long digit = (mu / group_digit_strides_[g][j]) % sys_.dim(party);
      idx += digit * sys_.stride(party);
    }
  }
  if (residual_index < 0 || residual_index >= residual_dim_)
    throw InvalidCut("residual index out of range");
  for (size_t j = 0; j < residual_.size(); ++j) {
    int party = residual_[j];
    long digit = (residual_index / residual_digit_strides_[j]) % sys_.dim(party);
    idx += digit * sys_.stride(party);
  }
  return idx;
}

std::string Cut::to_string() const {
  std::string out;
  for (size_t g = 0; g < groups_.size(); ++g) {
    if (g) out += ':';
    for (int p : groups_[g]) out += sys_.label(p);
  }
  out += '|';
  for (int p : residual_) out += sys_.label(p);
  return out;
}

}  // namespace entloc
