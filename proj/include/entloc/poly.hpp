#pragma once
// Multihomogeneous polynomials over complex floats or exact Gaussian
// rationals. Variables are grouped (one group per measured factor); every
// term's per-group degree equals the stated multidegree.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "entloc/common.hpp"

namespace entloc {

using BigRational = boost::multiprecision::cpp_rational;

struct GaussianRational {
  BigRational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}
  static GaussianRational integer(long v) { return {BigRational(v), BigRational(0)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Cx to_cx() const { return {static_cast<double>(re), static_cast<double>(im)}; }

  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
};

namespace detail {
inline bool coeff_is_zero(const Cx& c) { return c == Cx(0.0, 0.0); }
inline bool coeff_is_zero(const GaussianRational& c) { return c.is_zero(); }
inline Cx coeff_to_cx(const Cx& c) { return c; }
inline Cx coeff_to_cx(const GaussianRational& c) { return c.to_cx(); }
inline double coeff_abs(const Cx& c) { return std::abs(c); }
}  // namespace detail

template <class K>
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint16_t>;
  using TermMap = std::map<Exponents, K>;

  MultiPoly() = default;
  MultiPoly(std::vector<int> group_sizes, std::vector<int> multidegree)
      : group_sizes_(std::move(group_sizes)), multidegree_(std::move(multidegree)) {
    if (group_sizes_.size() != multidegree_.size())
      throw InvalidForm("group/multidegree length mismatch");
  }

  static MultiPoly zero(std::vector<int> group_sizes, std::vector<int> multidegree) {
    return MultiPoly(std::move(group_sizes), std::move(multidegree));
  }

  const std::vector<int>& group_sizes() const { return group_sizes_; }
  const std::vector<int>& multidegree() const { return multidegree_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int var_count() const { return std::accumulate(group_sizes_.begin(), group_sizes_.end(), 0); }

  // var offset of group g in the concatenated exponent vector
  int group_offset(int g) const {
    int off = 0;
    for (int h = 0; h < g; ++h) off += group_sizes_[h];
    return off;
  }

  void add_term(const Exponents& e, const K& c) {
    if (detail::coeff_is_zero(c)) return;
    check_exponents(e);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly operator+(const MultiPoly& o) const {
    require_same_shape(o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  MultiPoly operator-(const MultiPoly& o) const {
    require_same_shape(o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  MultiPoly operator*(const MultiPoly& o) const {
    if (group_sizes_ != o.group_sizes_) throw InvalidForm("variable group mismatch");
    std::vector<int> deg(multidegree_.size());
    for (size_t g = 0; g < deg.size(); ++g) deg[g] = multidegree_[g] + o.multidegree_[g];
    MultiPoly r(group_sizes_, deg);
    const int n = var_count();
    Exponents e(n);
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        for (int v = 0; v < n; ++v) e[v] = static_cast<std::uint16_t>(ea[v] + eb[v]);
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MultiPoly scaled(const K& s) const {
    MultiPoly r(group_sizes_, multidegree_);
    if (detail::coeff_is_zero(s)) return r;
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  // Holomorphic partial derivative; lowers the variable's group degree.
  MultiPoly derivative(int var) const {
    int g = group_of(var);
    std::vector<int> deg = multidegree_;
    deg[g] = deg[g] > 0 ? deg[g] - 1 : 0;
    MultiPoly r(group_sizes_, deg);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      K scaled = c;
      for (int rep = 1; rep < e[var]; ++rep) scaled += c;  // multiply by the integer exponent
      r.add_term(d, scaled);
    }
    return r;
  }

  // Evaluation at complex blocks (one vector per group, concatenated order).
  Cx evaluate(const std::vector<VectorXcd>& blocks) const {
    std::vector<Cx> flat;
    flat.reserve(var_count());
    for (const auto& b : blocks)
      for (long i = 0; i < b.size(); ++i) flat.push_back(b[i]);
    if (static_cast<int>(flat.size()) != var_count())
      throw InvalidForm("evaluation point size mismatch");
    Cx acc(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
      Cx m = detail::coeff_to_cx(c);
      for (size_t v = 0; v < flat.size(); ++v)
        for (int rep = 0; rep < e[v]; ++rep) m *= flat[v];
      acc += m;
    }
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(detail::coeff_to_cx(c)));
    return m;
  }

  // Drops float coefficients below rel * max|coeff| (no-op shape otherwise).
  void prune(double rel) {
    if constexpr (std::is_same_v<K, Cx>) {
      double cut = rel * max_abs_coeff();
      for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= cut)
          it = terms_.erase(it);
        else
          ++it;
      }
    }
  }

  bool operator==(const MultiPoly& o) const {
    return group_sizes_ == o.group_sizes_ && multidegree_ == o.multidegree_ && terms_ == o.terms_;
  }

 private:
  int group_of(int var) const {
    int off = 0;
    for (size_t g = 0; g < group_sizes_.size(); ++g) {
      off += group_sizes_[g];
      if (var < off) return static_cast<int>(g);
    }
    throw InvalidForm("variable index out of range");
  }
  void require_same_shape(const MultiPoly& o) const {
    if (group_sizes_ != o.group_sizes_ || multidegree_ != o.multidegree_)
      throw InvalidForm("polynomial shape mismatch");
  }
  void check_exponents(const Exponents& e) const {
    if (static_cast<int>(e.size()) != var_count()) throw InvalidForm("exponent length mismatch");
    int off = 0;
    for (size_t g = 0; g < group_sizes_.size(); ++g) {
      int deg = 0;
      for (int v = 0; v < group_sizes_[g]; ++v) deg += e[off + v];
      if (deg != multidegree_[g]) throw InvalidForm("term degree violates multidegree");
      off += group_sizes_[g];
    }
  }

  std::vector<int> group_sizes_;
  std::vector<int> multidegree_;
  TermMap terms_;
};

inline MultiPoly<Cx> to_float_poly(const MultiPoly<GaussianRational>& p) {
  MultiPoly<Cx> r(p.group_sizes(), p.multidegree());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c.to_cx());
  return r;
}

template <class K>
K unit_coeff();
template <>
inline Cx unit_coeff<Cx>() {
  return Cx(1.0, 0.0);
}
template <>
inline GaussianRational unit_coeff<GaussianRational>() {
  return GaussianRational::integer(1);
}

// Determinant of a square matrix of polynomials, memoized cofactor expansion
// over column masks (rows are consumed top-down).
template <class K>
MultiPoly<K> poly_det(const std::vector<std::vector<MultiPoly<K>>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw InvalidForm("empty determinant");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw InvalidForm("determinant matrix not square");

  std::vector<int> zero_deg(m[0][0].group_sizes().size(), 0);
  std::map<std::uint32_t, MultiPoly<K>> memo;

  auto rec = [&](auto&& self, std::uint32_t colmask) -> MultiPoly<K> {
    int row = n - __builtin_popcount(colmask);
    if (colmask == 0) {
      MultiPoly<K> one(m[0][0].group_sizes(), zero_deg);
      one.add_term(typename MultiPoly<K>::Exponents(one.var_count(), 0), unit_coeff<K>());
      return one;
    }
    auto it = memo.find(colmask);
    if (it != memo.end()) return it->second;
    MultiPoly<K> acc;
    bool first = true;
    int sign = 1;
    for (int c = 0; c < n; ++c) {
      if (!(colmask & (1u << c))) continue;
      MultiPoly<K> sub = self(self, colmask & ~(1u << c));
      MultiPoly<K> term = m[row][c] * sub;
      if (sign < 0) term = term.scaled(-unit_coeff<K>());
      if (first) {
        acc = std::move(term);
        first = false;
      } else {
        acc = acc + term;
      }
      sign = -sign;
    }
    memo.emplace(colmask, acc);
    return acc;
  };
  return rec(rec, (1u << n) - 1);
}

}  // namespace entloc
