#pragma once

// The G-graded free algebra on starred and unstarred generators, the
// bicharacter braiding between homogeneous words, and the conjugation
// (ab)* = b* a*.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/groups.hpp"
#include "qstat/report.hpp"

namespace qstat {

/// Declared (unstarred) generator x with its grade. The partner x* carries
/// the negated grade.
struct Generator {
  std::string name;
  GroupElement grade;
};

/// Occurrence of generator `gen` in a word, possibly starred.
struct Letter {
  std::uint32_t gen = 0;
  bool starred = false;

  Letter toggled() const { return Letter{gen, !starred}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Word concat(const Word& a, const Word& b) {
  Word w;
  w.reserve(a.size() + b.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!head(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return head(c) || (c >= '0' && c <= '9'); });
}

class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(AbelianGroup group, std::vector<Generator> gens) : group_(std::move(group)), gens_(std::move(gens)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!is_identifier(gens_[i].name))
        throw Error(ErrorCode::domain, "invalid generator name '" + gens_[i].name + "'");
      if (gens_[i].grade.size() != group_.rank())
        throw Error(ErrorCode::shape_mismatch, "grade of '" + gens_[i].name + "' has wrong length");
      gens_[i].grade = group_.element(gens_[i].grade.coords());
      for (std::size_t j = 0; j < i; ++j)
        if (gens_[j].name == gens_[i].name)
          throw Error(ErrorCode::domain, "duplicate generator '" + gens_[i].name + "'");
    }
  }

  const AbelianGroup& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return gens_.size(); }
  const Generator& generator(std::size_t i) const { return gens_.at(i); }
  const std::vector<Generator>& generators() const noexcept { return gens_; }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }

  GroupElement grade(const Letter& l) const {
    const GroupElement& g = gens_.at(l.gen).grade;
    return l.starred ? group_.negate(g) : g;
  }

  GroupElement grade(const Word& w) const {
    GroupElement total = group_.zero();
    for (const Letter& l : w) total = group_.add(total, grade(l));
    return total;
  }

  std::string name(const Letter& l) const { return gens_.at(l.gen).name + (l.starred ? "*" : ""); }

  std::string render(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) s += ' ';
      s += name(w[i]);
    }
    return s;
  }

 private:
  AbelianGroup group_;
  std::vector<Generator> gens_;
};

enum class LetterSet { unstarred, starred, mixed };

/// All words of exactly `length` letters, lexicographic.
inline std::vector<Word> enumerate_words(std::size_t n_gens, std::size_t length, LetterSet set) {
  std::vector<Letter> letters;
  for (std::uint32_t g = 0; g < n_gens; ++g) {
    if (set != LetterSet::starred) letters.push_back({g, false});
    if (set != LetterSet::unstarred) letters.push_back({g, true});
  }
  std::sort(letters.begin(), letters.end());
  std::vector<Word> out;
  if (letters.empty()) {
    if (length == 0) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> idx(length, 0);
  for (;;) {
    Word w(length);
    for (std::size_t i = 0; i < length; ++i) w[i] = letters[idx[i]];
    out.push_back(std::move(w));
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++idx[i] < letters.size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (length == 0) return out;
  }
}

/// All words with at most `max_len` letters, shortest first.
inline std::vector<Word> enumerate_words_upto(std::size_t n_gens, std::size_t max_len, LetterSet set) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    auto ws = enumerate_words(n_gens, len, set);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

/// Finite C-linear combination of words. Coefficients with magnitude at or
/// below the tolerance are never stored.
class GradedPoly {
 public:
  using Terms = std::map<Word, Complex>;

  explicit GradedPoly(double tolerance = default_tolerance) : tol_(tolerance) {}

  static GradedPoly monomial(Word w, Complex c = 1.0, double tolerance = default_tolerance) {
    GradedPoly p(tolerance);
    p.add(w, c);
    return p;
  }
  static GradedPoly scalar(Complex c, double tolerance = default_tolerance) {
    return monomial(Word{}, c, tolerance);
  }

  void add(const Word& w, Complex c) {
    if (c == Complex(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) <= tol_) terms_.erase(it);
  }

  void add(const GradedPoly& other, Complex scale = 1.0) {
    for (const auto& [w, c] : other.terms_) add(w, c * scale);
  }

  Complex coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  double tolerance() const noexcept { return tol_; }

  GradedPoly scaled(Complex s) const {
    GradedPoly out(tol_);
    for (const auto& [w, c] : terms_) out.add(w, c * s);
    return out;
  }

  GradedPoly& operator+=(const GradedPoly& o) {
    add(o);
    return *this;
  }
  GradedPoly& operator-=(const GradedPoly& o) {
    add(o, -1.0);
    return *this;
  }
  friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
  friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }

  /// Concatenation product of the free algebra.
  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly out(std::min(a.tol_, b.tol_));
    for (const auto& [u, cu] : a.terms_)
      for (const auto& [v, cv] : b.terms_) out.add(concat(u, v), cu * cv);
    return out;
  }

  /// Largest coefficientwise difference; exact zero means identical support
  /// and coefficients.
  friend double distance(const GradedPoly& a, const GradedPoly& b) {
    double d = 0.0;
    for (const auto& [w, c] : a.terms_) d = std::max(d, std::abs(c - b.coefficient(w)));
    for (const auto& [w, c] : b.terms_)
      if (!a.terms_.count(w)) d = std::max(d, std::abs(c));
    return d;
  }

  /// Largest coefficient magnitude.
  double norm() const {
    double m = 0.0;
    for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  bool approx_equal(const GradedPoly& o, double tol) const { return distance(*this, o) <= tol; }

 private:
  Terms terms_;
  double tol_;
};

/// Reverses each word, toggles stars, conjugates coefficients.
inline GradedPoly involution(const GradedPoly& p) {
  GradedPoly out(p.tolerance());
  for (const auto& [w, c] : p.terms()) {
    Word r(w.rbegin(), w.rend());
    for (Letter& l : r) l = l.toggled();
    out.add(r, std::conj(c));
  }
  return out;
}

inline Word involution(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (Letter& l : r) l = l.toggled();
  return r;
}

/// Psi(u (x) v) = eps(|v|, |u|) v (x) u, returned as the concatenation v u.
inline GradedPoly braid(const Bicharacter& b, const Alphabet& a, const Word& u, const Word& v) {
  if (!(b.group() == a.group())) throw Error(ErrorCode::domain, "alphabet and bicharacter use different groups");
  return GradedPoly::monomial(concat(v, u), b(a.grade(v), a.grade(u)), b.tolerance());
}

namespace detail {

/// Elements of a tensor power of the free algebra: keys keep factor
/// boundaries.
using TensorTerms = std::map<std::vector<Word>, Complex>;

inline TensorTerms braid_at(const Bicharacter& b, const Alphabet& a, const TensorTerms& t, std::size_t k) {
  TensorTerms out;
  for (const auto& [factors, c] : t) {
    auto f = factors;
    Complex e = b(a.grade(f[k + 1]), a.grade(f[k]));
    std::swap(f[k], f[k + 1]);
    out[f] += c * e;
  }
  return out;
}

inline TensorTerms merge_at(const TensorTerms& t, std::size_t k) {
  TensorTerms out;
  for (const auto& [factors, c] : t) {
    std::vector<Word> f;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i == k + 1) continue;
      f.push_back(i == k ? concat(factors[k], factors[k + 1]) : factors[i]);
    }
    out[f] += c;
  }
  return out;
}

inline double relative_distance(const TensorTerms& x, const TensorTerms& y) {
  double d = 0.0, scale = 1.0;
  auto get = [](const TensorTerms& t, const std::vector<Word>& k) {
    auto it = t.find(k);
    return it == t.end() ? Complex(0.0) : it->second;
  };
  for (const auto& [k, c] : x) {
    d = std::max(d, std::abs(c - get(y, k)));
    scale = std::max(scale, std::abs(c));
  }
  for (const auto& [k, c] : y) {
    d = std::max(d, std::abs(c - get(x, k)));
    scale = std::max(scale, std::abs(c));
  }
  return d / scale;
}

}  // namespace detail

/// Both factorization laws of the braiding on one triple of words:
///   Psi_{U(x)V, W} = (Psi_{U,W} (x) id)(id (x) Psi_{V,W})
///   Psi_{U, V(x)W} = (id (x) Psi_{U,W})(Psi_{U,V} (x) id)
/// Residuals are relative to the largest coefficient.
inline CheckReport check_hexagons(const Bicharacter& b, const Alphabet& a, const Word& u, const Word& v,
                                  const Word& w) {
  CheckReport rep("hexagons", b.tolerance());
  const detail::TensorTerms start{{{u, v, w}, Complex(1.0)}};
  auto describe = [&](const char* law) {
    return std::string(law) + "(" + a.render(u) + "|" + a.render(v) + "|" + a.render(w) + ")";
  };

  {
    // left side through the two-factor braid() on the merged word
    GradedPoly direct = braid(b, a, concat(u, v), w);
    detail::TensorTerms lhs{{{w, concat(u, v)}, direct.coefficient(concat(w, concat(u, v)))}};
    auto rhs = detail::merge_at(detail::braid_at(b, a, detail::braid_at(b, a, start, 1), 0), 1);
    rep.record(detail::relative_distance(lhs, rhs), [&] { return describe("left"); });
  }
  {
    auto lhs = detail::braid_at(b, a, detail::merge_at(start, 1), 0);
    auto rhs = detail::merge_at(detail::braid_at(b, a, detail::braid_at(b, a, start, 0), 1), 0);
    rep.record(detail::relative_distance(lhs, rhs), [&] { return describe("right"); });
  }
  return rep;
}

}  // namespace qstat
