#pragma once

// Twists between the free algebra A on x_i and its conjugate A* on x*_i,
// the twisted product W = A >< A* (the Wick algebra) and its normal-ordering
// rewriting system.
//
// Generator rule, with gamma_i the grade of x_i:
//
//   x*_i x_j  ->  eps(gamma_j, -gamma_i) x_j x*_i  +  g_ij
//
// The twist on words is the unique extension of this rule through the two
// twist laws; normal ordering applies the rule at starred-before-unstarred
// adjacencies until none remain.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/freealg.hpp"
#include "qstat/groups.hpp"
#include "qstat/linalg.hpp"
#include "qstat/report.hpp"
#include "qstat/syntax.hpp"

namespace qstat {

/// Replaces one eps factor in the braided term of tau(star_word (x) word) by
/// its argument-swapped value eps(-gamma_s, gamma_u). Only used to build
/// deliberately broken twists.
struct TwistCorruption {
  Word star_word;
  Word word;
  std::size_t star_pos = 0;
  std::size_t word_pos = 0;
};

struct TwistSpec {
  Bicharacter bicharacter;
  Alphabet alphabet;
  Matrix pairing;  // g_ij = g(x*_i (x) x_j)
  std::vector<TwistCorruption> corruptions;

  /// Pairing defaults to the identity (dual bases).
  static TwistSpec make(Bicharacter b, Alphabet a, std::optional<Matrix> pairing = std::nullopt) {
    if (!(b.group() == a.group()))
      throw Error(ErrorCode::domain, "generator grades and bicharacter live on different groups");
    const auto n = static_cast<Eigen::Index>(a.size());
    TwistSpec t;
    t.pairing = pairing ? *pairing : Matrix::Identity(n, n);
    if (t.pairing.rows() != n || t.pairing.cols() != n)
      throw Error(ErrorCode::shape_mismatch, "pairing must be " + std::to_string(n) + "x" + std::to_string(n));
    t.bicharacter = std::move(b);
    t.alphabet = std::move(a);
    return t;
  }

  double tolerance() const { return bicharacter.tolerance(); }
  std::size_t generators() const { return alphabet.size(); }

  /// Factor picked up when x*_i moves right past x_j.
  Complex exchange(std::size_t i, std::size_t j) const {
    const auto& g = alphabet.group();
    return bicharacter(alphabet.generator(j).grade, g.negate(alphabet.generator(i).grade));
  }

  Complex pair(std::size_t i, std::size_t j) const {
    return pairing(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

inline bool is_normal_word(const Word& w) {
  bool seen_star = false;
  for (const Letter& l : w) {
    if (l.starred)
      seen_star = true;
    else if (seen_star)
      return false;
  }
  return true;
}

inline bool is_normal(const GradedPoly& p) {
  for (const auto& [w, c] : p.terms())
    if (!is_normal_word(w)) return false;
  return true;
}

/// Unstarred prefix and starred suffix of a normal-form word.
inline std::pair<Word, Word> split_normal(const Word& w) {
  std::size_t k = 0;
  while (k < w.size() && !w[k].starred) ++k;
  return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)),
          Word(w.begin() + static_cast<std::ptrdiff_t>(k), w.end())};
}

enum class RewriteStrategy { leftmost, rightmost };

/// A TwistSpec together with a memo of twist values. Not safe for concurrent
/// use of a single instance; copies are independent.
class WickAlgebra {
 public:
  explicit WickAlgebra(TwistSpec spec) : spec_(std::move(spec)) {
    const std::size_t n = spec_.generators();
    exchange_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) exchange_[i * n + j] = spec_.exchange(i, j);
  }

  const TwistSpec& spec() const noexcept { return spec_; }
  const Alphabet& alphabet() const noexcept { return spec_.alphabet; }
  double tolerance() const { return spec_.tolerance(); }
  std::size_t generators() const { return spec_.generators(); }

  Complex exchange(std::size_t i, std::size_t j) const { return exchange_[i * spec_.generators() + j]; }
  Complex pair(std::size_t i, std::size_t j) const { return spec_.pair(i, j); }

  /// tau(star_word (x) word) as normal-form words a' s'.
  const GradedPoly& twist(const Word& star_word, const Word& word) const {
    auto key = std::make_pair(star_word, word);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    GradedPoly value = compute_twist(star_word, word);
    return cache_.emplace(std::move(key), std::move(value)).first->second;
  }

  /// Rewrites every starred-before-unstarred adjacency with the generator
  /// rule until the polynomial is in normal form.
  GradedPoly normal_order(const GradedPoly& p, RewriteStrategy strategy = RewriteStrategy::leftmost,
                          std::size_t* steps_out = nullptr) const {
    GradedPoly result(tolerance());
    GradedPoly pending = p;
    std::size_t steps = 0;
    std::size_t budget = 1000000;
    for (const auto& [w, c] : p.terms()) budget += 64 * w.size() * w.size() * (w.size() + 1);
    while (!pending.is_zero()) {
      auto node = pending.terms().begin();
      Word w = node->first;
      Complex c = node->second;
      pending.add(w, -c);
      std::optional<std::size_t> at;
      for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (w[k].starred && !w[k + 1].starred) {
          at = k;
          if (strategy == RewriteStrategy::leftmost) break;
        }
      }
      if (!at) {
        result.add(w, c);
        continue;
      }
      if (++steps > budget) throw Error(ErrorCode::domain, "normal ordering exceeded its step budget");
      const std::size_t k = *at;
      const std::size_t i = w[k].gen, j = w[k + 1].gen;
      Word swapped = w;
      std::swap(swapped[k], swapped[k + 1]);
      pending.add(swapped, c * exchange(i, j));
      Complex g = pair(i, j);
      if (g != Complex(0.0)) {
        Word contracted;
        contracted.reserve(w.size() - 2);
        for (std::size_t q = 0; q < w.size(); ++q)
          if (q != k && q != k + 1) contracted.push_back(w[q]);
        pending.add(contracted, c * g);
      }
    }
    if (steps_out) *steps_out = steps;
    return result;
  }

  /// Twisted product (m_A (x) m_B)(id (x) tau (x) id) on normal-form input.
  GradedPoly multiply(const GradedPoly& p, const GradedPoly& q) const {
    if (!is_normal(p) || !is_normal(q)) throw Error(ErrorCode::domain, "multiply expects normal-form operands");
    GradedPoly out(tolerance());
    for (const auto& [u, cu] : p.terms()) {
      auto [a1, b1] = split_normal(u);
      for (const auto& [v, cv] : q.terms()) {
        auto [a2, b2] = split_normal(v);
        for (const auto& [mid, cm] : twist(b1, a2).terms()) out.add(concat(concat(a1, mid), b2), cu * cv * cm);
      }
    }
    return out;
  }

  /// Hermitian-Wick conjugation (a b*)* = b a*.
  GradedPoly star(const GradedPoly& p) const { return normal_order(involution(p)); }

 private:
  GradedPoly compute_twist(const Word& star_word, const Word& word) const {
    const double tol = tolerance();
    if (star_word.empty() || word.empty()) return GradedPoly::monomial(concat(word, star_word), 1.0, tol);
    GradedPoly out(tol);
    if (star_word.size() == 1) {
      // x*_i passes the letters of `word` one at a time; at each letter it
      // either braids past or contracts with it.
      const std::size_t i = star_word[0].gen;
      Complex carried = 1.0;
      for (std::size_t k = 0; k < word.size(); ++k) {
        Complex g = pair(i, word[k].gen);
        if (g != Complex(0.0)) {
          Word rest = word;
          rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
          out.add(rest, carried * g);
        }
        carried *= exchange(i, word[k].gen);
      }
      out.add(concat(word, star_word), carried);
    } else {
      // tau(s B (x) a) = (id (x) m)(tau (x) id)(s (x) tau(B (x) a))
      Word head{star_word[0]};
      Word tail(star_word.begin() + 1, star_word.end());
      for (const auto& [w1, c1] : twist(tail, word).terms()) {
        auto [a1, s1] = split_normal(w1);
        for (const auto& [w2, c2] : twist(head, a1).terms()) out.add(concat(w2, s1), c1 * c2);
      }
    }
    for (const TwistCorruption& bad : spec_.corruptions) {
      if (bad.star_word != star_word || bad.word != word) continue;
      const auto& g = alphabet().group();
      GroupElement gs = alphabet().generator(star_word.at(bad.star_pos).gen).grade;
      GroupElement gu = alphabet().generator(word.at(bad.word_pos).gen).grade;
      Complex original = spec_.bicharacter(gu, g.negate(gs));
      Complex swapped = spec_.bicharacter(g.negate(gs), gu);
      Word lead = concat(word, star_word);
      Complex c = out.coefficient(lead);
      out.add(lead, c * (swapped / original) - c);
    }
    return out;
  }

  TwistSpec spec_;
  std::vector<Complex> exchange_;
  mutable std::map<std::pair<Word, Word>, GradedPoly> cache_;
};

/// Element of the Wick algebra: a polynomial whose every word is in normal
/// form (all unstarred letters before all starred ones).
class WickPoly {
 public:
  WickPoly() = default;
  explicit WickPoly(GradedPoly p) : poly_(std::move(p)) {
    if (!is_normal(poly_)) throw Error(ErrorCode::domain, "WickPoly requires normal-form words");
  }

  const GradedPoly& poly() const noexcept { return poly_; }
  friend double distance(const WickPoly& a, const WickPoly& b) { return distance(a.poly_, b.poly_); }

 private:
  GradedPoly poly_;
};

inline WickPoly to_wick(const WickAlgebra& w, const GradedPoly& p) { return WickPoly(w.normal_order(p)); }

inline WickPoly multiply_wick(const WickAlgebra& w, const WickPoly& p, const WickPoly& q) {
  return WickPoly(w.multiply(p.poly(), q.poly()));
}

inline WickPoly star_wick(const WickAlgebra& w, const WickPoly& p) { return WickPoly(w.star(p.poly())); }

/// tau on a starred word and an unstarred word.
inline GradedPoly apply_twist(const WickAlgebra& w, const Word& star_word, const Word& word) {
  for (const Letter& l : star_word)
    if (!l.starred) throw Error(ErrorCode::domain, "apply_twist: first argument must be entirely starred");
  for (const Letter& l : word)
    if (l.starred) throw Error(ErrorCode::domain, "apply_twist: second argument must be entirely unstarred");
  for (const Letter& l : concat(star_word, word))
    if (l.gen >= w.generators()) throw Error(ErrorCode::domain, "apply_twist: unknown generator");
  return w.twist(star_word, word);
}

namespace detail {

inline std::string pair_witness(const Alphabet& a, const Word& s, const Word& u) {
  return "(" + a.render(s) + "|" + a.render(u) + ")";
}

inline double relative(const GradedPoly& x, const GradedPoly& y) {
  return distance(x, y) / std::max({1.0, x.norm(), y.norm()});
}

}  // namespace detail

/// Both twist laws and the unit conditions on every pair of words with at
/// most max_len letters each:
///   tau(b (x) a1 a2) = (m (x) id)(id (x) tau)(tau (x) id)(b (x) a1 (x) a2)
///   tau(b1 b2 (x) a) = (id (x) m)(tau (x) id)(id (x) tau)(b1 (x) b2 (x) a)
inline CheckReport check_twist_axioms(const WickAlgebra& w, std::size_t max_len) {
  CheckReport rep("twist_axioms", w.tolerance());
  const auto& al = w.alphabet();
  auto stars = enumerate_words_upto(w.generators(), max_len, LetterSet::starred);
  auto plain = enumerate_words_upto(w.generators(), max_len, LetterSet::unstarred);
  for (const Word& s : stars)
    for (const Word& a : plain) {
      const GradedPoly& direct = w.twist(s, a);
      if (s.empty() || a.empty()) {
        rep.record(detail::relative(direct, GradedPoly::monomial(concat(a, s), 1.0, w.tolerance())),
                   [&] { return "unit" + detail::pair_witness(al, s, a); });
        continue;
      }
      for (std::size_t cut = 1; cut < a.size(); ++cut) {
        Word a1(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
        Word a2(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end());
        GradedPoly via(w.tolerance());
        for (const auto& [w1, c1] : w.twist(s, a1).terms()) {
          auto [x1, s1] = split_normal(w1);
          for (const auto& [w2, c2] : w.twist(s1, a2).terms()) via.add(concat(x1, w2), c1 * c2);
        }
        rep.record(detail::relative(direct, via), [&] { return "law1" + detail::pair_witness(al, s, a); });
      }
      for (std::size_t cut = 1; cut < s.size(); ++cut) {
        Word s1(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(cut));
        Word s2(s.begin() + static_cast<std::ptrdiff_t>(cut), s.end());
        GradedPoly via(w.tolerance());
        for (const auto& [w1, c1] : w.twist(s2, a).terms()) {
          auto [x1, t1] = split_normal(w1);
          for (const auto& [w2, c2] : w.twist(s1, x1).terms()) via.add(concat(w2, t1), c1 * c2);
        }
        rep.record(detail::relative(direct, via), [&] { return "law2" + detail::pair_witness(al, s, a); });
      }
    }
  return rep;
}

/// (tau(b* (x) a))* = tau(a* (x) b) for unstarred words a, b.
inline CheckReport check_star_twist(const WickAlgebra& w, std::size_t max_len) {
  CheckReport rep("star_twist", w.tolerance());
  auto plain = enumerate_words_upto(w.generators(), max_len, LetterSet::unstarred);
  for (const Word& a : plain)
    for (const Word& b : plain) {
      GradedPoly lhs = involution(w.twist(involution(b), a));
      const GradedPoly& rhs = w.twist(involution(a), b);
      rep.record(detail::relative(lhs, rhs), [&] {
        return "(" + w.alphabet().render(a) + "," + w.alphabet().render(b) + ")";
      });
    }
  return rep;
}

/// Associativity of the twisted product on all triples of normal-form words
/// with at most max_len letters each.
inline CheckReport check_associativity(const WickAlgebra& w, std::size_t max_len) {
  CheckReport rep("associativity", w.tolerance());
  std::vector<Word> normal;
  for (auto& x : enumerate_words_upto(w.generators(), max_len, LetterSet::mixed))
    if (is_normal_word(x)) normal.push_back(std::move(x));

  // words are interned so products can be memoized as sparse rows
  std::map<Word, std::size_t> ids;
  std::vector<Word> by_id;
  auto intern = [&](const Word& x) {
    auto [it, fresh] = ids.try_emplace(x, by_id.size());
    if (fresh) by_id.push_back(x);
    return it->second;
  };
  using Row = std::vector<std::pair<std::size_t, Complex>>;
  std::unordered_map<std::uint64_t, Row> products;
  auto word_product = [&](std::size_t x, std::size_t y) -> const Row& {
    const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
    auto it = products.find(key);
    if (it != products.end()) return it->second;
    GradedPoly v = w.multiply(GradedPoly::monomial(by_id[x], 1.0, w.tolerance()),
                              GradedPoly::monomial(by_id[y], 1.0, w.tolerance()));
    Row row;
    for (const auto& [z, c] : v.terms()) row.emplace_back(intern(z), c);
    return products.emplace(key, std::move(row)).first->second;
  };

  std::vector<std::size_t> idx;
  for (const Word& x : normal) idx.push_back(intern(x));
  std::vector<Complex> lhs, rhs;
  std::vector<std::size_t> touched;
  auto accumulate = [&](std::vector<Complex>& acc, std::size_t z, Complex c) {
    if (acc.size() <= z) {
      lhs.resize(by_id.size() + 1024, Complex(0.0));
      rhs.resize(by_id.size() + 1024, Complex(0.0));
    }
    acc[z] += c;
    touched.push_back(z);
  };

  for (std::size_t p : idx)
    for (std::size_t q : idx) {
      const Row& pq = word_product(p, q);
      for (std::size_t r : idx) {
        const Row& qr = word_product(q, r);
        for (const auto& [x, c] : pq)
          for (const auto& [z, d] : word_product(x, r)) accumulate(lhs, z, c * d);
        for (const auto& [x, c] : qr)
          for (const auto& [z, d] : word_product(p, x)) accumulate(rhs, z, c * d);
        double diff = 0.0, scale = 1.0;
        for (std::size_t z : touched) {
          diff = std::max(diff, std::abs(lhs[z] - rhs[z]));
          scale = std::max({scale, std::abs(lhs[z]), std::abs(rhs[z])});
        }
        for (std::size_t z : touched) lhs[z] = rhs[z] = Complex(0.0);
        touched.clear();
        rep.record(diff / scale, [&] {
          const auto& a = w.alphabet();
          return "(" + a.render(by_id[p]) + ")(" + a.render(by_id[q]) + ")(" + a.render(by_id[r]) + ")";
        });
      }
    }
  return rep;
}

struct AssociativityIffReport {
  CheckReport twist;
  CheckReport associativity;
  // twist laws hold exactly when the product is associative
  bool consistent = false;
};

inline AssociativityIffReport verify_associativity_iff_twist(const WickAlgebra& w, std::size_t max_len) {
  AssociativityIffReport out;
  out.twist = check_twist_axioms(w, max_len);
  out.associativity = check_associativity(w, max_len);
  out.consistent = out.twist.passed == out.associativity.passed;
  return out;
}

/// Leftmost-first and rightmost-first rewriting agree on every mixed word
/// with at most max_len letters.
inline CheckReport check_confluence(const WickAlgebra& w, std::size_t max_len) {
  CheckReport rep("confluence", w.tolerance());
  for (const Word& x : enumerate_words_upto(w.generators(), max_len, LetterSet::mixed)) {
    GradedPoly p = GradedPoly::monomial(x, 1.0, w.tolerance());
    GradedPoly left = w.normal_order(p, RewriteStrategy::leftmost);
    GradedPoly right = w.normal_order(p, RewriteStrategy::rightmost);
    rep.record(distance(left, right), [&] { return w.alphabet().render(x); });
  }
  return rep;
}

/// Rewriting of arbitrary words agrees with the twisted product of their
/// normal-ordered letters: a second route to every normal form.
inline CheckReport check_rewrite_matches_product(const WickAlgebra& w, std::size_t max_len) {
  CheckReport rep("rewrite_vs_product", w.tolerance());
  for (const Word& x : enumerate_words_upto(w.generators(), max_len, LetterSet::mixed)) {
    GradedPoly via = GradedPoly::scalar(1.0, w.tolerance());
    for (const Letter& l : x) via = w.multiply(via, GradedPoly::monomial(Word{l}, 1.0, w.tolerance()));
    GradedPoly direct = w.normal_order(GradedPoly::monomial(x, 1.0, w.tolerance()));
    rep.record(detail::relative(direct, via), [&] { return w.alphabet().render(x); });
  }
  return rep;
}

/// a*_i a_j - eps-braided a_j a*_i = g_ij as an identity in the algebra.
inline CheckReport check_commutation_relations(const WickAlgebra& w) {
  CheckReport rep("commutation_relations", w.tolerance());
  const double tol = w.tolerance();
  for (std::uint32_t i = 0; i < w.generators(); ++i)
    for (std::uint32_t j = 0; j < w.generators(); ++j) {
      Letter si{i, true}, xj{j, false};
      GradedPoly lhs = w.multiply(GradedPoly::monomial({si}, 1.0, tol), GradedPoly::monomial({xj}, 1.0, tol));
      lhs -= GradedPoly::monomial({xj, si}, w.exchange(i, j), tol);
      rep.record(distance(lhs, GradedPoly::scalar(w.pair(i, j), tol)), [&] {
        return w.alphabet().name(si) + "," + w.alphabet().name(xj);
      });
    }
  return rep;
}

}  // namespace qstat
