#pragma once

// Finitely generated abelian grading groups Z^r + Z_m1 + ... + Z_mk and
// bicharacters (commutation factors) on them.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qstat/common.hpp"

namespace qstat {

/// Element of an abelian group in additive notation, stored as generator
/// exponents. Torsion slots are kept reduced to [0, m) by the owning group.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<long long> coords) : coords_(std::move(coords)) {}

  const std::vector<long long>& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  long long operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const {
    for (long long c : coords_)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<long long> coords_;
};

class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::size_t free_rank, std::vector<long long> torsion_orders)
      : free_rank_(free_rank), torsion_(std::move(torsion_orders)) {
    for (long long m : torsion_)
      if (m < 2) throw Error(ErrorCode::domain, "torsion orders must be >= 2");
  }

  static AbelianGroup cyclic(long long m) { return AbelianGroup(0, {m}); }
  static AbelianGroup free(std::size_t r) { return AbelianGroup(r, {}); }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<long long>& torsion_orders() const noexcept { return torsion_; }
  /// Number of generators, i.e. the coordinate-vector length.
  std::size_t rank() const noexcept { return free_rank_ + torsion_.size(); }
  bool is_finite() const noexcept { return free_rank_ == 0; }

  /// Order of generator i, or nullopt for a free generator.
  std::optional<long long> generator_order(std::size_t i) const {
    if (i < free_rank_) return std::nullopt;
    return torsion_.at(i - free_rank_);
  }

  long long order() const {
    if (!is_finite()) throw Error(ErrorCode::domain, "group is infinite");
    long long n = 1;
    for (long long m : torsion_) n *= m;
    return n;
  }

  GroupElement element(std::vector<long long> coords) const {
    if (coords.size() != rank())
      throw Error(ErrorCode::domain, "element has " + std::to_string(coords.size()) +
                                         " coordinates, group rank is " + std::to_string(rank()));
    for (std::size_t i = free_rank_; i < coords.size(); ++i) {
      long long m = torsion_[i - free_rank_];
      coords[i] = ((coords[i] % m) + m) % m;
    }
    return GroupElement(std::move(coords));
  }

  GroupElement zero() const { return GroupElement(std::vector<long long>(rank(), 0)); }

  GroupElement generator(std::size_t i) const {
    std::vector<long long> c(rank(), 0);
    c.at(i) = 1;
    return GroupElement(std::move(c));
  }

  bool contains(const GroupElement& a) const {
    if (a.size() != rank()) return false;
    for (std::size_t i = free_rank_; i < rank(); ++i)
      if (a[i] < 0 || a[i] >= torsion_[i - free_rank_]) return false;
    return true;
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    require(a);
    require(b);
    std::vector<long long> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = a[i] + b[i];
    return element(std::move(c));
  }

  GroupElement negate(const GroupElement& a) const {
    require(a);
    std::vector<long long> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = -a[i];
    return element(std::move(c));
  }

  GroupElement subtract(const GroupElement& a, const GroupElement& b) const {
    return add(a, negate(b));
  }

  GroupElement scale(const GroupElement& a, long long k) const {
    require(a);
    std::vector<long long> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = a[i] * k;
    return element(std::move(c));
  }

  /// All elements of a finite group, lexicographic in the coordinates.
  std::vector<GroupElement> elements() const {
    if (!is_finite()) throw Error(ErrorCode::domain, "cannot enumerate an infinite group");
    std::vector<GroupElement> out;
    std::vector<long long> c(rank(), 0);
    for (;;) {
      out.emplace_back(c);
      std::size_t i = rank();
      while (i > 0) {
        --i;
        if (++c[i] < torsion_[i]) break;
        c[i] = 0;
        if (i == 0) return out;
      }
      if (rank() == 0) return out;
    }
  }

  void require(const GroupElement& a) const {
    if (!contains(a))
      throw Error(ErrorCode::domain, "element " + a.str() + " does not belong to the group");
  }

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<long long> torsion_;
};

/// Commutation factor eps: G x G -> C\{0}, stored on generator pairs and
/// extended by eps(a, b) = prod_{i,j} table[i][j]^(a_i b_j).
class Bicharacter {
 public:
  using Table = std::vector<std::vector<Complex>>;

  Bicharacter() = default;
  Bicharacter(AbelianGroup group, Table gen_table, double tolerance = default_tolerance)
      : group_(std::move(group)), table_(std::move(gen_table)), tolerance_(tolerance) {
    if (table_.size() != group_.rank())
      throw Error(ErrorCode::shape_mismatch, "bicharacter table needs " +
                                                 std::to_string(group_.rank()) + " rows");
    for (const auto& row : table_) {
      if (row.size() != group_.rank())
        throw Error(ErrorCode::shape_mismatch, "bicharacter table must be square");
      for (Complex v : row)
        if (v == Complex(0.0))
          throw Error(ErrorCode::zero_bicharacter, "bicharacter values must be nonzero");
    }
    if (!(tolerance_ > 0)) throw Error(ErrorCode::domain, "tolerance must be positive");
  }

  static Bicharacter trivial(const AbelianGroup& g, double tolerance = default_tolerance) {
    return Bicharacter(g, Table(g.rank(), std::vector<Complex>(g.rank(), Complex(1.0))), tolerance);
  }

  const AbelianGroup& group() const noexcept { return group_; }
  const Table& gen_table() const noexcept { return table_; }
  double tolerance() const noexcept { return tolerance_; }

  Complex operator()(const GroupElement& a, const GroupElement& c) const {
    if (a.size() != group_.rank() || c.size() != group_.rank())
      throw Error(ErrorCode::domain, "element dimension does not match the bicharacter's group");
    Complex value(1.0);
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < table_.size(); ++j)
        if (c[j] != 0) value *= ipow(table_[i][j], a[i] * c[j]);
    }
    return value;
  }

 private:
  AbelianGroup group_;
  Table table_;
  double tolerance_ = default_tolerance;
};

inline Complex eval_bicharacter(const Bicharacter& b, const GroupElement& a, const GroupElement& c) {
  return b(a, c);
}

/// Result of a finite axiom scan over generator pairs.
struct AxiomVerdict {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  double residual = 0.0;

  explicit operator bool() const noexcept { return holds; }
};

/// eps(a,b) eps(b,a) = 1; checking generator pairs suffices by bilinearity.
inline AxiomVerdict is_normalized(const Bicharacter& b) {
  AxiomVerdict v;
  const auto& t = b.gen_table();
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i; j < t.size(); ++j) {
      double r = std::abs(t[i][j] * t[j][i] - Complex(1.0));
      v.residual = std::max(v.residual, r);
      if (r > b.tolerance() && v.holds) {
        v.holds = false;
        v.witness = {i, j};
      }
    }
  return v;
}

/// For a torsion generator e_i of order m: table[i][j]^m = table[j][i]^m = 1.
inline AxiomVerdict validate_torsion(const Bicharacter& b) {
  AxiomVerdict v;
  const auto& g = b.group();
  const auto& t = b.gen_table();
  for (std::size_t i = 0; i < g.rank(); ++i) {
    auto m = g.generator_order(i);
    if (!m) continue;
    for (std::size_t j = 0; j < g.rank(); ++j) {
      double r = std::max(std::abs(ipow(t[i][j], *m) - Complex(1.0)),
                          std::abs(ipow(t[j][i], *m) - Complex(1.0)));
      v.residual = std::max(v.residual, r);
      if (r > b.tolerance() && v.holds) {
        v.holds = false;
        v.witness = {i, j};
      }
    }
  }
  return v;
}

}  // namespace qstat
