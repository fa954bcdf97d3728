#pragma once

// Finite-dimensional Hopf algebras as structure constants over C, with
// explicit verification of the algebra, coalgebra, bialgebra, antipode and
// coquasitriangular axioms, plus comodules, Hopf modules, coinvariants and
// the Hopf-module structure theorem M = M^coH (x) H.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/groups.hpp"
#include "qstat/linalg.hpp"
#include "qstat/report.hpp"

namespace qstat {

/// Dense rank-3 complex tensor, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n0, std::size_t n1, std::size_t n2)
      : dims_{n0, n1, n2}, data_(n0 * n1 * n2, Complex(0.0)) {}

  Complex& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  const Complex& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  Complex& flat(std::size_t n) { return data_.at(n); }
  const Complex& flat(std::size_t n) const { return data_.at(n); }

 private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<Complex> data_;
};

/// Candidate Hopf-algebra data on a basis b_0..b_{n-1}. Validity is not an
/// invariant of construction; run the check_* functions.
///
///   b_i b_j   = sum_k mult(i,j,k) b_k
///   Delta(b_i) = sum_{j,k} comult(i,j,k) b_j (x) b_k
///   1 = sum_i unit[i] b_i,   eta(b_i) = counit[i]
///   S(b_i) = column i of antipode
struct StructureHopf {
  std::size_t dim = 0;
  std::vector<std::string> basis_labels;
  Tensor3 mult;
  Vector unit;
  Tensor3 comult;
  Vector counit;
  Matrix antipode;
  double tolerance = default_tolerance;
  // dim*dim flags; empty means every basis product is representable. Used by
  // truncated slices of infinite group algebras.
  std::vector<char> product_defined;

  bool defined(std::size_t i, std::size_t j) const {
    return product_defined.empty() || product_defined[i * dim + j] != 0;
  }

  void validate_shapes() const {
    auto bad = [](const char* what) { throw Error(ErrorCode::shape_mismatch, what); };
    if (dim == 0) bad("Hopf algebra dimension must be positive");
    if (basis_labels.size() != dim) bad("basis label count differs from dim");
    if (mult.dim(0) != dim || mult.dim(1) != dim || mult.dim(2) != dim) bad("mult shape");
    if (comult.dim(0) != dim || comult.dim(1) != dim || comult.dim(2) != dim) bad("comult shape");
    if (unit.size() != static_cast<Eigen::Index>(dim)) bad("unit shape");
    if (counit.size() != static_cast<Eigen::Index>(dim)) bad("counit shape");
    if (antipode.rows() != static_cast<Eigen::Index>(dim) ||
        antipode.cols() != static_cast<Eigen::Index>(dim))
      bad("antipode shape");
    if (!product_defined.empty() && product_defined.size() != dim * dim) bad("product flags shape");
  }

  static StructureHopf zeros(std::size_t n) {
    StructureHopf h;
    h.dim = n;
    for (std::size_t i = 0; i < n; ++i) h.basis_labels.push_back("b" + std::to_string(i));
    h.mult = Tensor3(n, n, n);
    h.comult = Tensor3(n, n, n);
    h.unit = Vector::Zero(static_cast<Eigen::Index>(n));
    h.counit = Vector::Zero(static_cast<Eigen::Index>(n));
    h.antipode = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return h;
  }
};

/// Bilinear form <b_i, b_j> on a Hopf algebra, candidate coquasitriangular
/// structure.
struct CqtForm {
  StructureHopf hopf;
  Matrix form;
};

/// Right H-module and right H-comodule on a space with basis m_0..m_{d-1}.
///
///   m_a <| h_j = sum_k action(a,j,k) m_k
///   rho(m_a)   = sum_{k,j} coaction(a,k,j) m_k (x) h_j
struct HopfModule {
  StructureHopf hopf;
  std::size_t dim = 0;
  Tensor3 action;
  Tensor3 coaction;
  double tolerance = default_tolerance;
};

namespace detail {

struct Entry {
  std::size_t a, b;
  Complex value;
};

/// Nonzero pattern of a rank-3 tensor, grouped by the first index.
inline std::vector<std::vector<Entry>> sparse_rows(const Tensor3& t) {
  std::vector<std::vector<Entry>> rows(t.dim(0));
  for (std::size_t i = 0; i < t.dim(0); ++i)
    for (std::size_t a = 0; a < t.dim(1); ++a)
      for (std::size_t b = 0; b < t.dim(2); ++b)
        if (t(i, a, b) != Complex(0.0)) rows[i].push_back({a, b, t(i, a, b)});
  return rows;
}

inline Vector basis_vector(std::size_t n, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

/// Sparse view of the algebra structure used by every checker.
class HopfView {
 public:
  explicit HopfView(const StructureHopf& h) : h_(h) {
    h.validate_shapes();
    n_ = h.dim;
    prod_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (h.mult(i, j, k) != Complex(0.0)) prod_[i * n_ + j].push_back({k, 0, h.mult(i, j, k)});
    cop_ = sparse_rows(h.comult);
  }

  std::size_t n() const { return n_; }
  const StructureHopf& hopf() const { return h_; }

  /// x*y; sets `artifact` when a needed basis product lies outside the slice.
  Vector multiply(const Vector& x, const Vector& y, bool& artifact) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      Complex xi = x[static_cast<Eigen::Index>(i)];
      if (xi == Complex(0.0)) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        Complex yj = y[static_cast<Eigen::Index>(j)];
        if (yj == Complex(0.0)) continue;
        if (!h_.defined(i, j)) {
          artifact = true;
          continue;
        }
        for (const auto& e : prod_[i * n_ + j]) out[static_cast<Eigen::Index>(e.a)] += xi * yj * e.value;
      }
    }
    return out;
  }

  Vector multiply_basis(std::size_t i, std::size_t j, bool& artifact) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(n_));
    if (!h_.defined(i, j)) {
      artifact = true;
      return out;
    }
    for (const auto& e : prod_[i * n_ + j]) out[static_cast<Eigen::Index>(e.a)] += e.value;
    return out;
  }

  const std::vector<Entry>& coproduct(std::size_t i) const { return cop_[i]; }

  /// Delta(x) as an n x n coefficient matrix.
  Matrix coproduct(const Vector& x) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      Complex xi = x[static_cast<Eigen::Index>(i)];
      if (xi == Complex(0.0)) continue;
      for (const auto& e : cop_[i])
        out(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) += xi * e.value;
    }
    return out;
  }

  Complex counit(const Vector& x) const { return h_.counit.cwiseProduct(x).sum(); }

  /// Product in H (x) H of two coefficient matrices, factorwise.
  Matrix multiply2(const Matrix& x, const Matrix& y, bool& artifact) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (Eigen::Index a = 0; a < x.rows(); ++a)
      for (Eigen::Index b = 0; b < x.cols(); ++b) {
        if (x(a, b) == Complex(0.0)) continue;
        for (Eigen::Index c = 0; c < y.rows(); ++c)
          for (Eigen::Index d = 0; d < y.cols(); ++d) {
            if (y(c, d) == Complex(0.0)) continue;
            auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
            auto uc = static_cast<std::size_t>(c), ud = static_cast<std::size_t>(d);
            if (!h_.defined(ua, uc) || !h_.defined(ub, ud)) {
              artifact = true;
              continue;
            }
            Complex coeff = x(a, b) * y(c, d);
            for (const auto& l : prod_[ua * n_ + uc])
              for (const auto& r : prod_[ub * n_ + ud])
                out(static_cast<Eigen::Index>(l.a), static_cast<Eigen::Index>(r.a)) += coeff * l.value * r.value;
          }
      }
    return out;
  }

  std::string label(std::size_t i) const { return h_.basis_labels[i]; }

 private:
  const StructureHopf& h_;
  std::size_t n_ = 0;
  std::vector<std::vector<Entry>> prod_;
  std::vector<std::vector<Entry>> cop_;
};

}  // namespace detail

/// Associativity and the two unit laws.
inline CheckReport check_algebra(const StructureHopf& h) {
  detail::HopfView v(h);
  CheckReport rep("algebra", h.tolerance);
  const std::size_t n = v.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool art = false;
      Vector ij = v.multiply_basis(i, j, art);
      for (std::size_t k = 0; k < n; ++k) {
        bool artifact = art;
        Vector lhs = v.multiply(ij, detail::basis_vector(n, k), artifact);
        Vector jk = v.multiply_basis(j, k, artifact);
        Vector rhs = v.multiply(detail::basis_vector(n, i), jk, artifact);
        if (artifact) {
          ++rep.artifacts;
          continue;
        }
        rep.record(detail::max_abs(lhs - rhs), [&] {
          return "assoc(" + v.label(i) + "," + v.label(j) + "," + v.label(k) + ")";
        });
      }
    }
  for (std::size_t i = 0; i < n; ++i) {
    bool artifact = false;
    Vector e = detail::basis_vector(n, i);
    Vector left = v.multiply(h.unit, e, artifact);
    Vector right = v.multiply(e, h.unit, artifact);
    if (artifact) {
      ++rep.artifacts;
      continue;
    }
    rep.record(std::max(detail::max_abs(left - e), detail::max_abs(right - e)),
               [&] { return "unit(" + v.label(i) + ")"; });
  }
  return rep;
}

/// Coassociativity and the two counit laws.
inline CheckReport check_coalgebra(const StructureHopf& h) {
  detail::HopfView v(h);
  CheckReport rep("coalgebra", h.tolerance);
  const std::size_t n = v.n();
  for (std::size_t i = 0; i < n; ++i) {
    Tensor3 lhs(n, n, n), rhs(n, n, n);
    for (const auto& outer : v.coproduct(i)) {
      // (Delta (x) id): split the left leg
      for (const auto& inner : v.coproduct(outer.a)) lhs(inner.a, inner.b, outer.b) += outer.value * inner.value;
      // (id (x) Delta): split the right leg
      for (const auto& inner : v.coproduct(outer.b)) rhs(outer.a, inner.a, inner.b) += outer.value * inner.value;
    }
    double r = 0.0;
    for (std::size_t t = 0; t < lhs.size(); ++t) r = std::max(r, std::abs(lhs.flat(t) - rhs.flat(t)));
    rep.record(r, [&] { return "coassoc(" + v.label(i) + ")"; });

    Vector left = Vector::Zero(static_cast<Eigen::Index>(n)), right = left;
    for (const auto& e : v.coproduct(i)) {
      left[static_cast<Eigen::Index>(e.b)] += h.counit[static_cast<Eigen::Index>(e.a)] * e.value;
      right[static_cast<Eigen::Index>(e.a)] += h.counit[static_cast<Eigen::Index>(e.b)] * e.value;
    }
    Vector e = detail::basis_vector(n, i);
    rep.record(std::max(detail::max_abs(left - e), detail::max_abs(right - e)),
               [&] { return "counit(" + v.label(i) + ")"; });
  }
  return rep;
}

/// Delta and eta are unital algebra morphisms.
inline CheckReport check_bialgebra(const StructureHopf& h) {
  detail::HopfView v(h);
  CheckReport rep("bialgebra", h.tolerance);
  const std::size_t n = v.n();
  std::vector<Matrix> cop(n);
  for (std::size_t i = 0; i < n; ++i) cop[i] = v.coproduct(detail::basis_vector(n, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool artifact = false;
      Vector ij = v.multiply_basis(i, j, artifact);
      Matrix lhs = v.coproduct(ij);
      Matrix rhs = v.multiply2(cop[i], cop[j], artifact);
      Complex eps_lhs = v.counit(ij);
      Complex eps_rhs = h.counit[static_cast<Eigen::Index>(i)] * h.counit[static_cast<Eigen::Index>(j)];
      if (artifact) {
        ++rep.artifacts;
        continue;
      }
      rep.record(detail::max_abs(lhs - rhs),
                 [&] { return "coproduct(" + v.label(i) + "*" + v.label(j) + ")"; });
      rep.record(std::abs(eps_lhs - eps_rhs),
                 [&] { return "counit(" + v.label(i) + "*" + v.label(j) + ")"; });
    }
  Matrix unit2 = h.unit * h.unit.transpose();
  rep.record(detail::max_abs(v.coproduct(h.unit) - unit2), [] { return std::string("coproduct(1)"); });
  rep.record(std::abs(v.counit(h.unit) - Complex(1.0)), [] { return std::string("counit(1)"); });
  return rep;
}

/// m (S (x) id) Delta = u eta = m (id (x) S) Delta.
inline CheckReport check_antipode(const StructureHopf& h) {
  detail::HopfView v(h);
  CheckReport rep("antipode", h.tolerance);
  const std::size_t n = v.n();
  for (std::size_t i = 0; i < n; ++i) {
    bool artifact = false;
    Vector left = Vector::Zero(static_cast<Eigen::Index>(n)), right = left;
    for (const auto& e : v.coproduct(i)) {
      Vector s_a = h.antipode.col(static_cast<Eigen::Index>(e.a));
      Vector s_b = h.antipode.col(static_cast<Eigen::Index>(e.b));
      left += e.value * v.multiply(s_a, detail::basis_vector(n, e.b), artifact);
      right += e.value * v.multiply(detail::basis_vector(n, e.a), s_b, artifact);
    }
    if (artifact) {
      ++rep.artifacts;
      continue;
    }
    Vector target = h.counit[static_cast<Eigen::Index>(i)] * h.unit;
    rep.record(std::max(detail::max_abs(left - target), detail::max_abs(right - target)),
               [&] { return "antipode(" + v.label(i) + ")"; });
  }
  return rep;
}

/// The three coquasitriangular relations on all basis pairs/triples:
///   sum <h1,k1> k2 h2 = sum h1 k1 <h2,k2>
///   <h, kl> = sum <h1,k><h2,l>
///   <hk, l> = sum <h,l2><k,l1>
inline CheckReport check_cqt(const CqtForm& c) {
  const StructureHopf& h = c.hopf;
  detail::HopfView v(h);
  CheckReport rep("cqt", h.tolerance);
  const std::size_t n = v.n();
  if (c.form.rows() != static_cast<Eigen::Index>(n) || c.form.cols() != static_cast<Eigen::Index>(n))
    throw Error(ErrorCode::shape_mismatch, "CQT form must be dim x dim");
  auto F = [&](std::size_t a, std::size_t b) {
    return c.form(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  auto pair_with = [&](const Vector& x, std::size_t b, bool left) {
    Complex s(0.0);
    for (std::size_t k = 0; k < n; ++k) {
      Complex xk = x[static_cast<Eigen::Index>(k)];
      if (xk != Complex(0.0)) s += xk * (left ? F(k, b) : F(b, k));
    }
    return s;
  };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      bool artifact = false;
      Vector lhs = Vector::Zero(static_cast<Eigen::Index>(n)), rhs = lhs;
      for (const auto& ea : v.coproduct(a))
        for (const auto& eb : v.coproduct(b)) {
          Complex w = ea.value * eb.value;
          lhs += w * F(ea.a, eb.a) * v.multiply_basis(eb.b, ea.b, artifact);
          rhs += w * F(ea.b, eb.b) * v.multiply_basis(ea.a, eb.a, artifact);
        }
      if (artifact) {
        ++rep.artifacts;
        continue;
      }
      rep.record(detail::max_abs(lhs - rhs),
                 [&] { return "braided-commutativity(" + v.label(a) + "," + v.label(b) + ")"; });
    }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t l = 0; l < n; ++l) {
        bool artifact = false;
        // <a, b l>
        Vector bl = v.multiply_basis(b, l, artifact);
        Complex lhs2 = pair_with(bl, a, false);
        Complex rhs2(0.0);
        for (const auto& e : v.coproduct(a)) rhs2 += e.value * F(e.a, b) * F(e.b, l);
        // <a b, l>
        Vector ab = v.multiply_basis(a, b, artifact);
        Complex lhs3 = pair_with(ab, l, true);
        Complex rhs3(0.0);
        for (const auto& e : v.coproduct(l)) rhs3 += e.value * F(a, e.b) * F(b, e.a);
        if (artifact) {
          ++rep.artifacts;
          continue;
        }
        rep.record(std::abs(lhs2 - rhs2), [&] {
          return "right-multiplicative(" + v.label(a) + "," + v.label(b) + "," + v.label(l) + ")";
        });
        rep.record(std::abs(lhs3 - rhs3), [&] {
          return "left-multiplicative(" + v.label(a) + "," + v.label(b) + "," + v.label(l) + ")";
        });
      }
  return rep;
}

/// Basis of kG in the order used by make_group_hopf: free coordinates range
/// over [-truncation, truncation], torsion coordinates over [0, m).
inline std::vector<GroupElement> group_basis(const AbelianGroup& g, int truncation) {
  if (g.free_rank() > 0 && truncation < 1)
    throw Error(ErrorCode::domain, "truncation must be positive for groups with free rank");
  std::vector<long long> lo(g.rank()), hi(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    auto m = g.generator_order(i);
    lo[i] = m ? 0 : -truncation;
    hi[i] = m ? *m - 1 : truncation;
  }
  std::vector<GroupElement> out;
  std::vector<long long> c = lo;
  for (;;) {
    out.emplace_back(c);
    std::size_t i = g.rank();
    bool done = true;
    while (i > 0) {
      --i;
      if (++c[i] <= hi[i]) {
        done = false;
        break;
      }
      c[i] = lo[i];
    }
    if (done) return out;
  }
}

namespace detail {

inline std::string group_label(const GroupElement& e) {
  if (e.is_zero()) return "e";
  if (e.size() == 1) return "g^" + std::to_string(e[0]);
  return "g^" + e.str();
}

}  // namespace detail

/// Group algebra kG: Delta(g) = g (x) g, eta(g) = 1, S(g) = g^-1. For groups
/// with free rank the basis is a finite slice and products leaving the slice
/// are flagged undefined, so checkers count them as truncation artifacts.
inline StructureHopf make_group_hopf(const AbelianGroup& g, int truncation = 1,
                                     double tolerance = default_tolerance) {
  std::vector<GroupElement> basis = group_basis(g, truncation);
  std::map<GroupElement, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

  StructureHopf h = StructureHopf::zeros(basis.size());
  h.tolerance = tolerance;
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i) h.basis_labels[i] = detail::group_label(basis[i]);
  if (!g.is_finite()) h.product_defined.assign(n * n, 1);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto it = index.find(g.add(basis[i], basis[j]));
      if (it == index.end())
        h.product_defined[i * n + j] = 0;
      else
        h.mult(i, j, it->second) = 1.0;
    }
    h.comult(i, i, i) = 1.0;
    h.counit[static_cast<Eigen::Index>(i)] = 1.0;
    h.antipode(static_cast<Eigen::Index>(index.at(g.negate(basis[i]))), static_cast<Eigen::Index>(i)) = 1.0;
  }
  h.unit[static_cast<Eigen::Index>(index.at(g.zero()))] = 1.0;
  return h;
}

/// <g^a, g^b> := eps(a, b) on the (possibly truncated) group basis.
inline CqtForm bicharacter_to_cqt(const Bicharacter& b, int truncation = 1) {
  CqtForm c;
  c.hopf = make_group_hopf(b.group(), truncation, b.tolerance());
  std::vector<GroupElement> basis = group_basis(b.group(), truncation);
  const auto n = static_cast<Eigen::Index>(basis.size());
  c.form = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c.form(i, j) = b(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
  return c;
}

// ---------------------------------------------------------------------------
// Modules and comodules

/// Matrix of m -> m <| h_j (column a is the image of m_a).
inline Matrix action_matrix(const HopfModule& m, std::size_t j) {
  const auto d = static_cast<Eigen::Index>(m.dim);
  Matrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index k = 0; k < d; ++k)
      out(k, a) = m.action(static_cast<std::size_t>(a), j, static_cast<std::size_t>(k));
  return out;
}

/// The h_j-component of rho as a matrix on M.
inline Matrix coaction_matrix(const HopfModule& m, std::size_t j) {
  const auto d = static_cast<Eigen::Index>(m.dim);
  Matrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index k = 0; k < d; ++k)
      out(k, a) = m.coaction(static_cast<std::size_t>(a), static_cast<std::size_t>(k), j);
  return out;
}

namespace detail {

inline void validate_module(const HopfModule& m) {
  m.hopf.validate_shapes();
  const std::size_t n = m.hopf.dim;
  if (m.dim == 0) throw Error(ErrorCode::shape_mismatch, "module dimension must be positive");
  if (m.action.dim(0) != m.dim || m.action.dim(1) != n || m.action.dim(2) != m.dim)
    throw Error(ErrorCode::shape_mismatch, "action tensor shape");
  if (m.coaction.dim(0) != m.dim || m.coaction.dim(1) != m.dim || m.coaction.dim(2) != n)
    throw Error(ErrorCode::shape_mismatch, "coaction tensor shape");
}

inline void set_action(HopfModule& m, std::size_t j, const Matrix& a) {
  for (std::size_t col = 0; col < m.dim; ++col)
    for (std::size_t row = 0; row < m.dim; ++row)
      m.action(col, j, row) = a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

inline void set_coaction(HopfModule& m, std::size_t j, const Matrix& r) {
  for (std::size_t col = 0; col < m.dim; ++col)
    for (std::size_t row = 0; row < m.dim; ++row)
      m.coaction(col, row, j) = r(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

inline std::string jl(const char* what, const std::string& a, const std::string& b) {
  return std::string(what) + "(" + a + "," + b + ")";
}

}  // namespace detail

/// (rho (x) id) rho = (id (x) Delta) rho and (id (x) eta) rho = id.
inline CheckReport check_comodule(const HopfModule& m) {
  detail::validate_module(m);
  detail::HopfView v(m.hopf);
  CheckReport rep("comodule", m.tolerance);
  const std::size_t n = v.n();
  std::vector<Matrix> R(n);
  for (std::size_t j = 0; j < n; ++j) R[j] = coaction_matrix(m, j);
  const auto d = static_cast<Eigen::Index>(m.dim);

  std::vector<Matrix> split(n * n, Matrix::Zero(d, d));
  for (std::size_t l = 0; l < n; ++l)
    for (const auto& e : v.coproduct(l)) split[e.a * n + e.b] += e.value * R[l];
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      rep.record(detail::max_abs(R[j] * R[l] - split[j * n + l]),
                 [&] { return detail::jl("coassoc", v.label(j), v.label(l)); });

  Matrix counit_leg = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < n; ++j) counit_leg += m.hopf.counit[static_cast<Eigen::Index>(j)] * R[j];
  rep.record(detail::max_abs(counit_leg - Matrix::Identity(d, d)), [] { return std::string("counit"); });
  return rep;
}

/// Module axioms for <|, comodule axioms for rho, and compatibility
/// rho(m <| h) = sum m0 <| h1 (x) m1 h2.
inline CheckReport check_hopf_module(const HopfModule& m) {
  detail::validate_module(m);
  detail::HopfView v(m.hopf);
  CheckReport rep("hopf_module", m.tolerance);
  const std::size_t n = v.n();
  const auto d = static_cast<Eigen::Index>(m.dim);
  std::vector<Matrix> L(n), R(n);
  for (std::size_t j = 0; j < n; ++j) {
    L[j] = action_matrix(m, j);
    R[j] = coaction_matrix(m, j);
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool artifact = false;
      Vector ij = v.multiply_basis(i, j, artifact);
      if (artifact) {
        ++rep.artifacts;
        continue;
      }
      Matrix rhs = Matrix::Zero(d, d);
      for (std::size_t p = 0; p < n; ++p) rhs += ij[static_cast<Eigen::Index>(p)] * L[p];
      rep.record(detail::max_abs(L[j] * L[i] - rhs),
                 [&] { return detail::jl("action-assoc", v.label(i), v.label(j)); });
    }
  Matrix unit_act = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < n; ++j) unit_act += m.hopf.unit[static_cast<Eigen::Index>(j)] * L[j];
  rep.record(detail::max_abs(unit_act - Matrix::Identity(d, d)), [] { return std::string("action-unit"); });

  rep.merge(check_comodule(m));

  // compatibility, component by component: R_b L_j = sum Delta(j;j1,j2) m(l,j2;b) L_j1 R_l
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Matrix> rhs(n, Matrix::Zero(d, d));
    bool artifact = false;
    for (const auto& e : v.coproduct(j))
      for (std::size_t l = 0; l < n; ++l) {
        Vector prod = v.multiply_basis(l, e.b, artifact);
        for (std::size_t b = 0; b < n; ++b) {
          Complex c = prod[static_cast<Eigen::Index>(b)];
          if (c != Complex(0.0)) rhs[b] += e.value * c * (L[e.a] * R[l]);
        }
      }
    if (artifact) {
      ++rep.artifacts;
      continue;
    }
    for (std::size_t b = 0; b < n; ++b)
      rep.record(detail::max_abs(R[b] * L[j] - rhs[b]),
                 [&] { return detail::jl("compatibility", v.label(j), v.label(b)); });
  }
  return rep;
}

/// Basis (as columns) of M^coH = { m : rho(m) = m (x) 1 }.
inline Matrix coinvariants(const HopfModule& m) {
  detail::validate_module(m);
  const std::size_t n = m.hopf.dim;
  const auto d = static_cast<Eigen::Index>(m.dim);
  Matrix K = Matrix::Zero(d * static_cast<Eigen::Index>(n), d);
  for (std::size_t a = 0; a < m.dim; ++a)
    for (std::size_t k = 0; k < m.dim; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        Complex v = m.coaction(a, k, j);
        if (a == k) v -= m.hopf.unit[static_cast<Eigen::Index>(j)];
        K(static_cast<Eigen::Index>(k * n + j), static_cast<Eigen::Index>(a)) = v;
      }
  Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > m.tolerance * scale) ++rank;
  return svd.matrixV().rightCols(d - rank);
}

struct StructureTheoremResult {
  CheckReport report;
  std::size_t coinvariant_dim = 0;
  // smallest / largest singular value of the canonical map
  double inverse_condition = 0.0;
};

/// Checks that (v, h) -> v <| h is an isomorphism M^coH (x) H -> M of
/// modules and comodules.
inline StructureTheoremResult verify_structure_theorem(const HopfModule& m) {
  StructureTheoremResult out;
  out.report = CheckReport("structure_theorem", m.tolerance);
  CheckReport& rep = out.report;
  CheckReport hm = check_hopf_module(m);
  if (!hm.passed) {
    rep.fail("not a Hopf module: " + hm.witness);
    rep.max_residual = hm.max_residual;
    return out;
  }
  detail::HopfView v(m.hopf);
  const std::size_t n = v.n();
  Matrix U = coinvariants(m);
  out.coinvariant_dim = static_cast<std::size_t>(U.cols());
  const auto c = U.cols();
  const auto d = static_cast<Eigen::Index>(m.dim);

  std::vector<Matrix> L(n), R(n);
  for (std::size_t j = 0; j < n; ++j) {
    L[j] = action_matrix(m, j);
    R[j] = coaction_matrix(m, j);
  }
  // column p*n + j is u_p <| h_j
  Matrix phi(d, c * static_cast<Eigen::Index>(n));
  for (Eigen::Index p = 0; p < c; ++p)
    for (std::size_t j = 0; j < n; ++j) phi.col(p * static_cast<Eigen::Index>(n) + static_cast<Eigen::Index>(j)) = L[j] * U.col(p);

  if (phi.cols() != d) {
    rep.fail("dim(M)=" + std::to_string(m.dim) + " != dim(M^coH)*dim(H)=" +
             std::to_string(out.coinvariant_dim) + "*" + std::to_string(n));
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(phi);
  const auto& s = svd.singularValues();
  out.inverse_condition = s.size() ? s[s.size() - 1] / s[0] : 0.0;
  if (!(out.inverse_condition > m.tolerance)) {
    rep.fail("canonical map singular, 1/cond=" + format_residual(out.inverse_condition));
    return out;
  }

  for (Eigen::Index p = 0; p < c; ++p)
    for (std::size_t j = 0; j < n; ++j) {
      Vector image = phi.col(p * static_cast<Eigen::Index>(n) + static_cast<Eigen::Index>(j));
      // action: phi(v (x) h_j h_k) = phi(v (x) h_j) <| h_k
      for (std::size_t k = 0; k < n; ++k) {
        bool artifact = false;
        Vector jk = v.multiply_basis(j, k, artifact);
        if (artifact) {
          ++rep.artifacts;
          continue;
        }
        Vector lhs = Vector::Zero(d);
        for (std::size_t q = 0; q < n; ++q)
          lhs += jk[static_cast<Eigen::Index>(q)] * phi.col(p * static_cast<Eigen::Index>(n) + static_cast<Eigen::Index>(q));
        rep.record(detail::max_abs(lhs - L[k] * image),
                   [&] { return "intertwine-action(" + std::to_string(p) + "," + v.label(j) + "," + v.label(k) + ")"; });
      }
      // coaction: rho(phi(v (x) h_j)) = sum phi(v (x) h_j1) (x) h_j2
      for (std::size_t b = 0; b < n; ++b) {
        Vector rhs = Vector::Zero(d);
        for (const auto& e : v.coproduct(j))
          if (e.b == b) rhs += e.value * phi.col(p * static_cast<Eigen::Index>(n) + static_cast<Eigen::Index>(e.a));
        rep.record(detail::max_abs(R[b] * image - rhs),
                   [&] { return "intertwine-coaction(" + std::to_string(p) + "," + v.label(j) + "," + v.label(b) + ")"; });
      }
    }
  return out;
}

/// M = U (x) H with (u (x) h) <| k = u (x) hk and rho(u (x) h) = u (x) h1 (x) h2.
/// Basis index of u_p (x) h_j is p*dim(H) + j.
inline HopfModule regular_hopf_module(const StructureHopf& h, std::size_t dim_u) {
  h.validate_shapes();
  const std::size_t n = h.dim;
  HopfModule m;
  m.hopf = h;
  m.dim = dim_u * n;
  m.tolerance = h.tolerance;
  m.action = Tensor3(m.dim, n, m.dim);
  m.coaction = Tensor3(m.dim, m.dim, n);
  for (std::size_t p = 0; p < dim_u; ++p)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t a = p * n + j;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t q = 0; q < n; ++q) m.action(a, k, p * n + q) = h.mult(j, k, q);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) m.coaction(a, p * n + x, y) = h.comult(j, x, y);
    }
  return m;
}

/// rho(m) = m (x) 1 and m <| h = eta(h) m.
inline HopfModule trivial_module(const StructureHopf& h, std::size_t dim) {
  h.validate_shapes();
  HopfModule m;
  m.hopf = h;
  m.dim = dim;
  m.tolerance = h.tolerance;
  m.action = Tensor3(dim, h.dim, dim);
  m.coaction = Tensor3(dim, dim, h.dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t j = 0; j < h.dim; ++j) {
      m.action(a, j, a) = h.counit[static_cast<Eigen::Index>(j)];
      m.coaction(a, a, j) = h.unit[static_cast<Eigen::Index>(j)];
    }
  return m;
}

/// Re-expresses a module in the basis given by the columns of P.
inline HopfModule change_basis(const HopfModule& m, const Matrix& P) {
  detail::validate_module(m);
  const auto d = static_cast<Eigen::Index>(m.dim);
  if (P.rows() != d || P.cols() != d) throw Error(ErrorCode::shape_mismatch, "basis change must be dim x dim");
  Eigen::FullPivLU<Matrix> lu(P);
  if (!lu.isInvertible()) throw Error(ErrorCode::domain, "basis change is singular");
  Matrix Pinv = lu.inverse();
  HopfModule out = m;
  for (std::size_t j = 0; j < m.hopf.dim; ++j) {
    detail::set_action(out, j, Pinv * action_matrix(m, j) * P);
    detail::set_coaction(out, j, Pinv * coaction_matrix(m, j) * P);
  }
  return out;
}

}  // namespace qstat
