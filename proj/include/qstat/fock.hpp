#pragma once

// Truncated Fock representation of the Wick algebra on the word basis of A:
// creation by left multiplication, annihilation by contraction through the
// twist, vacuum |0> = empty word with <0|0> = 1.

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/freealg.hpp"
#include "qstat/groups.hpp"
#include "qstat/linalg.hpp"
#include "qstat/report.hpp"
#include "qstat/wick.hpp"

namespace qstat {

struct FockOptions {
  // Non-normalized commutation factors (q-deformed oscillators) only make
  // sense when the caller opts in.
  bool require_normalized = true;
};

/// Degree-graded truncated Fock space. Degree d holds the words of length d;
/// after null_quotient each block is replaced by an orthonormal basis of the
/// positive part of its Gram matrix, described by `embedding`/`projection`.
struct FockRep {
  TwistSpec twist;
  std::size_t cutoff = 0;
  std::vector<std::vector<Word>> basis;
  std::vector<Matrix> embedding;   // per degree: working coords -> word coords
  std::vector<Matrix> projection;  // per degree: word coords -> working coords
  // creation[i][d] maps degree d to d+1, annihilation[i][d] maps d+1 to d,
  // for d < cutoff. Creation out of the top degree is zero.
  std::vector<std::vector<Matrix>> creation;
  std::vector<std::vector<Matrix>> annihilation;
  std::vector<Matrix> gram;
  double tolerance = default_tolerance;
  bool quotient = false;

  std::size_t generators() const { return creation.size(); }
  std::size_t dim(std::size_t d) const { return static_cast<std::size_t>(gram.at(d).rows()); }

  std::size_t offset(std::size_t d) const {
    std::size_t o = 0;
    for (std::size_t k = 0; k < d; ++k) o += dim(k);
    return o;
  }
  std::size_t total_dim() const { return offset(cutoff + 1); }

  /// Operator on the whole truncated space, assembled from the blocks.
  Matrix full_creation(std::size_t i) const { return assemble(creation.at(i), true); }
  Matrix full_annihilation(std::size_t i) const { return assemble(annihilation.at(i), false); }

  Matrix full_gram() const {
    const auto n = static_cast<Eigen::Index>(total_dim());
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t d = 0; d <= cutoff; ++d) {
      const auto o = static_cast<Eigen::Index>(offset(d));
      out.block(o, o, gram[d].rows(), gram[d].cols()) = gram[d];
    }
    return out;
  }

 private:
  Matrix assemble(const std::vector<Matrix>& blocks, bool raising) const {
    const auto n = static_cast<Eigen::Index>(total_dim());
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t d = 0; d < cutoff; ++d) {
      const auto lo = static_cast<Eigen::Index>(offset(d));
      const auto hi = static_cast<Eigen::Index>(offset(d + 1));
      const Matrix& b = blocks[d];
      if (raising)
        out.block(hi, lo, b.rows(), b.cols()) = b;
      else
        out.block(lo, hi, b.rows(), b.cols()) = b;
    }
    return out;
  }
};

namespace detail {

inline std::map<Word, Eigen::Index> index_words(const std::vector<Word>& ws) {
  std::map<Word, Eigen::Index> idx;
  for (std::size_t k = 0; k < ws.size(); ++k) idx.emplace(ws[k], static_cast<Eigen::Index>(k));
  return idx;
}

}  // namespace detail

/// Builds the representation up to `cutoff` particles. Requires the
/// *-twist condition (Hermitian pairing, conjugate-symmetric exchange
/// factors) and, unless opted out, a normalized commutation factor.
inline FockRep build_fock(const TwistSpec& t, std::size_t cutoff, FockOptions options = {}) {
  if (cutoff < 1) throw Error(ErrorCode::domain, "Fock cutoff must be at least 1");
  if (options.require_normalized) {
    AxiomVerdict v = is_normalized(t.bicharacter);
    if (!v)
      throw Error(ErrorCode::non_normalized, "bicharacter is not normalized at generator pair (" +
                                                 std::to_string(v.witness->first) + "," +
                                                 std::to_string(v.witness->second) + ")");
  }
  WickAlgebra alg(t);
  CheckReport star = check_star_twist(alg, 2);
  if (!star.passed)
    throw Error(ErrorCode::precondition, "*-twist condition fails at " + star.witness +
                                             " (pairing must be Hermitian)");

  const std::size_t n = t.generators();
  FockRep f;
  f.twist = t;
  f.cutoff = cutoff;
  f.tolerance = t.tolerance();
  for (std::size_t d = 0; d <= cutoff; ++d) f.basis.push_back(enumerate_words(n, d, LetterSet::unstarred));
  std::vector<std::map<Word, Eigen::Index>> index;
  for (const auto& ws : f.basis) index.push_back(detail::index_words(ws));
  auto dim = [&](std::size_t d) { return static_cast<Eigen::Index>(f.basis[d].size()); };

  f.creation.assign(n, {});
  f.annihilation.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const Letter x{static_cast<std::uint32_t>(i), false};
    for (std::size_t d = 0; d < cutoff; ++d) {
      Matrix c = Matrix::Zero(dim(d + 1), dim(d));
      for (std::size_t k = 0; k < f.basis[d].size(); ++k)
        c(index[d + 1].at(concat(Word{x}, f.basis[d][k])), static_cast<Eigen::Index>(k)) = 1.0;
      f.creation[i].push_back(std::move(c));

      // a_i w = star-free part of x*_i w
      Matrix a = Matrix::Zero(dim(d), dim(d + 1));
      for (std::size_t k = 0; k < f.basis[d + 1].size(); ++k)
        for (const auto& [w, coeff] : alg.twist(Word{x.toggled()}, f.basis[d + 1][k]).terms())
          if (w.size() == d) a(index[d].at(w), static_cast<Eigen::Index>(k)) += coeff;
      f.annihilation[i].push_back(std::move(a));
    }
  }

  // <w, w'> = vacuum coefficient of w* w'
  for (std::size_t d = 0; d <= cutoff; ++d) {
    Matrix g = Matrix::Zero(dim(d), dim(d));
    for (Eigen::Index r = 0; r < dim(d); ++r) {
      Word left = involution(f.basis[d][static_cast<std::size_t>(r)]);
      for (Eigen::Index c = 0; c < dim(d); ++c)
        g(r, c) = alg.twist(left, f.basis[d][static_cast<std::size_t>(c)]).coefficient(Word{});
    }
    f.gram.push_back(std::move(g));
    f.embedding.push_back(Matrix::Identity(dim(d), dim(d)));
    f.projection.push_back(Matrix::Identity(dim(d), dim(d)));
  }
  return f;
}

inline const Matrix& gram_matrix(const FockRep& f, std::size_t degree) {
  if (degree > f.cutoff) throw Error(ErrorCode::domain, "degree exceeds the Fock cutoff");
  return f.gram[degree];
}

enum class Definiteness { positive_definite, semidefinite, indefinite };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite: return "positive-definite";
    case Definiteness::semidefinite: return "semidefinite";
    case Definiteness::indefinite: return "indefinite";
  }
  return "?";
}

struct DegreePositivity {
  std::size_t degree = 0;
  std::size_t dim = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t kernel_dim = 0;
  Definiteness verdict = Definiteness::positive_definite;
};

struct PositivityReport {
  std::vector<DegreePositivity> degrees;

  bool positive_semidefinite() const {
    for (const auto& d : degrees)
      if (d.verdict == Definiteness::indefinite) return false;
    return true;
  }
  bool positive_definite() const {
    for (const auto& d : degrees)
      if (d.verdict != Definiteness::positive_definite) return false;
    return true;
  }
};

namespace detail {

/// Eigenvalues at or below this are treated as zero.
inline double eigen_floor(const Eigen::VectorXd& ev, double tol) {
  double scale = 1.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) scale = std::max(scale, std::abs(ev[k]));
  return tol * scale;
}

}  // namespace detail

inline PositivityReport positivity_report(const FockRep& f, std::size_t max_degree) {
  PositivityReport rep;
  for (std::size_t d = 0; d <= std::min(max_degree, f.cutoff); ++d) {
    DegreePositivity p;
    p.degree = d;
    p.dim = f.dim(d);
    if (p.dim > 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(f.gram[d], Eigen::EigenvaluesOnly);
      const Eigen::VectorXd& ev = es.eigenvalues();
      p.min_eigenvalue = ev.minCoeff();
      p.max_eigenvalue = ev.maxCoeff();
      const double floor = detail::eigen_floor(ev, f.tolerance);
      bool negative = false;
      for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (std::abs(ev[k]) <= floor)
          ++p.kernel_dim;
        else if (ev[k] < 0)
          negative = true;
      }
      p.verdict = negative ? Definiteness::indefinite
                           : (p.kernel_dim > 0 ? Definiteness::semidefinite : Definiteness::positive_definite);
    }
    rep.degrees.push_back(p);
  }
  return rep;
}

/// Quotient by the null states of the Gram form: each block becomes an
/// orthonormal basis of the positive part and the operators are compressed
/// accordingly. Null states are preserved by creation and annihilation, so
/// the compressed operators still represent the algebra.
inline FockRep null_quotient(const FockRep& f) {
  if (!positivity_report(f, f.cutoff).positive_semidefinite())
    throw Error(ErrorCode::precondition, "Gram form is indefinite; no null-state quotient");
  FockRep out = f;
  std::vector<Matrix> P(f.cutoff + 1), E(f.cutoff + 1);
  for (std::size_t d = 0; d <= f.cutoff; ++d) {
    const auto n = f.gram[d].rows();
    if (n == 0) {
      P[d] = Matrix(0, 0);
      E[d] = Matrix(0, 0);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(f.gram[d]);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double floor = detail::eigen_floor(ev, f.tolerance);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < n; ++k)
      if (ev[k] > floor) keep.push_back(k);
    const auto r = static_cast<Eigen::Index>(keep.size());
    P[d] = Matrix(r, n);
    E[d] = Matrix(n, r);
    // largest eigenvalue first gives a deterministic ordering
    for (Eigen::Index q = 0; q < r; ++q) {
      Eigen::Index k = keep[static_cast<std::size_t>(r - 1 - q)];
      const double s = std::sqrt(ev[k]);
      P[d].row(q) = s * es.eigenvectors().col(k).adjoint();
      E[d].col(q) = es.eigenvectors().col(k) / s;
    }
  }
  for (std::size_t i = 0; i < f.generators(); ++i)
    for (std::size_t d = 0; d < f.cutoff; ++d) {
      out.creation[i][d] = P[d + 1] * f.creation[i][d] * E[d];
      out.annihilation[i][d] = P[d] * f.annihilation[i][d] * E[d + 1];
    }
  for (std::size_t d = 0; d <= f.cutoff; ++d) {
    const auto r = P[d].rows();
    out.gram[d] = Matrix::Identity(r, r);
    out.embedding[d] = f.embedding[d] * E[d];
    out.projection[d] = P[d] * f.projection[d];
  }
  out.quotient = true;
  return out;
}

namespace detail {

/// Left multiplication by a word on the word basis, degree d -> d + |w|.
inline Matrix word_operator(const FockRep& f, const Word& w, std::size_t d) {
  const std::size_t e = d + w.size();
  auto idx = index_words(f.basis[e]);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(f.basis[e].size()), static_cast<Eigen::Index>(f.basis[d].size()));
  for (std::size_t k = 0; k < f.basis[d].size(); ++k) m(idx.at(concat(w, f.basis[d][k])), static_cast<Eigen::Index>(k)) = 1.0;
  return f.projection[e] * m * f.embedding[d];
}

}  // namespace detail

/// Matrix identities on the truncated space, top degree excluded:
///   a_i a*_j - eps a*_j a_i = g_ij          (commutation)
///   pi(x_i) pi(x_j) = pi(x_i x_j)           (creation_product)
///   <0| a_i a*_j |0> = g_ij, a_i |0> = 0    (vacuum)
///   C_i^H G_{d+1} = G_d A_i                 (adjointness)
/// plus, after a quotient, a*_i a*_i = 0 and a_i a_i = 0 for every
/// generator whose self-exchange factor is -1 (exclusion).
inline std::vector<CheckReport> verify_representation(const FockRep& f) {
  WickAlgebra alg(f.twist);
  const std::size_t n = f.generators();
  const double tol = f.tolerance;
  CheckReport comm("commutation", tol), prod("creation_product", tol), vac("vacuum", tol),
      adj("adjointness", tol), excl("exclusion", tol);
  auto tag = [&](const char* what, std::size_t i, std::size_t j, std::size_t d) {
    return std::string(what) + "(" + std::to_string(i) + "," + std::to_string(j) + ",deg" + std::to_string(d) + ")";
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex c = alg.exchange(i, j), g = alg.pair(i, j);
      for (std::size_t d = 0; d < f.cutoff; ++d) {
        const auto m = static_cast<Eigen::Index>(f.dim(d));
        Matrix lhs = f.annihilation[i][d] * f.creation[j][d];
        if (d > 0) lhs -= c * (f.creation[j][d - 1] * f.annihilation[i][d - 1]);
        lhs -= g * Matrix::Identity(m, m);
        comm.record(detail::max_abs(lhs), [&] { return tag("commutation", i, j, d); });
      }
      for (std::size_t d = 0; d + 2 <= f.cutoff; ++d) {
        Word w{Letter{static_cast<std::uint32_t>(i), false}, Letter{static_cast<std::uint32_t>(j), false}};
        Matrix lhs = f.creation[i][d + 1] * f.creation[j][d];
        prod.record(detail::max_abs(lhs - detail::word_operator(f, w, d)), [&] { return tag("product", i, j, d); });
      }
      Complex vev = (f.annihilation[i][0] * f.creation[j][0])(0, 0);
      vac.record(std::abs(vev - g), [&] { return tag("vacuum-pairing", i, j, 0); });
    }

  for (std::size_t i = 0; i < n; ++i) {
    Word s{Letter{static_cast<std::uint32_t>(i), true}};
    vac.record(std::abs(alg.twist(s, Word{}).coefficient(Word{})), [&] { return tag("annihilates-vacuum", i, i, 0); });
    for (std::size_t d = 0; d < f.cutoff; ++d) {
      Matrix lhs = f.creation[i][d].adjoint() * f.gram[d + 1];
      Matrix rhs = f.gram[d] * f.annihilation[i][d];
      double scale = std::max(1.0, std::max(detail::max_abs(lhs), detail::max_abs(rhs)));
      adj.record(detail::max_abs(lhs - rhs) / scale, [&] { return tag("adjoint", i, i, d); });
    }
    if (f.quotient && std::abs(alg.exchange(i, i) + Complex(1.0)) <= tol) {
      for (std::size_t d = 0; d + 2 <= f.cutoff; ++d) {
        excl.record(detail::max_abs(f.creation[i][d + 1] * f.creation[i][d]), [&] { return tag("create-twice", i, i, d); });
        excl.record(detail::max_abs(f.annihilation[i][d] * f.annihilation[i][d + 1]), [&] { return tag("annihilate-twice", i, i, d); });
      }
    }
  }
  std::vector<CheckReport> out{comm, prod, vac, adj};
  if (excl.checked > 0) out.push_back(excl);
  return out;
}

/// Dense per-degree blocks as CSV (row-major, entries `re+imj`) and a
/// manifest.csv listing the degree dimensions.
inline void export_fock_csv(const FockRep& f, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, const Matrix& m) {
    std::ofstream os(dir / name);
    if (!os) throw Error(ErrorCode::io, "cannot write " + (dir / name).string());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) os << ',';
        os << format_complex_csv(m(r, c));
      }
      os << '\n';
    }
  };
  {
    std::ofstream os(dir / "manifest.csv");
    if (!os) throw Error(ErrorCode::io, "cannot write manifest");
    os << "degree,dim\n";
    for (std::size_t d = 0; d <= f.cutoff; ++d) os << d << ',' << f.dim(d) << '\n';
  }
  for (std::size_t d = 0; d <= f.cutoff; ++d) write("gram_" + std::to_string(d) + ".csv", f.gram[d]);
  for (std::size_t i = 0; i < f.generators(); ++i) {
    const std::string& name = f.twist.alphabet.generator(i).name;
    for (std::size_t d = 0; d < f.cutoff; ++d) {
      write("creation_" + name + "_" + std::to_string(d) + ".csv", f.creation[i][d]);
      write("annihilation_" + name + "_" + std::to_string(d) + ".csv", f.annihilation[i][d]);
    }
  }
}

}  // namespace qstat
