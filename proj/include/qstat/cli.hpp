#pragma once

// Subcommand dispatch behind the qstat tool. Every command writes
// line-oriented records to the given stream:
//
//   CHECK <name> PASS|FAIL residual=<r> witness=<...>
//   CHECK normalized WAIVED ...      (non-normalized factor, opted in)
//   POSITIVITY degree=<d> dim=<n> min_eigenvalue=<x> verdict=<...>
//   GRAM degree=<d> dim=<n> [[...]]
//   RESULT PASS|FAIL
//
// Exit status: 0 when every check passes, 1 on a failed check; thrown
// qstat::Error values are mapped to 10 + code by the caller.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/config.hpp"
#include "qstat/fock.hpp"
#include "qstat/freealg.hpp"
#include "qstat/groups.hpp"
#include "qstat/hopf.hpp"
#include "qstat/report.hpp"
#include "qstat/syntax.hpp"
#include "qstat/wick.hpp"

namespace qstat::cli {

struct Invocation {
  std::string command;
  std::vector<std::string> args;
  std::filesystem::path out_dir = "fock_export";
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> all = {"check-bicharacter", "check-hopf", "check-twist", "normal-order",
                                               "gram", "fock-export", "verify-all"};
  return all;
}

inline bool needs_fock(const std::string& command) {
  return command == "gram" || command == "fock-export" || command == "verify-all";
}

inline int exit_code(const Error& e) { return 10 + static_cast<int>(e.code()); }

namespace detail {

class Emitter {
 public:
  Emitter(std::ostream& os, bool stop_on_fail) : os_(os), stop_(stop_on_fail) {}

  /// Prints the record; false once a failure should end the run.
  bool emit(const CheckReport& r) {
    os_ << r.line() << '\n';
    if (!r.passed && !failed_) {
      failed_ = true;
      first_failure_ = r.name;
    }
    return !(stop_ && failed_);
  }

  bool emit(const std::vector<CheckReport>& rs) {
    for (const auto& r : rs)
      if (!emit(r)) return false;
    return true;
  }

  std::ostream& os() { return os_; }
  bool failed() const { return failed_; }

  int finish() {
    os_ << (failed_ ? "RESULT FAIL first=" + first_failure_ : std::string("RESULT PASS")) << '\n';
    return failed_ ? 1 : 0;
  }

 private:
  std::ostream& os_;
  bool stop_;
  bool failed_ = false;
  std::string first_failure_;
};

inline std::size_t parse_count(const Invocation& inv, const char* what) {
  if (inv.args.size() != 1) throw Error(ErrorCode::domain, inv.command + " expects one argument <" + what + ">");
  const std::string& s = inv.args[0];
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(ErrorCode::domain, std::string(what) + " must be a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(std::stoul(s));
}

inline std::string format_entry(Complex z) {
  return z.imag() == 0.0 ? qstat::detail::format_real(z.real()) : format_complex_csv(z);
}

inline std::string format_matrix(const Matrix& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) s += ", ";
    s += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ", ";
      s += format_entry(m(r, c));
    }
    s += "]";
  }
  return s + "]";
}

inline CheckReport verdict_report(const char* name, const AxiomVerdict& v, double tol) {
  CheckReport r(name, tol);
  r.checked = 1;
  r.max_residual = v.residual;
  if (!v.holds) r.fail("gen(" + std::to_string(v.witness->first) + "," + std::to_string(v.witness->second) + ")");
  return r;
}

/// Elements with free coordinates in [-radius, radius] and every torsion
/// residue.
inline std::vector<GroupElement> element_box(const AbelianGroup& g, long long radius) {
  std::vector<GroupElement> out{g.zero()};
  for (std::size_t i = 0; i < g.rank(); ++i) {
    auto m = g.generator_order(i);
    const long long lo = m ? 0 : -radius, hi = m ? std::min(*m - 1, 7LL) : radius;
    std::vector<GroupElement> next;
    for (const auto& e : out)
      for (long long c = lo; c <= hi; ++c) {
        std::vector<long long> coords = e.coords();
        coords[i] = c;
        next.push_back(g.element(coords));
      }
    out = std::move(next);
  }
  return out;
}

inline bool stage_bicharacter(const SystemConfig& cfg, Emitter& em) {
  const Bicharacter& b = cfg.bicharacter;
  const double tol = cfg.tolerance;
  CheckReport norm = verdict_report("normalized", is_normalized(b), tol);
  if (!norm.passed && cfg.allow_unnormalized) {
    std::string line = norm.line();
    line.replace(line.find(" FAIL "), 6, " WAIVED ");
    em.os() << line << '\n';
  } else if (!em.emit(norm)) {
    return false;
  }
  if (!em.emit(verdict_report("torsion", validate_torsion(b), tol))) return false;

  CheckReport bimult("bimultiplicative", tol);
  const auto& g = b.group();
  auto box = element_box(g, g.rank() <= 2 ? 2 : 1);
  for (const auto& x : box)
    for (const auto& y : box)
      for (const auto& z : box) {
        Complex l1 = b(g.add(x, y), z), r1 = b(x, z) * b(y, z);
        Complex l2 = b(x, g.add(y, z)), r2 = b(x, y) * b(x, z);
        double scale = std::max({1.0, std::abs(l1), std::abs(l2)});
        bimult.record(std::max(std::abs(l1 - r1), std::abs(l2 - r2)) / scale,
                      [&] { return x.str() + "," + y.str() + "," + z.str(); });
      }
  if (!em.emit(bimult)) return false;

  CheckReport hex("hexagons", tol);
  const std::size_t max_len = cfg.alphabet.size() <= 3 ? 2 : 1;
  auto words = enumerate_words_upto(cfg.alphabet.size(), max_len, LetterSet::mixed);
  for (const Word& u : words)
    for (const Word& v : words)
      for (const Word& w : words) {
        CheckReport one = check_hexagons(b, cfg.alphabet, u, v, w);
        hex.checked += one.checked;
        hex.max_residual = std::max(hex.max_residual, one.max_residual);
        if (!one.passed) hex.fail(one.witness);
      }
  return em.emit(hex);
}

inline bool stage_hopf(const SystemConfig& cfg, Emitter& em) {
  const StructureHopf h = cfg.hopf ? *cfg.hopf : make_group_hopf(cfg.group, cfg.hopf_truncation, cfg.tolerance);
  em.os() << "HOPF dim=" << h.dim << " source=" << (cfg.hopf ? "explicit" : "group-algebra") << '\n';
  for (auto check : {check_algebra, check_coalgebra, check_bialgebra, check_antipode})
    if (!em.emit(check(h))) return false;
  if (cfg.hopf) {
    if (cfg.cqt_form && !em.emit(check_cqt(CqtForm{h, *cfg.cqt_form}))) return false;
  } else if (!em.emit(check_cqt(bicharacter_to_cqt(cfg.bicharacter, cfg.hopf_truncation)))) {
    return false;
  }
  if (!h.product_defined.empty()) {
    em.os() << "SKIP hopf_module reason=truncated-basis\n";
    return true;
  }

  // a regular module in a seeded random basis
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  HopfModule m = regular_hopf_module(h, 2);
  const auto d = static_cast<Eigen::Index>(m.dim);
  Matrix P = Matrix::Identity(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) P(r, c) += 0.3 * Complex(unif(rng), unif(rng));
  m = change_basis(m, P);
  if (!em.emit(check_comodule(m))) return false;
  if (!em.emit(check_hopf_module(m))) return false;
  StructureTheoremResult st = verify_structure_theorem(m);
  return em.emit(st.report);
}

inline GradedPoly random_normal_poly(std::mt19937_64& rng, std::size_t n_gens, double tol) {
  std::uniform_int_distribution<int> terms(1, 3), len(0, 2), gen(0, static_cast<int>(n_gens) - 1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GradedPoly p(tol);
  for (int t = terms(rng); t > 0; --t) {
    Word a, s;
    for (int k = len(rng); k > 0; --k) a.push_back(Letter{static_cast<std::uint32_t>(gen(rng)), false});
    for (int k = len(rng); k > 0; --k) s.push_back(Letter{static_cast<std::uint32_t>(gen(rng)), true});
    p.add(concat(a, s), Complex(unif(rng), unif(rng)));
  }
  return p;
}

inline bool stage_twist(const SystemConfig& cfg, Emitter& em) {
  WickAlgebra alg(cfg.twist());
  const std::size_t n = alg.generators();
  const std::size_t short_len = n <= 2 ? 3 : 2;
  if (!em.emit(check_twist_axioms(alg, short_len))) return false;
  if (!em.emit(check_star_twist(alg, short_len))) return false;
  if (!em.emit(check_associativity(alg, n <= 2 ? 2 : 1))) return false;
  if (!em.emit(check_commutation_relations(alg))) return false;
  if (!em.emit(check_confluence(alg, n <= 2 ? 4 : 3))) return false;
  if (!em.emit(check_rewrite_matches_product(alg, n <= 2 ? 4 : 3))) return false;

  CheckReport rnd("random_associativity", cfg.tolerance);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < 25; ++trial) {
    GradedPoly p = random_normal_poly(rng, n, cfg.tolerance);
    GradedPoly q = random_normal_poly(rng, n, cfg.tolerance);
    GradedPoly r = random_normal_poly(rng, n, cfg.tolerance);
    GradedPoly lhs = alg.multiply(alg.multiply(p, q), r);
    GradedPoly rhs = alg.multiply(p, alg.multiply(q, r));
    rnd.record(distance(lhs, rhs) / std::max({1.0, lhs.norm(), rhs.norm()}),
               [&] { return "trial" + std::to_string(trial); });
  }
  return em.emit(rnd);
}

inline void print_positivity(std::ostream& os, const PositivityReport& pos) {
  for (const auto& d : pos.degrees) {
    os << "POSITIVITY degree=" << d.degree << " dim=" << d.dim
       << " min_eigenvalue=" << qstat::detail::format_real(std::abs(d.min_eigenvalue) <= 1e-12 * std::max(1.0, std::abs(d.max_eigenvalue)) ? 0.0 : d.min_eigenvalue) << " verdict=" << to_string(d.verdict);
    if (d.verdict == Definiteness::semidefinite) os << " kernel=" << d.kernel_dim;
    os << '\n';
  }
}

inline bool stage_fock(const SystemConfig& cfg, Emitter& em) {
  FockRep f = build_fock(cfg.twist(), cfg.cutoff, cfg.fock_options());
  CheckReport herm("gram_hermitian", cfg.tolerance);
  for (std::size_t d = 0; d <= f.cutoff; ++d)
    herm.record(qstat::detail::max_abs(f.gram[d] - f.gram[d].adjoint()) / std::max(1.0, qstat::detail::max_abs(f.gram[d])),
                [&] { return "deg" + std::to_string(d); });
  if (!em.emit(herm)) return false;
  if (!em.emit(verify_representation(f))) return false;

  PositivityReport pos = positivity_report(f, f.cutoff);
  print_positivity(em.os(), pos);
  CheckReport psd("positivity", cfg.tolerance);
  for (const auto& d : pos.degrees) {
    psd.record(d.verdict == Definiteness::indefinite ? -d.min_eigenvalue : 0.0,
               [&] { return "deg" + std::to_string(d.degree); });
  }
  if (!em.emit(psd)) return false;
  if (pos.positive_definite()) return true;

  FockRep q = null_quotient(f);
  em.os() << "QUOTIENT dims=";
  for (std::size_t d = 0; d <= q.cutoff; ++d) em.os() << (d ? "," : "") << q.dim(d);
  em.os() << '\n';
  std::vector<CheckReport> reps = verify_representation(q);
  for (auto& r : reps) r.name = "quotient_" + r.name;
  return em.emit(reps);
}

}  // namespace detail

/// Runs one subcommand against a validated config. The config must have been
/// parsed with fock_requested = needs_fock(command).
inline int run_subcommand(const Invocation& inv, const SystemConfig& cfg, std::ostream& out) {
  const std::string& cmd = inv.command;
  auto no_args = [&] {
    if (!inv.args.empty()) throw Error(ErrorCode::domain, cmd + " takes no arguments");
  };
  if (cmd == "check-bicharacter") {
    no_args();
    detail::Emitter em(out, false);
    detail::stage_bicharacter(cfg, em);
    return em.finish();
  }
  if (cmd == "check-hopf") {
    no_args();
    detail::Emitter em(out, false);
    detail::stage_hopf(cfg, em);
    return em.finish();
  }
  if (cmd == "check-twist") {
    no_args();
    detail::Emitter em(out, false);
    detail::stage_twist(cfg, em);
    return em.finish();
  }
  if (cmd == "normal-order") {
    if (inv.args.empty()) throw Error(ErrorCode::expression, "normal-order expects an expression");
    std::string text;
    for (const auto& a : inv.args) text += (text.empty() ? "" : " ") + a;
    WickAlgebra alg(cfg.twist());
    out << to_string(alg.normal_order(parse_expression(text, cfg.alphabet, cfg.tolerance)), cfg.alphabet) << '\n';
    return 0;
  }
  if (cmd == "gram") {
    const std::size_t max_degree = detail::parse_count(inv, "max_degree");
    FockRep f = build_fock(cfg.twist(), std::max<std::size_t>(max_degree, 1), cfg.fock_options());
    for (std::size_t d = 0; d <= max_degree; ++d)
      out << "GRAM degree=" << d << " dim=" << f.dim(d) << ' ' << detail::format_matrix(f.gram[d]) << '\n';
    return 0;
  }
  if (cmd == "fock-export") {
    const std::size_t cutoff = detail::parse_count(inv, "cutoff");
    FockRep f = build_fock(cfg.twist(), cutoff, cfg.fock_options());
    export_fock_csv(f, inv.out_dir);
    out << "EXPORT dir=" << inv.out_dir.string() << " cutoff=" << cutoff << " total_dim=" << f.total_dim() << '\n';
    detail::print_positivity(out, positivity_report(f, cutoff));
    return 0;
  }
  if (cmd == "verify-all") {
    no_args();
    detail::Emitter em(out, true);
    (void)(detail::stage_bicharacter(cfg, em) && detail::stage_hopf(cfg, em) && detail::stage_twist(cfg, em) &&
           detail::stage_fock(cfg, em));
    return em.finish();
  }
  throw Error(ErrorCode::unknown_command, "unknown subcommand '" + cmd + "'");
}

}  // namespace qstat::cli
