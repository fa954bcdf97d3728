#pragma once

// Text configuration for the command-line tool. Sections hold `key = value`
// lines; values are numbers, complex literals (`1.5`, `2j`, `0.5-1j`),
// booleans, or bracketed arrays that may nest and span lines. `#` starts a
// comment.
//
//   [group]        free_rank, torsion_orders
//   [bicharacter]  gen_table
//   [generators]   <name> = [grade coords]    (declaration order is kept)
//   [pairing]      matrix
//   [fock]         cutoff, allow_unnormalized
//   [hopf]         truncation, or explicit mult/unit/comult/counit/antipode
//                  with an optional CQT form
//   [run]          tolerance, seed

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstat/common.hpp"
#include "qstat/fock.hpp"
#include "qstat/freealg.hpp"
#include "qstat/groups.hpp"
#include "qstat/hopf.hpp"
#include "qstat/linalg.hpp"
#include "qstat/wick.hpp"

namespace qstat {

struct SourcePos {
  std::size_t line = 1;
  std::size_t col = 1;

  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct ConfigValue {
  enum class Kind { number, boolean, array };
  Kind kind = Kind::number;
  Complex number;
  bool flag = false;
  std::vector<ConfigValue> items;
  SourcePos pos;
};

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  SourcePos pos;
};

struct ConfigSection {
  std::string name;
  SourcePos pos;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

namespace detail {

class ConfigLexer {
 public:
  explicit ConfigLexer(std::string_view text) : text_(text) {}

  std::vector<ConfigSection> parse() {
    std::vector<ConfigSection> sections;
    std::set<std::string> seen;
    for (;;) {
      skip_blank(true);
      if (done()) return sections;
      SourcePos at = pos();
      if (cur() == '[') {
        advance();
        skip_blank(false);
        std::string name = identifier("section name");
        skip_blank(false);
        expect(']');
        end_of_line();
        if (!seen.insert(name).second) fail(at, "duplicate section [" + name + "]", ErrorCode::parse);
        sections.push_back({name, at, {}});
        continue;
      }
      if (sections.empty()) fail(at, "key outside of any section", ErrorCode::parse);
      std::string key = identifier("key");
      skip_blank(false);
      expect('=');
      skip_blank(false);
      ConfigValue v = value();
      end_of_line();
      auto& sec = sections.back();
      if (sec.find(key)) fail(at, "duplicate key '" + key + "'", ErrorCode::parse);
      sec.entries.push_back({key, std::move(v), at});
    }
  }

 private:
  [[noreturn]] static void fail(SourcePos p, const std::string& what, ErrorCode code) {
    throw Error(code, "config " + p.str() + ": " + what);
  }
  [[noreturn]] void fail_here(const std::string& what) const { fail(pos(), what, ErrorCode::parse); }

  bool done() const { return i_ >= text_.size(); }
  char cur() const { return text_[i_]; }
  SourcePos pos() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_blank(bool newlines) {
    while (!done()) {
      char c = cur();
      if (c == '#') {
        while (!done() && cur() != '\n') advance();
      } else if (c == '\n' ? newlines : std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (done() || cur() != c) fail_here(std::string("expected '") + c + "'");
    advance();
  }

  void end_of_line() {
    skip_blank(false);
    if (!done() && cur() != '\n') fail_here("unexpected '" + std::string(1, cur()) + "'");
  }

  std::string identifier(const char* what) {
    std::string s;
    while (!done() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')) {
      s += cur();
      advance();
    }
    if (!is_identifier(s)) fail_here(std::string("expected ") + what);
    return s;
  }

  ConfigValue value() {
    ConfigValue v;
    v.pos = pos();
    if (done()) fail_here("expected a value");
    if (cur() == '[') {
      v.kind = ConfigValue::Kind::array;
      advance();
      skip_blank(true);
      if (!done() && cur() == ']') {
        advance();
        return v;
      }
      for (;;) {
        v.items.push_back(value());
        skip_blank(true);
        if (done()) fail_here("unterminated array");
        if (cur() == ',') {
          advance();
          skip_blank(true);
          continue;
        }
        if (cur() == ']') {
          advance();
          return v;
        }
        fail_here("expected ',' or ']'");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(cur()))) {
      std::string word = identifier("value");
      if (word != "true" && word != "false") fail(v.pos, "unknown literal '" + word + "'", ErrorCode::parse);
      v.kind = ConfigValue::Kind::boolean;
      v.flag = word == "true";
      return v;
    }
    v.number = complex_literal();
    return v;
  }

  // real, imaginary (`2j`) or `re+imj` / `re-imj`
  Complex complex_literal() {
    SourcePos start = pos();
    double re = real_literal(start);
    if (!done() && cur() == 'j') {
      advance();
      return {0.0, re};
    }
    if (!done() && (cur() == '+' || cur() == '-')) {
      double im = real_literal(start);
      if (done() || cur() != 'j') fail(start, "complex literal must end in 'j'", ErrorCode::parse);
      advance();
      return {re, im};
    }
    return {re, 0.0};
  }

  double real_literal(SourcePos start) {
    std::string buf;
    if (!done() && (cur() == '+' || cur() == '-')) {
      buf += cur();
      advance();
    }
    auto digits = [&] {
      while (!done() && std::isdigit(static_cast<unsigned char>(cur()))) {
        buf += cur();
        advance();
      }
    };
    digits();
    if (!done() && cur() == '.') {
      buf += cur();
      advance();
      digits();
    }
    if (!done() && (cur() == 'e' || cur() == 'E')) {
      buf += cur();
      advance();
      if (!done() && (cur() == '+' || cur() == '-')) {
        buf += cur();
        advance();
      }
      digits();
    }
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
      fail(start, "malformed number", ErrorCode::parse);
    return v;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

[[noreturn]] inline void config_fail(SourcePos p, const std::string& what, ErrorCode code) {
  throw Error(code, "config " + p.str() + ": " + what);
}

inline Complex as_number(const ConfigValue& v, const char* what) {
  if (v.kind != ConfigValue::Kind::number) config_fail(v.pos, std::string(what) + " must be a number", ErrorCode::parse);
  return v.number;
}

inline double as_real(const ConfigValue& v, const char* what) {
  Complex z = as_number(v, what);
  if (z.imag() != 0.0) config_fail(v.pos, std::string(what) + " must be real", ErrorCode::parse);
  return z.real();
}

inline long long as_integer(const ConfigValue& v, const char* what) {
  double x = as_real(v, what);
  if (x != std::floor(x) || std::abs(x) > 9.0e15)
    config_fail(v.pos, std::string(what) + " must be an integer", ErrorCode::parse);
  return static_cast<long long>(x);
}

inline bool as_bool(const ConfigValue& v, const char* what) {
  if (v.kind != ConfigValue::Kind::boolean) config_fail(v.pos, std::string(what) + " must be true or false", ErrorCode::parse);
  return v.flag;
}

inline const std::vector<ConfigValue>& as_array(const ConfigValue& v, const char* what) {
  if (v.kind != ConfigValue::Kind::array) config_fail(v.pos, std::string(what) + " must be an array", ErrorCode::parse);
  return v.items;
}

inline std::vector<long long> as_int_list(const ConfigValue& v, const char* what) {
  std::vector<long long> out;
  for (const auto& x : as_array(v, what)) out.push_back(as_integer(x, what));
  return out;
}

inline std::vector<Complex> as_vector(const ConfigValue& v, std::size_t n, const char* what) {
  const auto& items = as_array(v, what);
  if (items.size() != n)
    config_fail(v.pos, std::string(what) + " needs " + std::to_string(n) + " entries", ErrorCode::shape_mismatch);
  std::vector<Complex> out;
  for (const auto& x : items) out.push_back(as_number(x, what));
  return out;
}

/// rows x cols nested array; rows = 0 accepts any row count.
inline std::vector<std::vector<Complex>> as_table(const ConfigValue& v, std::size_t rows, std::size_t cols,
                                                  const char* what) {
  const auto& items = as_array(v, what);
  if (items.size() != rows)
    config_fail(v.pos, std::string(what) + " needs " + std::to_string(rows) + " rows", ErrorCode::shape_mismatch);
  std::vector<std::vector<Complex>> out;
  for (const auto& row : items) out.push_back(as_vector(row, cols, what));
  return out;
}

inline Matrix to_matrix(const std::vector<std::vector<Complex>>& t) {
  const auto r = static_cast<Eigen::Index>(t.size());
  const auto c = r ? static_cast<Eigen::Index>(t[0].size()) : 0;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline Tensor3 as_tensor3(const ConfigValue& v, std::size_t n, const char* what) {
  Tensor3 t(n, n, n);
  const auto& outer = as_array(v, what);
  if (outer.size() != n)
    config_fail(v.pos, std::string(what) + " needs " + std::to_string(n) + " blocks", ErrorCode::shape_mismatch);
  for (std::size_t i = 0; i < n; ++i) {
    auto block = as_table(outer[i], n, n, what);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) t(i, j, k) = block[j][k];
  }
  return t;
}

}  // namespace detail

struct ConfigOptions {
  // Fock-space commands need a normalized commutation factor unless the
  // config opts out with fock.allow_unnormalized.
  bool fock_requested = false;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

struct SystemConfig {
  AbelianGroup group;
  Bicharacter bicharacter;
  Alphabet alphabet;
  std::optional<Matrix> pairing;
  std::size_t cutoff = 4;
  bool allow_unnormalized = false;
  int hopf_truncation = 1;
  std::optional<StructureHopf> hopf;  // explicit structure constants
  std::optional<Matrix> cqt_form;
  double tolerance = default_tolerance;
  std::uint64_t seed = 0;

  TwistSpec twist() const { return TwistSpec::make(bicharacter, alphabet, pairing); }
  FockOptions fock_options() const { return FockOptions{!allow_unnormalized}; }
};

inline SystemConfig parse_config(std::string_view text, const ConfigOptions& options = {}) {
  using detail::config_fail;
  std::vector<ConfigSection> sections = detail::ConfigLexer(text).parse();

  const std::map<std::string, std::set<std::string>> known = {
      {"group", {"free_rank", "torsion_orders"}},
      {"bicharacter", {"gen_table"}},
      {"generators", {}},
      {"pairing", {"matrix"}},
      {"fock", {"cutoff", "allow_unnormalized"}},
      {"hopf", {"truncation", "mult", "unit", "comult", "counit", "antipode", "form"}},
      {"run", {"tolerance", "seed"}},
  };
  std::map<std::string, const ConfigSection*> by_name;
  for (const auto& s : sections) {
    auto it = known.find(s.name);
    if (it == known.end()) config_fail(s.pos, "unknown section [" + s.name + "]", ErrorCode::unknown_key);
    if (s.name != "generators")
      for (const auto& e : s.entries)
        if (!it->second.count(e.key))
          config_fail(e.pos, "unknown key '" + e.key + "' in [" + s.name + "]", ErrorCode::unknown_key);
    by_name[s.name] = &s;
  }
  auto section = [&](const char* name) -> const ConfigSection& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw Error(ErrorCode::missing_section, std::string("config: missing section [") + name + "]");
    return *it->second;
  };
  auto optional_section = [&](const char* name) -> const ConfigSection* {
    auto it = by_name.find(name);
    return it == by_name.end() ? nullptr : it->second;
  };
  auto required = [&](const ConfigSection& s, const char* key) -> const ConfigEntry& {
    const ConfigEntry* e = s.find(key);
    if (!e) config_fail(s.pos, std::string("[") + s.name + "] needs '" + key + "'", ErrorCode::missing_section);
    return *e;
  };

  SystemConfig cfg;
  if (const ConfigSection* run = optional_section("run")) {
    if (const ConfigEntry* e = run->find("tolerance")) {
      cfg.tolerance = detail::as_real(e->value, "tolerance");
      if (!(cfg.tolerance > 0)) config_fail(e->value.pos, "tolerance must be positive", ErrorCode::domain);
    }
    if (const ConfigEntry* e = run->find("seed")) {
      long long s = detail::as_integer(e->value, "seed");
      if (s < 0) config_fail(e->value.pos, "seed must be non-negative", ErrorCode::domain);
      cfg.seed = static_cast<std::uint64_t>(s);
    }
  }
  if (options.tolerance) {
    if (!(*options.tolerance > 0)) throw Error(ErrorCode::domain, "tolerance must be positive");
    cfg.tolerance = *options.tolerance;
  }
  if (options.seed) cfg.seed = *options.seed;

  const ConfigSection& grp = section("group");
  const ConfigEntry& rank_entry = required(grp, "free_rank");
  long long free_rank = detail::as_integer(rank_entry.value, "free_rank");
  if (free_rank < 0) config_fail(rank_entry.value.pos, "free_rank must be non-negative", ErrorCode::domain);
  std::vector<long long> torsion;
  if (const ConfigEntry* e = grp.find("torsion_orders")) {
    torsion = detail::as_int_list(e->value, "torsion_orders");
    for (long long m : torsion)
      if (m < 2) config_fail(e->value.pos, "torsion orders must be at least 2", ErrorCode::domain);
  }
  cfg.group = AbelianGroup(static_cast<std::size_t>(free_rank), torsion);
  if (cfg.group.rank() == 0) config_fail(grp.pos, "the grading group must have positive rank", ErrorCode::domain);
  const std::size_t r = cfg.group.rank();

  const ConfigSection& bic = section("bicharacter");
  const ConfigEntry& table = required(bic, "gen_table");
  auto entries = detail::as_table(table.value, r, r, "gen_table");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (entries[i][j] == Complex(0.0))
        config_fail(table.value.items[i].items[j].pos, "bicharacter values must be nonzero", ErrorCode::zero_bicharacter);
  cfg.bicharacter = Bicharacter(cfg.group, entries, cfg.tolerance);
  if (AxiomVerdict v = validate_torsion(cfg.bicharacter); !v)
    config_fail(table.value.pos,
                "gen_table entry (" + std::to_string(v.witness->first) + "," + std::to_string(v.witness->second) +
                    ") is not a root of unity of the torsion order",
                ErrorCode::torsion);

  const ConfigSection& gens = section("generators");
  if (gens.entries.empty()) config_fail(gens.pos, "declare at least one generator", ErrorCode::missing_section);
  std::vector<Generator> declared;
  for (const auto& e : gens.entries) {
    auto coords = detail::as_int_list(e.value, "generator grade");
    if (coords.size() != r)
      config_fail(e.value.pos, "grade of '" + e.key + "' needs " + std::to_string(r) + " coordinates",
                  ErrorCode::shape_mismatch);
    declared.push_back({e.key, GroupElement(coords)});
  }
  cfg.alphabet = Alphabet(cfg.group, declared);
  const std::size_t n = declared.size();

  if (const ConfigSection* pr = optional_section("pairing"))
    if (const ConfigEntry* e = pr->find("matrix")) cfg.pairing = detail::to_matrix(detail::as_table(e->value, n, n, "pairing"));

  if (const ConfigSection* fk = optional_section("fock")) {
    if (const ConfigEntry* e = fk->find("cutoff")) {
      long long c = detail::as_integer(e->value, "cutoff");
      if (c < 1) config_fail(e->value.pos, "cutoff must be positive", ErrorCode::domain);
      cfg.cutoff = static_cast<std::size_t>(c);
    }
    if (const ConfigEntry* e = fk->find("allow_unnormalized")) cfg.allow_unnormalized = detail::as_bool(e->value, "allow_unnormalized");
  }
  if (options.fock_requested && !cfg.allow_unnormalized)
    if (AxiomVerdict v = is_normalized(cfg.bicharacter); !v)
      config_fail(table.value.pos,
                  "bicharacter is not normalized at (" + std::to_string(v.witness->first) + "," +
                      std::to_string(v.witness->second) + "); set fock.allow_unnormalized = true to proceed",
                  ErrorCode::non_normalized);

  if (const ConfigSection* hp = optional_section("hopf")) {
    if (const ConfigEntry* e = hp->find("truncation")) {
      long long t = detail::as_integer(e->value, "truncation");
      if (t < 1 || t > 16) config_fail(e->value.pos, "truncation must lie in [1, 16]", ErrorCode::domain);
      cfg.hopf_truncation = static_cast<int>(t);
    }
    if (const ConfigEntry* m = hp->find("mult")) {
      const std::size_t d = detail::as_array(m->value, "mult").size();
      if (d == 0) config_fail(m->value.pos, "mult must be non-empty", ErrorCode::shape_mismatch);
      StructureHopf h = StructureHopf::zeros(d);
      h.tolerance = cfg.tolerance;
      h.mult = detail::as_tensor3(m->value, d, "mult");
      h.comult = detail::as_tensor3(required(*hp, "comult").value, d, "comult");
      auto unit = detail::as_vector(required(*hp, "unit").value, d, "unit");
      auto counit = detail::as_vector(required(*hp, "counit").value, d, "counit");
      for (std::size_t i = 0; i < d; ++i) {
        h.unit[static_cast<Eigen::Index>(i)] = unit[i];
        h.counit[static_cast<Eigen::Index>(i)] = counit[i];
      }
      // rows of the config array are the images S(b_i)
      h.antipode = detail::to_matrix(detail::as_table(required(*hp, "antipode").value, d, d, "antipode")).transpose();
      if (const ConfigEntry* f = hp->find("form")) cfg.cqt_form = detail::to_matrix(detail::as_table(f->value, d, d, "form"));
      cfg.hopf = std::move(h);
    } else {
      for (const char* key : {"unit", "comult", "counit", "antipode", "form"})
        if (const ConfigEntry* e = hp->find(key))
          config_fail(e->pos, std::string("'") + key + "' requires explicit 'mult'", ErrorCode::missing_section);
    }
  }
  return cfg;
}

}  // namespace qstat
