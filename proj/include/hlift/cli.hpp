#pragma once

// Command-line front end. run() is the whole program; tools/hlift.cpp only forwards argv.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "hlift/acceptance.hpp"

namespace hlift::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json, text, csv };

struct Globals {
  long order = 32;
  long prec = 256;
  Format format = Format::json;
  std::string config;
  bool timing = false;
};

namespace detail {

inline long to_long(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad integer in " + what + ": '" + s + "'");
  }
  if (used != s.size()) throw UsageError("bad integer in " + what + ": '" + s + "'");
  return v;
}

inline std::vector<long> split_longs(const std::string& s, char sep, const std::string& what) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(to_long(tok, what));
  return out;
}

inline const Genus1Level& level(long N, const Globals& g) {
  if (N != 11 && N != 17 && N != 19) throw UsageError("level must be 11, 17 or 19");
  return acceptance::level(N, g.config.empty() ? default_config_path() : g.config);
}

/// Splits "name:args" into its parts; args may be empty.
inline std::pair<std::string, std::string> split_object(const std::string& desc) {
  auto c = desc.find(':');
  if (c == std::string::npos) return {desc, ""};
  return {desc.substr(0, c), desc.substr(c + 1)};
}

/// "N,m" for the level bases
inline std::pair<long, long> level_and_index(const std::string& args, const std::string& what) {
  auto v = split_longs(args, ',', what);
  if (v.size() != 2) throw UsageError(what + " expects <N>,<m>");
  return {v[0], v[1]};
}

inline EtaQuotient parse_eta(const std::string& args) {
  // 1^24 or 1^2,11^2
  EtaQuotient e;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto c = tok.find('^');
    if (c == std::string::npos) throw UsageError("eta factor must be <delta>^<exponent>: '" + tok + "'");
    long d = to_long(tok.substr(0, c), "eta"), r = to_long(tok.substr(c + 1), "eta");
    if (d < 1) throw UsageError("eta factor delta must be positive");
    e.factors.emplace_back(d, r);
  }
  if (e.factors.empty()) throw UsageError("eta needs at least one factor");
  return e;
}

}  // namespace detail

/// The series named by desc, known below q^T.
inline QSeries make_object(const std::string& desc, long T, const Globals& g) {
  auto [name, args] = detail::split_object(desc);
  auto no_args = [&, &name = name, &args = args] {
    if (!args.empty()) throw UsageError(name + " takes no argument");
  };
  if (T < 1) throw UsageError("--order must be positive");
  if (name == "j") return no_args(), j_series(T);
  if (name == "delta") return no_args(), delta_series(T);
  if (name == "E2" || name == "E4" || name == "E6") return no_args(), eisenstein(name[1] - '0', T);
  if (name == "theta") return no_args(), theta_kohnen(T);
  if (name == "Jn") {
    long n = detail::to_long(args, "Jn");
    if (n < 0) throw UsageError("Jn needs n >= 0");
    return faber_J(n, T);
  }
  if (name == "eta") return eta_quotient_series(detail::parse_eta(args), Rat(T));
  if (name == "fd") {
    long d = detail::to_long(args, "fd");
    if (!admissible_index(d)) throw UsageError("fd needs d >= 0 with d = 0 or 3 mod 4");
    return plus_space_basis(std::max(d, 4L), T)->series(d).to_qseries();
  }
  if (name == "g0") return detail::level(detail::to_long(args, "g0"), g).eisenstein_g0(T);
  if (name == "gm1") return detail::level(detail::to_long(args, "gm1"), g).cusp_form(T).to_qseries();
  if (name == "haupt") return detail::level(detail::to_long(args, "haupt"), g).hauptmodul(T).to_qseries();
  if (name == "fplus" || name == "fminus" || name == "fsharp") {
    auto [N, m] = detail::level_and_index(args, name);
    const auto& L = detail::level(N, g);
    if (m < 0) throw UsageError(name + " needs m >= 0");
    if (name == "fplus") return L.plus_basis(m, T);
    if (m < 2) throw UsageError(name + " needs m >= 2");
    return name == "fminus" ? L.minus_basis(m, T) : L.sharp_basis(m, T);
  }
  throw UsageError("unknown object '" + desc + "'");
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void print_series(std::ostream& out, const QSeries& f, const std::string& what, Format fmt) {
  switch (fmt) {
    case Format::json: {
      nlohmann::ordered_json j;
      j["object"] = what;
      j["series"] = f.to_json();
      out << j.dump() << "\n";
      break;
    }
    case Format::text:
      out << f.to_text() << "\n";
      break;
    case Format::csv: {
      out << "exponent,coefficient\n";
      nlohmann::json j = f.to_json();
      for (const auto& t : j["terms"]) {
        Rat e = parse_rat(t["exp"].get<std::string>());
        out << t["exp"].get<std::string>() << "," << csv_field(f.coeff(e).str()) << "\n";
      }
      break;
    }
  }
}

inline void print_report(std::ostream& out, const VerificationReport& r, const Globals& g) {
  if (g.format == Format::json) {
    out << r.to_json(g.timing).dump() << "\n";
    return;
  }
  if (g.format == Format::csv) {
    out << r.check << "," << (r.pass ? "PASS" : "FAIL");
    for (const auto& [k, v] : r.params) out << "," << k << "=" << v;
    out << "," << csv_field(r.first_mismatch.value_or("")) << "\n";
    return;
  }
  out << (r.pass ? "PASS " : "FAIL ") << r.check;
  for (const auto& [k, v] : r.params) out << " " << k << "=" << v;
  if (r.first_mismatch) out << " first_mismatch=" << *r.first_mismatch;
  if (!r.detail.empty()) out << " (" << r.detail << ")";
  if (g.timing) out << " [" << r.runtime_ms << " ms]";
  out << "\n";
}

inline void print_criterion(std::ostream& out, const CriterionResult& r, const Globals& g) {
  if (g.format == Format::json) {
    auto j = r.to_json();
    if (g.timing) j["runtime_ms"] = r.ms;
    out << j.dump() << "\n";
    return;
  }
  if (g.format == Format::csv) {
    out << r.id << "," << (r.pass ? "PASS" : "FAIL") << "," << csv_field(r.name) << "," << csv_field(r.detail) << "\n";
    return;
  }
  out << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail;
  if (g.timing) out << " [" << r.ms << " ms]";
  out << "\n";
}


/// Product data of f_d at Delta, exponents known below nmax; Delta = 1, d = 0 means 12 theta.
inline BorcherdsProductData product_data(long delta, std::optional<long> r, long d, long nmax) {
  if (delta < 1 || !is_fundamental(delta)) throw UsageError("--delta must be 1 or a positive fundamental discriminant");
  if (!admissible_index(d)) throw UsageError("--d must be >= 0 with d = 0 or 3 mod 4");
  if (nmax < 1) throw UsageError("order too small");
  long rr = r.value_or(mod(delta, 2));
  if (mod(rr * rr - delta, 4) != 0) throw UsageError("--r must satisfy r^2 = Delta mod 4");
  if (delta == 1 && d == 0) return acceptance::twelve_theta((nmax + 1) * (nmax + 1));
  long need = delta * (nmax + 1) * (nmax + 1);
  auto B = plus_space_basis(std::max(d, 4L), need);
  Rat weyl = 0;
  if (delta == 1) weyl = -class_number(1, d, 1);
  return product_data_from_family(family_from_basis(*B, d, need), delta, rr, weyl);
}

inline int output_trace(std::ostream& out, const Globals& g, const nlohmann::ordered_json& head, const TraceResult& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", t.residual);
  nlohmann::ordered_json j = head;
  j["value_over_sqrt_delta"] = to_string(t.value_over_sqrt_delta);
  j["residual"] = buf;
  j["classes"] = t.classes;
  if (g.format == Format::json) {
    out << j.dump() << "\n";
  } else if (g.format == Format::text) {
    out << "Tr/sqrt(Delta) = " << to_string(t.value_over_sqrt_delta) << "  (" << t.classes << " classes, residual " << buf
        << ")\n";
  } else {
    bool first = true;
    for (const auto& [k, v] : j.items()) out << (first ? "" : ",") << k, first = false;
    out << "\n";
    first = true;
    for (const auto& [k, v] : j.items()) {
      out << (first ? "" : ",") << detail::csv_field(v.is_string() ? v.get<std::string>() : v.dump());
      first = false;
    }
    out << "\n";
  }
  return t.residual < 1e-10 ? 0 : 1;
}

struct VerbArgs {
  std::string object, f, check, kind = "cor45", primes = "2,3";
  long k = 0, p = 0, m = 1, N = 1, delta = 0, d = -1, nmax = 6, pairs = 3;
  std::optional<long> r;
  bool plus = false, quick = false;
};

inline long need(long v, const char* flag) {
  if (v <= 0) throw UsageError(std::string(flag) + " is required");
  return v;
}

inline int do_trace(std::ostream& out, const Globals& g, const VerbArgs& a) {
  long delta = need(a.delta, "--delta"), d = need(a.d, "--d");
  if (a.f.empty()) throw UsageError("--f is required");
  nlohmann::ordered_json head;
  head["delta"] = delta;
  head["d"] = d;
  head["N"] = a.N;
  head["f"] = a.f;
  head["variant"] = a.plus ? "plus" : "full";
  auto [name, args] = detail::split_object(a.f);
  if (a.N == 1) {
    if (a.plus) throw UsageError("--plus needs a level N > 1");
    if (name != "Jn") throw UsageError("level one traces take --f Jn:<n>");
    long n = detail::to_long(args, "Jn");
    if (n < 1) throw UsageError("Jn needs n >= 1");
    return output_trace(out, g, head, trace_J(n, delta, d, g.prec));
  }
  LevelFunction kind;
  if (name == "fplus") kind = LevelFunction::plus;
  else if (name == "fminus") kind = LevelFunction::minus;
  else if (name == "fsharp") kind = LevelFunction::sharp;
  else throw UsageError("level traces take --f fplus|fminus|fsharp:<N>,<m>");
  auto [N, m] = detail::level_and_index(args, name);
  if (N != a.N) throw UsageError("--N does not match the level of --f");
  const auto& L = detail::level(N, g);
  if (!admissible_pair(N, delta, d)) throw UsageError("(Delta, d) not admissible at this level");
  if (m < 0 || (kind != LevelFunction::plus && m < 2 && !(kind == LevelFunction::sharp && m == 0)))
    throw UsageError("index out of range for " + name);
  if (kind == LevelFunction::plus && m == 0) kind = LevelFunction::sharp;
  return output_trace(out, g, head, level_trace(L, kind, m, delta, d, a.plus ? TraceVariant::plus : TraceVariant::full, g.prec));
}

inline int do_class_number(std::ostream& out, const Globals& g, const VerbArgs& a) {
  long delta = need(a.delta, "--delta"), d = need(a.d, "--d");
  if (!is_fundamental(delta)) throw UsageError("--delta must be a fundamental discriminant");
  if (a.plus && a.N == 1) throw UsageError("--plus needs a level N > 1");
  Rat h = class_number(delta, d, a.N, a.plus ? TraceVariant::plus : TraceVariant::full);
  if (g.format == Format::json) {
    nlohmann::ordered_json j;
    j["delta"] = delta;
    j["d"] = d;
    j["N"] = a.N;
    j["variant"] = a.plus ? "plus" : "full";
    j["class_number"] = to_string(h);
    out << j.dump() << "\n";
  } else if (g.format == Format::csv) {
    out << "delta,d,N,variant,class_number\n" << delta << "," << d << "," << a.N << "," << (a.plus ? "plus" : "full") << ","
        << to_string(h) << "\n";
  } else {
    out << to_string(h) << "\n";
  }
  return 0;
}

inline int do_verify(std::ostream& out, const Globals& g, const VerbArgs& a) {
  const std::string& c = a.check;
  VerificationReport rep;
  if (c == "all") {
    AcceptanceOptions o;
    if (!g.config.empty()) o.config_path = g.config;
    if (!a.quick) o.on_report = [&](const VerificationReport& r) { print_report(out, r, g); };
    o.on_criterion = [&](const CriterionResult& r) { print_criterion(out, r, g); };
    auto res = run_acceptance(o);
    return std::all_of(res.begin(), res.end(), [](const CriterionResult& r) { return r.pass; }) ? 0 : 1;
  }
  if (c == "df") {
    rep = faber_duality(g.order);
  } else if (c == "thm31" || c == "thm32") {
    long p = need(a.p, "--p");
    if (!is_prime(p)) throw UsageError("--p must be prime");
    if (a.delta < 1) throw UsageError("--delta is required");
    if (a.d < 0) throw UsageError("--d is required");
    auto data = product_data(a.delta, a.r, a.d, p * (g.order + 1) + 1);
    rep = c == "thm31" ? verify_thm31(data, p, g.order) : verify_thm32(data, p, g.order);
    rep.param("d", a.d);
  } else if (c == "thm41" || c == "cor42") {
    long delta = need(a.delta, "--delta"), d = need(a.d, "--d"), p = need(a.p, "--p");
    rep = c == "thm41" ? verify_thm41(delta, d, p, a.m, a.nmax) : verify_cor42(delta, d, p, a.m, a.nmax);
  } else if (c == "thm44" || c == "cor45" || c == "cor46" || c == "hep" || c == "div3") {
    long delta = need(a.delta, "--delta"), d = need(a.d, "--d");
    const auto& L = detail::level(a.N, g);
    if (c == "div3") {
      rep = verify_div3(L, delta, d, a.nmax + 1, g.prec);
    } else {
      long p = need(a.p, "--p");
      if (c == "thm44") rep = verify_thm44(L, delta, d, p, a.nmax, g.prec);
      if (c == "cor45") rep = verify_cor45(L, delta, d, p, a.nmax, g.prec);
      if (c == "cor46") rep = verify_cor46(L, delta, d, p);
      if (c == "hep") rep = verify_hep(L, delta, d, p, a.nmax, g.prec);
    }
  } else {
    throw UsageError("unknown check '" + c + "'");
  }
  print_report(out, rep, g);
  return rep.pass ? 0 : 1;
}

inline std::string mod_str(const Rat& x, long p) {
  if (x.get_den() != 1) return "non-integral";
  Int r = x.get_num() % p;
  if (r < 0) r += p;
  return r.get_str();
}

/// CSV congruence scans over the smallest admissible pairs.
inline int do_table(std::ostream& out, const Globals& g, const VerbArgs& a) {
  if (a.kind != "cor45" && a.kind != "cor46") throw UsageError("--kind must be cor45 or cor46");
  std::vector<long> levels = a.N == 1 ? std::vector<long>{11, 17, 19} : std::vector<long>{a.N};
  auto primes = detail::split_longs(a.primes, ',', "--p");
  for (long p : primes)
    if (!is_prime(p)) throw UsageError("--p must list primes");
  if (a.pairs < 1) throw UsageError("--pairs must be positive");
  bool all = true;
  if (a.kind == "cor45")
    out << "N,delta,d,p,n,kronecker,lhs,rhs,diff_mod_p,pass\n";
  else
    out << "N,delta,d,p,kronecker,H,H_dp2,expected,diff_mod_p,pass\n";
  for (long N : levels) {
    const auto& L = detail::level(N, g);
    for (auto [delta, d] : smallest_admissible_pairs(N, static_cast<std::size_t>(a.pairs))) {
      LevelTraces tr(L, delta, g.prec);
      for (long p : primes) {
        if ((N * delta) % p == 0) continue;
        int kr = kronecker(-d, p);
        std::string row = std::to_string(N) + "," + std::to_string(delta) + "," + std::to_string(d) + "," + std::to_string(p) + ",";
        if (a.kind == "cor46") {
          Rat h = class_number(delta, d, N), hp = class_number(delta, d * p * p, N);
          Rat expect = kr == 1 ? Rat(0) : kr == 0 ? h : Rat(2) * h;
          Rat diff = hp - expect;
          diff.canonicalize();
          bool ok = diff.get_den() % p != 0 && diff.get_num() % p == 0;
          all = all && ok;
          out << row << kr << "," << to_string(h) << "," << to_string(hp) << "," << to_string(expect) << ","
              << (diff.get_den() == 1 ? mod_str(diff, p) : to_string(diff)) << "," << (ok ? "PASS" : "FAIL") << "\n";
          continue;
        }
        for (long n = 0; n <= a.nmax; ++n) {
          if (n == 1) continue;
          Rat lhs = tr.sharp(p * n, d).value_over_sqrt_delta;
          Rat rhs = Rat(kr) * tr.sharp(n, d).value_over_sqrt_delta + tr.sharp(n, d * p * p).value_over_sqrt_delta +
                    Rat(L.alpha(n)) * tr.sharp(p, d).value_over_sqrt_delta;
          Rat diff = lhs - rhs;
          diff.canonicalize();
          std::string m = mod_str(diff, p);
          bool ok = m == "0" && tr.max_residual() < 1e-10;
          all = all && ok;
          out << row << n << "," << kr << "," << to_string(lhs) << "," << to_string(rhs) << "," << m << "," << (ok ? "PASS" : "FAIL")
              << "\n";
        }
      }
    }
  }
  return all ? 0 : 1;
}

}  // namespace detail

/// Runs one command line (without the program name); returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  detail::VerbArgs a;
  std::string format = "json";
  CLI::App app{"Borcherds products, Hecke operators and traces of singular moduli", "hlift"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--order", g.order, "truncation: series are known below q^order")->check(CLI::PositiveNumber);
  app.add_option("--prec", g.prec, "working precision in bits")->check(CLI::Range(64L, 1L << 20));
  app.add_option("--format", format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--config", g.config, "curve configuration file");
  app.add_flag("--timing", g.timing, "include run times (output is then not reproducible)");

  const std::string objects = "j|delta|E2|E4|E6|theta|Jn:<n>|eta:<d>^<r>,...|fd:<d>|g0:<N>|gm1:<N>|haupt:<N>|fplus:<N>,<m>|fminus:<N>,<m>|fsharp:<N>,<m>";
  auto* expand = app.add_subcommand("expand", "print a q-expansion");
  expand->add_option("--object", a.object, objects)->required();
  auto* hecke = app.add_subcommand("hecke", "apply T_k(p^m) to an integral weight object");
  hecke->add_option("--object", a.object, objects)->required();
  hecke->add_option("--k", a.k, "weight");
  hecke->add_option("--p", a.p, "prime")->required();
  hecke->add_option("--m", a.m, "power of p")->check(CLI::PositiveNumber);
  auto* mult = app.add_subcommand("mult-hecke", "apply the multiplicative Hecke operator");
  mult->add_option("--object", a.object, objects)->required();
  mult->add_option("--k", a.k, "weight");
  mult->add_option("--N", a.N, "level")->check(CLI::PositiveNumber);
  mult->add_option("--p", a.p, "prime")->required();
  auto* borch = app.add_subcommand("borcherds", "expand the product attached to f_d");
  borch->add_option("--delta", a.delta, "fundamental discriminant, 1 allowed")->required();
  borch->add_option("--r", a.r, "r with r^2 = Delta mod 4");
  borch->add_option("--d", a.d, "index of f_d; with Delta = 1, d = 0 gives 12 theta")->required();
  auto* trace = app.add_subcommand("trace", "twisted trace Tr/sqrt(Delta) by CM evaluation");
  trace->add_option("--delta", a.delta)->required();
  trace->add_option("--d", a.d)->required();
  trace->add_option("--N", a.N, "level")->check(CLI::PositiveNumber);
  trace->add_flag("--plus", a.plus, "trace over Fricke orbits");
  trace->add_option("--f", a.f, "Jn:<n> at level one, fplus|fminus|fsharp:<N>,<m> otherwise")->required();
  auto* cn = app.add_subcommand("class-number", "exact twisted class number H_N(Delta, d)");
  cn->add_option("--delta", a.delta)->required();
  cn->add_option("--d", a.d)->required();
  cn->add_option("--N", a.N, "level")->check(CLI::PositiveNumber);
  cn->add_flag("--plus", a.plus, "count Fricke orbits");
  auto* verify = app.add_subcommand("verify", "check an identity and print a verdict");
  verify->add_option("check", a.check, "thm31|thm32|df|thm41|cor42|thm44|cor45|cor46|hep|div3|all")->required();
  verify->add_option("--delta", a.delta);
  verify->add_option("--r", a.r);
  verify->add_option("--d", a.d);
  verify->add_option("--p", a.p);
  verify->add_option("--m", a.m)->check(CLI::PositiveNumber);
  verify->add_option("--N", a.N)->check(CLI::PositiveNumber);
  verify->add_option("--nmax", a.nmax)->check(CLI::NonNegativeNumber);
  verify->add_flag("--quick", a.quick, "with all: one line per criterion only");
  auto* table = app.add_subcommand("table", "CSV congruence scan over the smallest admissible pairs");
  table->add_option("--kind", a.kind, "cor45 or cor46");
  table->add_option("--N", a.N, "level (default: 11, 17 and 19)")->check(CLI::PositiveNumber);
  table->add_option("--p", a.primes, "comma separated primes");
  table->add_option("--pairs", a.pairs, "pairs per level");
  table->add_option("--nmax", a.nmax)->check(CLI::NonNegativeNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }
  g.format = format == "text" ? Format::text : format == "csv" ? Format::csv : Format::json;

  try {
    if (expand->parsed()) {
      detail::print_series(out, make_object(a.object, g.order, g), a.object, g.format);
      return 0;
    }
    if (hecke->parsed()) {
      if (!is_prime(a.p)) throw UsageError("--p must be prime");
      long in = ipow(a.p, a.m) * (g.order + 1);
      QSeries f = make_object(a.object, in, g);
      QSeries h = hecke_integral_power(f, a.k, a.p, a.m);
      detail::print_series(out, h.truncated(std::min(h.trunc(), Rat(g.order))), a.object, g.format);
      return 0;
    }
    if (mult->parsed()) {
      if (!is_prime(a.p)) throw UsageError("--p must be prime");
      QSeries f = make_object(a.object, a.p * (g.order + 1) + 1, g);
      QSeries h = mult_hecke(f, a.k, a.N, a.p);
      detail::print_series(out, h.truncated(std::min(h.trunc(), Rat(g.order))), a.object, g.format);
      return 0;
    }
    if (borch->parsed()) {
      auto data = detail::product_data(a.delta, a.r, a.d, g.order);
      std::string what = "psi:" + std::to_string(a.delta) + "," + std::to_string(a.d);
      detail::print_series(out, expand_psi(data, g.order), what, g.format);
      return 0;
    }
    if (trace->parsed()) return detail::do_trace(out, g, a);
    if (cn->parsed()) return detail::do_class_number(out, g, a);
    if (verify->parsed()) return detail::do_verify(out, g, a);
    if (table->parsed()) return detail::do_table(out, g, a);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hlift::cli
