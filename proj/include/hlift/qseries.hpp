#pragma once

// Truncated sparse Laurent/Puiseux series in q with cyclotomic coefficients.
// Exponents are stored as integers k meaning k/ram_index.

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hlift/cyclo.hpp"

namespace hlift {

/// A coefficient that should have been rational was not.
class NonRationalCoefficient : public std::runtime_error {
 public:
  explicit NonRationalCoefficient(const Rat& e)
      : std::runtime_error("non-rational coefficient at exponent " + to_string(e)), exponent(e) {}
  Rat exponent;
};

class QSeries {
 public:
  using Terms = std::map<long, CyclotomicNumber>;

  QSeries() : ell_(1), trunc_(0) {}
  explicit QSeries(const Rat& trunc, long ram_index = 1) : ell_(ram_index), trunc_(trunc) {
    if (ell_ < 1) throw DomainError("ram_index must be positive");
  }

  static QSeries zero(const Rat& trunc) { return QSeries(trunc); }
  static QSeries one(const Rat& trunc) { return monomial(CyclotomicNumber(1), Rat(0), trunc); }

  /// a*q^e truncated at T; the lattice is chosen from the denominator of e.
  static QSeries monomial(const CyclotomicNumber& a, const Rat& e, const Rat& trunc) {
    QSeries s(trunc, e.get_den().get_si());
    s.set(e, a);
    return s;
  }

  long ram_index() const { return ell_; }
  const Rat& trunc() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Valuation; the zero series reports its truncation.
  Rat valuation() const {
    if (terms_.empty()) return trunc_;
    return Rat(terms_.begin()->first, ell_);
  }

  CyclotomicNumber leading_coefficient() const {
    if (terms_.empty()) throw DomainError("leading coefficient of zero series");
    return terms_.begin()->second;
  }

  /// Coefficient at exponent e; throws if e is at or beyond the truncation.
  CyclotomicNumber coeff(const Rat& e) const {
    if (e >= trunc_) throw DomainError("coefficient beyond truncation at " + to_string(e));
    Rat k = e * ell_;
    if (k.get_den() != 1) return CyclotomicNumber();
    auto it = terms_.find(k.get_num().get_si());
    return it == terms_.end() ? CyclotomicNumber() : it->second;
  }
  CyclotomicNumber coeff(long e) const { return coeff(Rat(e)); }

  Rat rational_coeff(const Rat& e) const {
    auto r = coeff(e).to_rational();
    if (!r) throw NonRationalCoefficient(e);
    return *r;
  }

  /// Sets a coefficient; exponents at or beyond the truncation are ignored.
  void set(const Rat& e, const CyclotomicNumber& a) {
    if (e >= trunc_) return;
    Rat k = e * ell_;
    if (k.get_den() != 1) {
      long l2 = std::lcm(ell_, k.get_den().get_si());
      *this = with_ram_index(l2);
      k = e * ell_;
    }
    long key = k.get_num().get_si();
    if (a.is_zero())
      terms_.erase(key);
    else
      terms_[key] = a;
  }

  void add_to(const Rat& e, const CyclotomicNumber& a) { set(e, coeff_or_zero(e) + a); }

  /// The same series on a finer lattice (ell must divide L).
  QSeries with_ram_index(long L) const {
    if (L % ell_ != 0) throw DomainError("with_ram_index: not a multiple");
    if (L == ell_) return *this;
    QSeries r(trunc_, L);
    long s = L / ell_;
    for (const auto& [k, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), k * s, a);
    return r;
  }

  /// Coarsest lattice containing all exponents.
  QSeries normalized() const {
    long g = ell_;
    for (const auto& [k, a] : terms_) g = std::gcd(g, k);
    if (terms_.empty()) g = ell_;
    if (g <= 1) return *this;
    QSeries r(trunc_, ell_ / g);
    for (const auto& [k, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), k / g, a);
    return r;
  }

  QSeries truncated(const Rat& T) const {
    QSeries r(std::min(T, trunc_), ell_);
    for (const auto& [k, a] : terms_) {
      if (Rat(k, ell_) >= r.trunc_) break;
      r.terms_.emplace_hint(r.terms_.end(), k, a);
    }
    return r;
  }

  QSeries operator-() const {
    QSeries r(*this);
    for (auto& [k, a] : r.terms_) a = -a;
    return r;
  }

  friend QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g, false); }
  friend QSeries operator-(const QSeries& f, const QSeries& g) { return add(f, g, true); }

  friend QSeries operator*(const CyclotomicNumber& c, const QSeries& f) {
    QSeries r(f.trunc_, f.ell_);
    if (c.is_zero()) return r;
    for (const auto& [k, a] : f.terms_) r.terms_.emplace_hint(r.terms_.end(), k, c * a);
    return r;
  }

  friend QSeries operator*(const QSeries& f, const QSeries& g) {
    long L = std::lcm(f.ell_, g.ell_);
    Rat T = std::min(f.trunc_ + g.valuation(), g.trunc_ + f.valuation());
    QSeries r(T, L);
    if (f.is_zero() || g.is_zero()) return r;
    QSeries a = f.with_ram_index(L), b = g.with_ram_index(L);
    Rat TL = T * L;
    // exponents k with k < T*L
    Int kmax_i;
    mpz_cdiv_q(kmax_i.get_mpz_t(), TL.get_num_mpz_t(), TL.get_den_mpz_t());
    long kmax = kmax_i.get_si();  // exclusive
    std::map<long, CyclotomicNumber> acc;
    for (const auto& [i, x] : a.terms_) {
      for (const auto& [j, y] : b.terms_) {
        if (i + j >= kmax) break;
        auto it = acc.find(i + j);
        if (it == acc.end())
          acc.emplace(i + j, x * y);
        else
          it->second += x * y;
      }
    }
    for (auto& [k, v] : acc)
      if (!v.is_zero()) r.terms_.emplace_hint(r.terms_.end(), k, std::move(v));
    return r;
  }

  QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
  QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
  QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

  /// Inverse of a series with known nonzero leading coefficient.
  QSeries invert() const {
    if (terms_.empty()) throw DomainError("invert: zero series");
    long v = terms_.begin()->first;
    CyclotomicNumber a0inv = terms_.begin()->second.inv();
    Rat T = trunc_ - 2 * valuation();
    QSeries r(T, ell_);
    Rat TL = (trunc_ - valuation()) * ell_;  // relative length
    Int n_i;
    mpz_cdiv_q(n_i.get_mpz_t(), TL.get_num_mpz_t(), TL.get_den_mpz_t());
    long n = n_i.get_si();
    std::vector<CyclotomicNumber> h(n), g(n);
    for (const auto& [k, a] : terms_)
      if (k - v < n) h[k - v] = a;
    for (long k = 0; k < n; ++k) {
      CyclotomicNumber s = k == 0 ? CyclotomicNumber(1) : CyclotomicNumber();
      for (long i = 1; i <= k; ++i)
        if (!h[i].is_zero() && !g[k - i].is_zero()) s -= h[i] * g[k - i];
      g[k] = s * a0inv;
      if (!g[k].is_zero()) r.set(Rat(k - v, ell_), g[k]);
    }
    return r;
  }

  /// Integer power; negative exponents go through invert.
  QSeries pow(long n) const {
    if (n < 0) return invert().pow(-n);
    if (n == 0) return one(trunc_ - valuation());
    QSeries result, base = *this;
    bool first = true;
    while (n > 0) {
      if (n & 1) {
        result = first ? base : result * base;
        first = false;
      }
      n >>= 1;
      if (n) base = base * base;
    }
    return result;
  }

  /// q d/dq
  QSeries theta() const {
    QSeries r(trunc_, ell_);
    for (const auto& [k, a] : terms_) {
      if (k == 0) continue;
      r.terms_.emplace_hint(r.terms_.end(), k, CyclotomicNumber(Rat(k, ell_)) * a);
    }
    return r;
  }

  /// q -> q^c
  QSeries substitute_up(long c) const {
    if (c < 1) throw DomainError("substitute_up: c must be positive");
    QSeries r(trunc_ * c, ell_);
    for (const auto& [k, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), k * c, a);
    return r;
  }

  /// f((tau + j)/p): a q^e -> a e^{2 pi i j e/p} q^{e/p}.
  QSeries slash_shift(long p, long j) const {
    if (p < 1) throw DomainError("slash_shift: p must be positive");
    long L = ell_ * p;
    QSeries r(trunc_ / p, L);
    for (const auto& [k, a] : terms_) {
      CyclotomicNumber z = root_of_unity(L, mod(j * k, L));
      r.terms_.emplace_hint(r.terms_.end(), k, z * a);
    }
    return r;
  }

  /// Same series with rational coefficients; throws on the first exponent
  /// whose coefficient is irrational.
  QSeries rationalize() const {
    QSeries r(trunc_, ell_);
    for (const auto& [k, a] : terms_) {
      auto q = a.to_rational();
      if (!q) throw NonRationalCoefficient(Rat(k, ell_));
      r.terms_.emplace_hint(r.terms_.end(), k, CyclotomicNumber(*q));
    }
    return r;
  }

  /// Maps every coefficient through fn.
  QSeries map_coefficients(const std::function<CyclotomicNumber(const CyclotomicNumber&)>& fn) const {
    QSeries r(trunc_, ell_);
    for (const auto& [k, a] : terms_) {
      CyclotomicNumber b = fn(a);
      if (!b.is_zero()) r.terms_.emplace_hint(r.terms_.end(), k, std::move(b));
    }
    return r;
  }

  bool integral_exponents() const {
    for (const auto& [k, a] : terms_)
      if (k % ell_ != 0) return false;
    return true;
  }

  /// First exponent below the common truncation where f and g differ.
  friend std::optional<Rat> first_mismatch(const QSeries& f, const QSeries& g) {
    Rat T = std::min(f.trunc_, g.trunc_);
    QSeries d = (f - g).truncated(T);
    if (d.is_zero()) return std::nullopt;
    return d.valuation();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["ram_index"] = ell_;
    j["trunc"] = to_string(trunc_);
    auto arr = nlohmann::json::array();
    for (const auto& [k, a] : terms_) {
      nlohmann::json t;
      Rat e(k, ell_);
      e.canonicalize();
      t["exp"] = to_string(e);
      nlohmann::json c;
      c["order"] = a.order();
      auto coords = nlohmann::json::array();
      for (const Rat& x : a.coords()) coords.push_back(to_string(x));
      c["coords"] = coords;
      t["coeff"] = c;
      arr.push_back(t);
    }
    j["terms"] = arr;
    return j;
  }

  static QSeries from_json(const nlohmann::json& j) {
    long ell = j.at("ram_index").get<long>();
    QSeries r(parse_rat(j.at("trunc").get<std::string>()), ell);
    for (const auto& t : j.at("terms")) {
      Rat e = parse_rat(t.at("exp").get<std::string>());
      const auto& c = t.at("coeff");
      long m = c.at("order").get<long>();
      std::vector<Rat> coords;
      for (const auto& x : c.at("coords")) coords.push_back(parse_rat(x.get<std::string>()));
      Int l = 1;
      for (const Rat& x : coords) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
      std::vector<Int> num;
      for (const Rat& x : coords) num.push_back(x.get_num() * (l / x.get_den()));
      r.set(e, CyclotomicNumber(m, num, l));
    }
    return r;
  }

  /// Human-readable form such as "q^-1 + 744 + 196884 q + O(q^2)".
  std::string to_text(bool show_order = false) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, a] : terms_) {
      Rat e(k, ell_);
      e.canonicalize();
      std::string c = a.str();
      bool neg = a.order() == 1 && c[0] == '-';
      if (neg) c = c.substr(1);
      if (a.order() != 1) c = "(" + c + ")";
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      std::string ex = to_string(e);
      if (e == 0) {
        os << c;
        continue;
      }
      if (c != "1") os << c << " ";
      os << (e == 1 ? std::string("q") : "q^" + ex);
    }
    if (first) os << "0";
    if (show_order) os << " + O(q^" << to_string(trunc_) << ")";
    return os.str();
  }

 private:
  CyclotomicNumber coeff_or_zero(const Rat& e) const {
    Rat k = e * ell_;
    if (k.get_den() != 1) return CyclotomicNumber();
    auto it = terms_.find(k.get_num().get_si());
    return it == terms_.end() ? CyclotomicNumber() : it->second;
  }

  static QSeries add(const QSeries& f, const QSeries& g, bool neg) {
    long L = std::lcm(f.ell_, g.ell_);
    Rat T = std::min(f.trunc_, g.trunc_);
    QSeries a = f.with_ram_index(L), b = g.with_ram_index(L);
    QSeries r(T, L);
    for (const auto& [k, x] : a.terms_)
      if (Rat(k, L) < T) r.terms_.emplace_hint(r.terms_.end(), k, x);
    for (const auto& [k, y] : b.terms_) {
      if (Rat(k, L) >= T) break;
      auto it = r.terms_.find(k);
      if (it == r.terms_.end()) {
        r.terms_.emplace(k, neg ? -y : y);
      } else {
        it->second = neg ? it->second - y : it->second + y;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }

  long ell_;
  Rat trunc_;
  Terms terms_;
};

}  // namespace hlift
