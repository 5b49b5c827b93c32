#pragma once

// Exact arithmetic in the Q-vector space spanned by declared real symbols.
//
// A Scalar is a finite rational combination of basis symbols (the rational
// unit, PI, and user-declared reals).  An Area is a rational combination of
// degree-two monomials in the same symbols.  Equality is decided on the
// coefficients; strict order is decided by rational interval enclosures that
// are refined until the sign is certified or the precision budget runs out.
//
// The declared user symbols are assumed to be linearly independent over Q
// together with 1 and PI.  This is an input contract and is not checked.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace commensura {

using Rational = mpq_class;
using SymbolId = std::uint32_t;

inline constexpr SymbolId kUnitSymbol = 0;
inline constexpr SymbolId kPiSymbol = 1;
inline constexpr unsigned kDefaultPrecisionBits = 256;

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  Rational width() const { return hi - lo; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Rational& c, const Interval& a);

/// Nested rational enclosure of pi with width at most 2^-bits.
Interval pi_enclosure(unsigned bits);

class SymbolTable {
 public:
  enum class Source { Exact, Pi, Decimal };

  /// Produces a nested enclosure for a requested bit precision.  Used for
  /// user symbols whose value can be refined beyond a fixed decimal.
  using Refiner = std::function<Interval(unsigned bits)>;

  struct Symbol {
    std::string name;
    Source source = Source::Exact;
    Rational value;   // exact value, or decimal centre
    Rational radius;  // decimal error radius
    Refiner refine;   // optional
  };

  SymbolTable();

  SymbolId declare_decimal(std::string name, Rational value, Rational radius,
                           Refiner refine = {});
  /// Makes `name` another spelling of the built-in PI.
  void declare_pi_alias(std::string name);

  std::optional<SymbolId> find(std::string_view name) const;
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& pi_aliases() const { return pi_aliases_; }

  Interval enclosure(SymbolId id, unsigned bits) const;

 private:
  void check_fresh(const std::string& name) const;

  std::vector<Symbol> symbols_;
  std::vector<std::string> pi_aliases_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

/// Sparse rational combination over an ordered key set.  Coefficients are
/// canonical and nonzero, so structural equality is value equality.
template <typename Key>
class LinearForm {
 public:
  using Term = std::pair<Key, Rational>;

  LinearForm() = default;

  static LinearForm single(Key key, Rational coeff) {
    LinearForm f;
    coeff.canonicalize();
    if (coeff != 0) f.terms_.emplace_back(key, std::move(coeff));
    return f;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(Key key) const {
    for (const auto& [k, c] : terms_)
      if (k == key) return c;
    return 0;
  }

  /// this += factor * other
  void add_scaled(const LinearForm& other, Rational factor) {
    factor.canonicalize();
    if (factor == 0 || other.terms_.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->first < a->first) {
        out.emplace_back(b->first, b->second * factor);
        ++b;
      } else {
        Rational c = a->second + b->second * factor;
        if (c != 0) out.emplace_back(a->first, std::move(c));
        ++a;
        ++b;
      }
    }
    terms_ = std::move(out);
  }

  void scale(Rational factor) {
    factor.canonicalize();
    if (factor == 0) {
      terms_.clear();
      return;
    }
    for (auto& t : terms_) t.second *= factor;
  }

  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second)
        return false;
    return true;
  }

 private:
  std::vector<Term> terms_;
};

class Area;

class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& q);  // NOLINT: rationals embed implicitly
  Scalar(long n) : Scalar(Rational(n)) {}  // NOLINT
  Scalar(int n) : Scalar(Rational(n)) {}  // NOLINT

  static Scalar pi();
  static Scalar symbol(SymbolTablePtr table, SymbolId id);

  const LinearForm<SymbolId>& form() const { return form_; }
  const SymbolTablePtr& table() const { return table_; }
  Rational coefficient(SymbolId id) const { return form_.coefficient(id); }
  bool is_zero() const { return form_.is_zero(); }
  bool is_rational() const;
  bool uses_user_symbols() const;

  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Rational& factor);
  Scalar& operator/=(const Rational& divisor);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(Scalar a) { return a *= Rational(-1); }
  friend Scalar operator*(Scalar a, const Rational& f) { return a *= f; }
  friend Scalar operator*(const Rational& f, Scalar a) { return a *= f; }
  friend Scalar operator/(Scalar a, const Rational& d) { return a /= d; }
  friend Scalar operator*(Scalar a, int f) { return a *= Rational(f); }
  friend Scalar operator*(int f, Scalar a) { return a *= Rational(f); }
  friend Scalar operator/(Scalar a, int d) { return a /= Rational(d); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.form_ == b.form_; }

 private:
  friend class Area;
  LinearForm<SymbolId> form_;
  SymbolTablePtr table_;
};

/// Key of a degree-two monomial: the unordered pair {i, j} with i <= j.
using MonomialKey = std::uint64_t;

inline MonomialKey monomial(SymbolId i, SymbolId j) {
  if (j < i) std::swap(i, j);
  return (static_cast<MonomialKey>(i) << 32) | j;
}
inline std::pair<SymbolId, SymbolId> monomial_factors(MonomialKey k) {
  return {static_cast<SymbolId>(k >> 32), static_cast<SymbolId>(k & 0xffffffffu)};
}

class Area {
 public:
  Area() = default;
  Area(const Rational& q);  // NOLINT

  const LinearForm<MonomialKey>& form() const { return form_; }
  const SymbolTablePtr& table() const { return table_; }
  Rational coefficient(SymbolId i, SymbolId j) const { return form_.coefficient(monomial(i, j)); }
  bool is_zero() const { return form_.is_zero(); }
  bool uses_user_symbols() const;

  Area& operator+=(const Area& other);
  Area& operator-=(const Area& other);
  Area& operator*=(const Rational& factor);

  friend Area operator+(Area a, const Area& b) { return a += b; }
  friend Area operator-(Area a, const Area& b) { return a -= b; }
  friend Area operator-(Area a) { return a *= Rational(-1); }
  friend Area operator*(Area a, const Rational& f) { return a *= f; }
  friend Area operator*(const Rational& f, Area a) { return a *= f; }

  friend Area operator*(const Scalar& a, const Scalar& b);

  friend bool operator==(const Area& a, const Area& b) { return a.form_ == b.form_; }

 private:
  LinearForm<MonomialKey> form_;
  SymbolTablePtr table_;
};

Area operator*(const Scalar& a, const Scalar& b);

enum class Ordering { Less, Equal, Greater, Indeterminate };

std::string_view to_string(Ordering o);

/// Certified enclosure of the value at the given precision.
Interval enclosure(const Scalar& s, unsigned bits);
Interval enclosure(const Area& a, unsigned bits);

Ordering compare(const Scalar& a, const Scalar& b, unsigned bits = kDefaultPrecisionBits);
Ordering compare(const Area& a, const Area& b, unsigned bits = kDefaultPrecisionBits);

/// As compare(), but an undecided sign raises PrecisionExhausted.
std::strong_ordering order(const Scalar& a, const Scalar& b, unsigned bits = kDefaultPrecisionBits);
std::strong_ordering order(const Area& a, const Area& b, unsigned bits = kDefaultPrecisionBits);

const Scalar& min(const Scalar& a, const Scalar& b, unsigned bits = kDefaultPrecisionBits);
const Scalar& max(const Scalar& a, const Scalar& b, unsigned bits = kDefaultPrecisionBits);

/// Some(rho) with b == rho * a when a and b are Q-parallel.  Throws
/// InvalidArgument when both are zero.
std::optional<Rational> commensurable(const Scalar& a, const Scalar& b);
std::optional<Rational> commensurable(const Area& a, const Area& b);
/// Some(rho) with s == rho * PI.
std::optional<Rational> commensurable_with_pi(const Scalar& s);

Rational parse_rational(std::string_view text);
/// Accepts `int`, `int.digits`, with optional sign.
Rational parse_decimal(std::string_view text);
/// Grammar: term (("+"|"-") term)*, term = rational | rational "*" SYMBOL | SYMBOL.
Scalar parse_scalar(std::string_view text, const SymbolTablePtr& table);

std::string to_string(const Rational& q);
/// Canonical literal: user symbols and PI in table order, rational part last.
std::string to_string(const Scalar& s);
std::string to_string(const Area& a);
/// Presentation-only decimal rendering with `digits` fractional digits.
std::string to_decimal(const Scalar& s, int digits);
std::string to_decimal(const Rational& q, int digits);

}  // namespace commensura
