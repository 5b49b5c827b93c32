#include "commensura/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "commensura/error.hpp"

namespace commensura {

// ---------------------------------------------------------------- intervals

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval r{p[0], p[0]};
  for (const auto& v : p) {
    if (v < r.lo) r.lo = v;
    if (v > r.hi) r.hi = v;
  }
  return r;
}

Interval operator*(const Rational& c, const Interval& a) {
  if (c >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

namespace {

// Truncated fixed-point sum of arctan(1/k) scaled by `scale`, together with
// an upper bound on the absolute error in units of the last place.  Each
// truncating division costs under one ulp and the shrinking powers carry
// less than two ulps of inherited error, so every term is off by < 3 ulps;
// the alternating tail after the last nonzero power is < 2 ulps.
std::pair<mpz_class, mpz_class> arctan_inverse(unsigned long k, const mpz_class& scale) {
  mpz_class power = scale / k;
  const mpz_class k2 = mpz_class(k) * k;
  mpz_class sum = 0;
  unsigned long n = 0;
  while (power != 0) {
    mpz_class term = power / (2 * n + 1);
    if (n % 2 == 0)
      sum += term;
    else
      sum -= term;
    power /= k2;
    ++n;
  }
  return {sum, mpz_class(3 * n + 2)};
}

Interval compute_pi(unsigned bits) {
  const unsigned working = bits + 32;
  mpz_class scale = 1;
  scale <<= working;
  auto [a5, e5] = arctan_inverse(5, scale);
  auto [a239, e239] = arctan_inverse(239, scale);
  mpz_class value = 16 * a5 - 4 * a239;
  mpz_class err = 16 * e5 + 4 * e239;
  Rational lo(mpz_class(value - err), scale);
  Rational hi(mpz_class(value + err), scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace

Interval pi_enclosure(unsigned bits) {
  static std::mutex mutex;
  static std::map<unsigned, Interval> cache;
  const unsigned rounded = std::max(32u, (bits + 31) / 32 * 32);
  std::lock_guard lock(mutex);
  auto it = cache.find(rounded);
  if (it == cache.end()) it = cache.emplace(rounded, compute_pi(rounded)).first;
  return it->second;
}

// ------------------------------------------------------------- symbol table

SymbolTable::SymbolTable() {
  symbols_.push_back(Symbol{"1", Source::Exact, 1, 0, {}});
  symbols_.push_back(Symbol{"PI", Source::Pi, 0, 0, {}});
}

void SymbolTable::check_fresh(const std::string& name) const {
  if (find(name))
    throw Error(ErrorKind::DuplicateName, "symbol '" + name + "' is already declared");
}

SymbolId SymbolTable::declare_decimal(std::string name, Rational value, Rational radius,
                                      Refiner refine) {
  check_fresh(name);
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "negative error radius for " + name);
  symbols_.push_back(Symbol{std::move(name), Source::Decimal, std::move(value), std::move(radius),
                            std::move(refine)});
  return static_cast<SymbolId>(symbols_.size() - 1);
}

void SymbolTable::declare_pi_alias(std::string name) {
  check_fresh(name);
  pi_aliases_.push_back(std::move(name));
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return static_cast<SymbolId>(i);
  for (const auto& alias : pi_aliases_)
    if (alias == name) return kPiSymbol;
  return std::nullopt;
}

Interval SymbolTable::enclosure(SymbolId id, unsigned bits) const {
  const Symbol& s = symbols_.at(id);
  switch (s.source) {
    case Source::Exact: return {s.value, s.value};
    case Source::Pi: return pi_enclosure(bits);
    case Source::Decimal:
      if (s.refine) return s.refine(bits);
      return {s.value - s.radius, s.value + s.radius};
  }
  return {s.value, s.value};
}

// ------------------------------------------------------------------ scalars

namespace {

template <typename Form>
bool form_uses_user_symbols(const Form& form);

template <>
bool form_uses_user_symbols(const LinearForm<SymbolId>& form) {
  return std::any_of(form.terms().begin(), form.terms().end(),
                     [](const auto& t) { return t.first > kPiSymbol; });
}

template <>
bool form_uses_user_symbols(const LinearForm<MonomialKey>& form) {
  return std::any_of(form.terms().begin(), form.terms().end(), [](const auto& t) {
    auto [i, j] = monomial_factors(t.first);
    return i > kPiSymbol || j > kPiSymbol;
  });
}

SymbolTablePtr merge_tables(const SymbolTablePtr& a, bool a_user, const SymbolTablePtr& b,
                            bool b_user) {
  if (a_user && b_user && a != b)
    throw Error(ErrorKind::MixedSymbolTables, "operands come from different symbol tables");
  if (a_user) return a;
  if (b_user) return b;
  return a ? a : b;
}

const SymbolTable& builtin_table() {
  static const SymbolTable table;
  return table;
}

Interval symbol_enclosure(const SymbolTablePtr& table, SymbolId id, unsigned bits) {
  if (id <= kPiSymbol) return builtin_table().enclosure(id, bits);
  if (!table) throw Error(ErrorKind::InternalInconsistency, "user symbol without a table");
  return table->enclosure(id, bits);
}

}  // namespace

Scalar::Scalar(const Rational& q) : form_(LinearForm<SymbolId>::single(kUnitSymbol, q)) {}

Scalar Scalar::pi() {
  Scalar s;
  s.form_ = LinearForm<SymbolId>::single(kPiSymbol, 1);
  return s;
}

Scalar Scalar::symbol(SymbolTablePtr table, SymbolId id) {
  if (table && id >= table->size())
    throw Error(ErrorKind::UnknownName, "symbol id out of range");
  Scalar s;
  s.form_ = LinearForm<SymbolId>::single(id, 1);
  s.table_ = std::move(table);
  return s;
}

bool Scalar::is_rational() const {
  return form_.is_zero() ||
         (form_.terms().size() == 1 && form_.terms().front().first == kUnitSymbol);
}

bool Scalar::uses_user_symbols() const { return form_uses_user_symbols(form_); }

Scalar& Scalar::operator+=(const Scalar& other) {
  table_ = merge_tables(table_, uses_user_symbols(), other.table_, other.uses_user_symbols());
  form_.add_scaled(other.form_, 1);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  table_ = merge_tables(table_, uses_user_symbols(), other.table_, other.uses_user_symbols());
  form_.add_scaled(other.form_, -1);
  return *this;
}

Scalar& Scalar::operator*=(const Rational& factor) {
  form_.scale(factor);
  return *this;
}

Scalar& Scalar::operator/=(const Rational& divisor) {
  if (divisor == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  form_.scale(1 / divisor);
  return *this;
}

// -------------------------------------------------------------------- areas

Area::Area(const Rational& q)
    : form_(LinearForm<MonomialKey>::single(monomial(kUnitSymbol, kUnitSymbol), q)) {}

bool Area::uses_user_symbols() const { return form_uses_user_symbols(form_); }

Area& Area::operator+=(const Area& other) {
  table_ = merge_tables(table_, uses_user_symbols(), other.table_, other.uses_user_symbols());
  form_.add_scaled(other.form_, 1);
  return *this;
}

Area& Area::operator-=(const Area& other) {
  table_ = merge_tables(table_, uses_user_symbols(), other.table_, other.uses_user_symbols());
  form_.add_scaled(other.form_, -1);
  return *this;
}

Area& Area::operator*=(const Rational& factor) {
  form_.scale(factor);
  return *this;
}

Area operator*(const Scalar& a, const Scalar& b) {
  Area out;
  out.table_ = merge_tables(a.table(), a.uses_user_symbols(), b.table(), b.uses_user_symbols());
  std::map<MonomialKey, Rational> acc;
  for (const auto& [i, ci] : a.form().terms())
    for (const auto& [j, cj] : b.form().terms()) acc[monomial(i, j)] += ci * cj;
  for (const auto& [k, c] : acc)
    if (c != 0) out.form_.add_scaled(LinearForm<MonomialKey>::single(k, c), 1);
  return out;
}

// ------------------------------------------------------- enclosure & order

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    case Ordering::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Interval enclosure(const Scalar& s, unsigned bits) {
  Interval sum{0, 0};
  for (const auto& [id, c] : s.form().terms())
    sum = sum + c * symbol_enclosure(s.table(), id, bits);
  return sum;
}

Interval enclosure(const Area& a, unsigned bits) {
  Interval sum{0, 0};
  std::map<SymbolId, Interval> cache;
  auto get = [&](SymbolId id) -> const Interval& {
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, symbol_enclosure(a.table(), id, bits)).first;
    return it->second;
  };
  for (const auto& [key, c] : a.form().terms()) {
    auto [i, j] = monomial_factors(key);
    sum = sum + c * (get(i) * get(j));
  }
  return sum;
}

namespace {

template <typename Value>
Ordering sign_of(const Value& diff, bool rational_only, unsigned bits) {
  if (diff.is_zero()) return Ordering::Equal;
  if (rational_only) {
    const Rational& c = diff.form().terms().front().second;
    return c > 0 ? Ordering::Greater : Ordering::Less;
  }
  unsigned p = std::min(64u, std::max(bits, 1u));
  for (;;) {
    Interval box = enclosure(diff, p);
    if (box.lo > 0) return Ordering::Greater;
    if (box.hi < 0) return Ordering::Less;
    if (p >= bits) return Ordering::Indeterminate;
    p = std::min(p * 2, bits);
  }
}

std::strong_ordering to_strong(Ordering o) {
  switch (o) {
    case Ordering::Less: return std::strong_ordering::less;
    case Ordering::Equal: return std::strong_ordering::equal;
    case Ordering::Greater: return std::strong_ordering::greater;
    case Ordering::Indeterminate: break;
  }
  throw Error(ErrorKind::PrecisionExhausted, "comparison undecided within the precision budget");
}

}  // namespace

Ordering compare(const Scalar& a, const Scalar& b, unsigned bits) {
  Scalar d = a - b;
  return sign_of(d, d.is_rational(), bits);
}

Ordering compare(const Area& a, const Area& b, unsigned bits) {
  Area d = a - b;
  const bool rational_only =
      !d.is_zero() && d.form().terms().size() == 1 &&
      d.form().terms().front().first == monomial(kUnitSymbol, kUnitSymbol);
  return sign_of(d, rational_only, bits);
}

std::strong_ordering order(const Scalar& a, const Scalar& b, unsigned bits) {
  return to_strong(compare(a, b, bits));
}

std::strong_ordering order(const Area& a, const Area& b, unsigned bits) {
  return to_strong(compare(a, b, bits));
}

const Scalar& min(const Scalar& a, const Scalar& b, unsigned bits) {
  return order(b, a, bits) < 0 ? b : a;
}

const Scalar& max(const Scalar& a, const Scalar& b, unsigned bits) {
  return order(b, a, bits) > 0 ? b : a;
}

// ---------------------------------------------------------- commensurable

namespace {

template <typename Value>
std::optional<Rational> parallel_ratio(const Value& a, const Value& b) {
  if (a.is_zero() && b.is_zero())
    throw Error(ErrorKind::InvalidArgument, "commensurability ratio of two zeros is undefined");
  if (a.is_zero()) return std::nullopt;
  const auto& [key, ca] = a.form().terms().front();
  Rational rho = b.form().coefficient(key) / ca;
  Value scaled = a * rho;
  if (scaled == b) return rho;
  return std::nullopt;
}

}  // namespace

std::optional<Rational> commensurable(const Scalar& a, const Scalar& b) {
  return parallel_ratio(a, b);
}

std::optional<Rational> commensurable(const Area& a, const Area& b) {
  return parallel_ratio(a, b);
}

std::optional<Rational> commensurable_with_pi(const Scalar& s) {
  return commensurable(Scalar::pi(), s);
}

// ------------------------------------------------------------------ parsing

namespace {

class LiteralParser {
 public:
  LiteralParser(std::string_view text, const SymbolTablePtr& table) : text_(text), table_(table) {}

  Scalar parse() {
    Scalar result;
    skip_space();
    Rational sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = get() == '-' ? -1 : 1;
      skip_space();
    }
    result += sign * term();
    for (;;) {
      skip_space();
      if (at_end()) break;
      char op = get();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      skip_space();
      Scalar t = term();
      if (op == '+')
        result += t;
      else
        result -= t;
    }
    return result;
  }

 private:
  Scalar term() {
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      Rational q = rational();
      skip_space();
      if (peek() == '*') {
        get();
        skip_space();
        return q * symbol();
      }
      return Scalar(q);
    }
    return symbol();
  }

  Rational rational() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) get();
    mpz_class num(std::string(text_.substr(start, pos_ - start)));
    std::size_t save = pos_;
    skip_space();
    if (peek() == '/') {
      get();
      skip_space();
      std::size_t dstart = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) get();
      if (dstart == pos_) fail("expected denominator");
      mpz_class den(std::string(text_.substr(dstart, pos_ - dstart)));
      if (den == 0) fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    pos_ = save;
    return Rational(num);
  }

  Scalar symbol() {
    std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      fail("expected a rational or a symbol");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') get();
    std::string name(text_.substr(start, pos_ - start));
    if (name == "PI") return Scalar::pi();
    if (!table_) fail("unknown symbol '" + name + "'");
    auto id = table_->find(name);
    if (!id) throw Error(ErrorKind::UnknownName, "unknown symbol '" + name + "'");
    if (*id == kPiSymbol) return Scalar::pi();
    return Scalar::symbol(table_, *id);
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char get() { return at_end() ? '\0' : text_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Syntax, what + " at column " + std::to_string(pos_ + 1) + " in '" +
                                       std::string(text_) + "'");
  }

  std::string_view text_;
  const SymbolTablePtr& table_;
  std::size_t pos_ = 0;
};

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorKind::Syntax, "malformed rational '" + std::string(text) + "'");
  mpz_class d{std::string(den)};
  if (d == 0) throw Error(ErrorKind::Syntax, "zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(std::string(num)), d);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational parse_decimal(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return parse_rational(text);
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  bool negative = !whole.empty() && whole.front() == '-';
  if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
  if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
    throw Error(ErrorKind::Syntax, "malformed decimal '" + std::string(text) + "'");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
  mpz_class num(std::string(whole.empty() ? "0" : whole) + std::string(frac));
  Rational q(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Scalar parse_scalar(std::string_view text, const SymbolTablePtr& table) {
  return LiteralParser(text, table).parse();
}

// ----------------------------------------------------------- serialization

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

std::string symbol_name(const SymbolTablePtr& table, SymbolId id) {
  if (id == kPiSymbol) return "PI";
  if (id == kUnitSymbol) return "1";
  if (!table) return "?" + std::to_string(id);
  return table->symbol(id).name;
}

void append_term(std::string& out, const Rational& coeff, const std::string& name) {
  const bool negative = coeff < 0;
  Rational mag = abs(coeff);
  if (out.empty())
    out += negative ? "-" : "";
  else
    out += negative ? " - " : " + ";
  if (name.empty()) {
    out += mag.get_str();
  } else if (mag == 1) {
    out += name;
  } else {
    out += mag.get_str() + "*" + name;
  }
}

}  // namespace

std::string to_string(const Scalar& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [id, c] : s.form().terms())
    if (id != kUnitSymbol) append_term(out, c, symbol_name(s.table(), id));
  Rational unit = s.coefficient(kUnitSymbol);
  if (unit != 0) append_term(out, unit, "");
  return out;
}

std::string to_string(const Area& a) {
  if (a.is_zero()) return "0";
  std::string out;
  const MonomialKey constant = monomial(kUnitSymbol, kUnitSymbol);
  for (const auto& [key, c] : a.form().terms()) {
    if (key == constant) continue;
    auto [i, j] = monomial_factors(key);
    std::string name = i == kUnitSymbol ? symbol_name(a.table(), j)
                                        : symbol_name(a.table(), i) + "*" + symbol_name(a.table(), j);
    append_term(out, c, name);
  }
  Rational k = a.form().coefficient(constant);
  if (k != 0) append_term(out, k, "");
  return out;
}

std::string to_decimal(const Rational& q, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::max(digits, 0)));
  Rational mag = abs(q) * scale;
  mpz_class scaled = mag.get_num() / mag.get_den();
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits))
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return (q < 0 ? "-" : "") + s;
}

std::string to_decimal(const Scalar& s, int digits) {
  Interval box = enclosure(s, static_cast<unsigned>(std::max(digits, 0)) * 4 + 32);
  return to_decimal(Rational((box.lo + box.hi) / 2), digits);
}

}  // namespace commensura
