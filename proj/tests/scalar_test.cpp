#include <gtest/gtest.h>

#include <random>

#include "commensura/error.hpp"
#include "fixtures.hpp"

using namespace commensura;

namespace {

const Scalar kPi = Scalar::pi();

// First 100 decimals of pi, from published tables.
const char* kPiDigits =
    "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

Rational pi_truncated() { return parse_decimal(kPiDigits); }

Scalar random_scalar(std::mt19937& rng, const SymbolTablePtr& table = nullptr,
                     std::optional<SymbolId> user = std::nullopt) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
  Scalar s = Scalar(Rational(num(rng), den(rng))) + kPi * Rational(num(rng), den(rng));
  if (user) s += Scalar::symbol(table, *user) * Rational(num(rng), den(rng));
  return s;
}

void expect_throws_kind(const std::function<void()>& fn, ErrorKind kind) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Scalar, AddSubMul) {
  EXPECT_EQ(kPi + kPi, kPi * 2);
  EXPECT_EQ(to_string(kPi + kPi), "2*PI");

  Scalar a = kPi * Rational(2, 3) + 1;
  EXPECT_EQ(a - kPi * Rational(2, 3), Scalar(1));

  Scalar d = kPi - kPi / 3;
  Area sq = d * d;
  EXPECT_EQ(sq.coefficient(kPiSymbol, kPiSymbol), Rational(4, 9));
  EXPECT_EQ(sq.form().terms().size(), 1u);
  EXPECT_EQ(to_string(sq), "4/9*PI*PI");
}

TEST(Scalar, CompareExamples) {
  EXPECT_EQ(compare(kPi, Scalar(3)), Ordering::Greater);
  EXPECT_EQ(compare(kPi, kPi), Ordering::Equal);
  EXPECT_EQ(compare(Scalar(Rational(355, 113)), kPi), Ordering::Greater);
  EXPECT_EQ(compare(Scalar(Rational(22, 7)), kPi), Ordering::Greater);
  EXPECT_EQ(compare(Scalar(Rational(333, 106)), kPi), Ordering::Less);
}

TEST(Scalar, IndeterminateWithinBudget) {
  // 40 decimals agree with pi, so 64 bits cannot separate them.
  Scalar near = parse_decimal("3.1415926535897932384626433832795028841971");
  EXPECT_EQ(compare(near, kPi, 64), Ordering::Indeterminate);
  expect_throws_kind([&] { (void)order(near, kPi, 64); }, ErrorKind::PrecisionExhausted);
  EXPECT_EQ(compare(near, kPi, 256), Ordering::Less);
}

TEST(Scalar, CommensurableExamples) {
  EXPECT_EQ(commensurable(kPi, kPi * 2), Rational(2));
  EXPECT_EQ(commensurable(kPi, Scalar(1)), std::nullopt);
  EXPECT_EQ(commensurable(kPi * Rational(2, 3) + 1, kPi + Rational(3, 2)), Rational(3, 2));
  EXPECT_EQ(commensurable_with_pi(kPi * Rational(8, 3)), Rational(8, 3));
  EXPECT_EQ(commensurable_with_pi(kPi + 1), std::nullopt);
  expect_throws_kind([] { (void)commensurable(Scalar(0), Scalar(0)); }, ErrorKind::InvalidArgument);
}

TEST(Scalar, PiEnclosureAgainstPublishedDigits) {
  const Rational digits = pi_truncated();
  const Rational tail(1, mpz_class("1" + std::string(100, '0')));
  for (unsigned bits : {8u, 64u, 200u, 300u}) {
    Interval box = pi_enclosure(bits);
    EXPECT_LE(box.width(), Rational(1, mpz_class(1) << bits));
    // pi lies in [digits, digits + 10^-100]
    EXPECT_LE(box.lo, digits + tail) << bits;
    EXPECT_GE(box.hi, digits) << bits;
  }
  Interval fine = pi_enclosure(400);
  EXPECT_TRUE(fine.lo >= digits && fine.hi <= digits + tail);
}

TEST(Scalar, EnclosuresNest) {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    Scalar s = random_scalar(rng);
    Interval prev = enclosure(s, 16);
    for (unsigned bits = 32; bits <= 512; bits *= 2) {
      Interval next = enclosure(s, bits);
      EXPECT_TRUE(prev.lo <= next.lo && next.hi <= prev.hi) << to_string(s) << " at " << bits;
      prev = next;
    }
  }
}

TEST(Scalar, ParseAndSerialize) {
  auto table = std::make_shared<SymbolTable>();
  Scalar s = parse_scalar("1/3*PI + 2", table);
  EXPECT_EQ(s, kPi / 3 + 2);
  EXPECT_EQ(to_string(s), "1/3*PI + 2");
  EXPECT_EQ(parse_scalar("2 - PI", table), Scalar(2) - kPi);
  EXPECT_EQ(to_string(Scalar(2) - kPi), "-PI + 2");
  EXPECT_EQ(parse_scalar("-3/6", table), Scalar(Rational(-1, 2)));
  expect_throws_kind([&] { parse_scalar("1/3*", table); }, ErrorKind::Syntax);
  expect_throws_kind([&] { parse_scalar("2*TAU", table); }, ErrorKind::UnknownName);
  expect_throws_kind([&] { parse_rational("1/0"); }, ErrorKind::Syntax);
}

TEST(Scalar, UserSymbols) {
  auto table = std::make_shared<SymbolTable>();
  SymbolId e = table->declare_decimal("E", parse_decimal("2.718281828"), Rational(1, 1000000000));
  table->declare_pi_alias("pi");
  SymbolTablePtr t = table;
  Scalar x = parse_scalar("2*E + pi", t);
  EXPECT_EQ(x.coefficient(e), 2);
  EXPECT_EQ(x.coefficient(kPiSymbol), 1);
  EXPECT_EQ(to_string(x), "PI + 2*E");
  EXPECT_EQ(compare(Scalar::symbol(t, e), Scalar(Rational(27, 10))), Ordering::Greater);
  // the fixed radius cannot separate E from a closer rational
  EXPECT_EQ(compare(Scalar::symbol(t, e), parse_decimal("2.7182818284"), 512), Ordering::Indeterminate);
  EXPECT_FALSE(commensurable(Scalar::symbol(t, e), kPi));
  expect_throws_kind([&] { table->declare_decimal("E", 1, 0); }, ErrorKind::DuplicateName);
}

TEST(Scalar, RefinerSharpensUserSymbol) {
  // sqrt(2) by bisection, nested by construction
  auto table = std::make_shared<SymbolTable>();
  SymbolId r2 = table->declare_decimal("R2", parse_decimal("1.414"), Rational(1, 1000), [](unsigned bits) {
    Rational lo(1), hi(2);
    for (unsigned i = 0; i < bits; ++i) {
      Rational mid = (lo + hi) / 2;
      (mid * mid <= 2 ? lo : hi) = mid;
    }
    return Interval{lo, hi};
  });
  SymbolTablePtr t = table;
  Scalar s = Scalar::symbol(t, r2);
  EXPECT_EQ(compare(s, parse_decimal("1.41421356237309504880168872420969807"), 256), Ordering::Greater);
  EXPECT_EQ(compare(s, parse_decimal("1.41421356237309504880168872420969808"), 256), Ordering::Less);
}

TEST(Scalar, MixedSymbolTables) {
  auto t1 = std::make_shared<SymbolTable>();
  auto t2 = std::make_shared<SymbolTable>();
  SymbolId a = t1->declare_decimal("A", 1, 0);
  SymbolId b = t2->declare_decimal("B", 1, 0);
  Scalar x = Scalar::symbol(t1, a);
  Scalar y = Scalar::symbol(t2, b);
  expect_throws_kind([&] { (void)(x + y); }, ErrorKind::MixedSymbolTables);
  // built-in symbols mix freely
  EXPECT_NO_THROW((void)(x + kPi));
  EXPECT_NO_THROW((void)(y * y + kPi * kPi));
}

TEST(Scalar, ComparePropertiesRandom) {
  std::mt19937 rng(20240601);
  for (int i = 0; i < 400; ++i) {
    Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    Ordering ab = compare(a, b), ba = compare(b, a);
    ASSERT_NE(ab, Ordering::Indeterminate);
    switch (ab) {
      case Ordering::Less: EXPECT_EQ(ba, Ordering::Greater); break;
      case Ordering::Greater: EXPECT_EQ(ba, Ordering::Less); break;
      default: EXPECT_EQ(ba, ab);
    }
    EXPECT_EQ(compare(a + c, b + c), ab);
    // cross-check against a float-free midpoint evaluation
    Interval ea = enclosure(a, 300), eb = enclosure(b, 300);
    if (ab == Ordering::Less) {
      EXPECT_LT(ea.lo, eb.hi);
    }
    if (ab == Ordering::Greater) {
      EXPECT_GT(ea.hi, eb.lo);
    }
    if (auto rho = commensurable(a, b)) {
      EXPECT_TRUE((b - a * *rho).is_zero());
    }
  }
}

TEST(Scalar, MulCommutativeAndBilinear) {
  auto table = std::make_shared<SymbolTable>();
  SymbolId u = table->declare_decimal("U", parse_decimal("0.577"), Rational(1, 1000));
  SymbolTablePtr t = table;
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (int i = 0; i < 300; ++i) {
    Scalar a = random_scalar(rng, t, u), b = random_scalar(rng, t, u), c = random_scalar(rng, t, u);
    Rational alpha(num(rng), den(rng));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * alpha + c) * b, (a * b) * alpha + c * b);
    // coefficient oracle for the pi*pi monomial
    EXPECT_EQ((a * b).coefficient(kPiSymbol, kPiSymbol), a.coefficient(kPiSymbol) * b.coefficient(kPiSymbol));
    EXPECT_EQ((a * b).coefficient(kUnitSymbol, u),
              a.coefficient(kUnitSymbol) * b.coefficient(u) + a.coefficient(u) * b.coefficient(kUnitSymbol));
  }
}

TEST(Scalar, AreaOrder) {
  Area lhs = (kPi * Rational(8, 3)) * (kPi * Rational(2, 3));
  Area rhs = Area(Rational(16, 9)) * 0 + kPi * kPi * Rational(16, 9);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(compare(kPi * kPi, Area(Rational(986, 100))), Ordering::Greater);
  EXPECT_EQ(compare(kPi * kPi, Area(Rational(987, 100))), Ordering::Less);
  EXPECT_EQ(commensurable(kPi * kPi * 2, kPi * kPi * 3), Rational(3, 2));
}

TEST(Scalar, DecimalRendering) {
  EXPECT_EQ(to_decimal(kPi, 10), "3.1415926535");
  EXPECT_EQ(to_decimal(Rational(-1, 8), 3), "-0.125");
}
