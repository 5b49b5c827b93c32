#include "commensura/dehn.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <regex>
#include <sstream>

#include "commensura/error.hpp"
#include "commensura/graph_io.hpp"

namespace commensura {

Scalar MeasureSpace::total() const {
  Scalar sum;
  for (const auto& m : measures) sum += m;
  return sum;
}

Scalar MeasureSpace::measure_of(const std::vector<std::size_t>& subset) const {
  Scalar sum;
  for (std::size_t i : subset) sum += measures.at(i);
  return sum;
}

std::string_view to_string(AxiomFailure::Kind k) {
  switch (k) {
    case AxiomFailure::Kind::Uncovered: return "Uncovered";
    case AxiomFailure::Kind::DoublyCovered: return "DoublyCovered";
    case AxiomFailure::Kind::NotSquare: return "NotSquare";
  }
  return "Unknown";
}

std::string describe(const MeasureTiling& t, const AxiomFailure& f) {
  switch (f.kind) {
    case AxiomFailure::Kind::Uncovered:
      return "(" + t.x.atoms.at(f.x) + ", " + t.y.atoms.at(f.y) + ") lies in no piece";
    case AxiomFailure::Kind::DoublyCovered:
      return "(" + t.x.atoms.at(f.x) + ", " + t.y.atoms.at(f.y) + ") lies in pieces " +
             std::to_string(f.first) + " and " + std::to_string(f.second);
    case AxiomFailure::Kind::NotSquare:
      return "piece " + std::to_string(f.first) + " has sides " + to_string(t.side_a(f.first)) +
             " and " + to_string(t.side_b(f.first));
  }
  return {};
}

namespace {

void check_atoms(const MeasureSpace& s, unsigned bits) {
  for (std::size_t i = 0; i < s.measures.size(); ++i)
    if (compare(s.measures[i], Scalar(0), bits) != Ordering::Greater)
      throw Error(ErrorKind::InvalidArgument, "atom '" + s.atoms.at(i) + "' of " + s.name +
                                                  " has non-positive measure " +
                                                  to_string(s.measures[i]));
}

void check_subset(const std::vector<std::size_t>& subset, std::size_t n, std::size_t piece) {
  std::vector<std::size_t> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      (!sorted.empty() && sorted.back() >= n))
    throw Error(ErrorKind::InvalidArgument,
                "piece " + std::to_string(piece) + " lists an invalid or repeated atom");
}

}  // namespace

std::optional<AxiomFailure> verify_measure_tiling(const MeasureTiling& t, bool square,
                                                  unsigned bits) {
  check_atoms(t.x, bits);
  check_atoms(t.y, bits);
  const std::size_t nx = t.x.measures.size();
  const std::size_t ny = t.y.measures.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(nx * ny, kNone);
  std::optional<AxiomFailure> doubled;
  std::size_t doubled_cell = nx * ny;

  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const auto& p = t.pieces[i];
    check_subset(p.a, nx, i);
    check_subset(p.b, ny, i);
    for (std::size_t xa : p.a)
      for (std::size_t yb : p.b) {
        std::size_t cell = xa * ny + yb;
        if (owner[cell] == kNone) {
          owner[cell] = i;
        } else if (cell < doubled_cell) {
          doubled_cell = cell;
          doubled = AxiomFailure{AxiomFailure::Kind::DoublyCovered, xa, yb, owner[cell], i};
        }
      }
  }
  for (std::size_t cell = 0; cell < nx * ny; ++cell) {
    if (cell == doubled_cell) return doubled;
    if (owner[cell] == kNone)
      return AxiomFailure{AxiomFailure::Kind::Uncovered, cell / ny, cell % ny, 0, 0};
  }
  if (square)
    for (std::size_t i = 0; i < t.pieces.size(); ++i)
      if (!(t.side_a(i) == t.side_b(i)))
        return AxiomFailure{AxiomFailure::Kind::NotSquare, 0, 0, i, i};
  return std::nullopt;
}

Rational LinearFunctional::operator()(const Scalar& s) const {
  Rational sum = 0;
  for (const auto& [id, value] : values) sum += s.coefficient(id) * value;
  return sum;
}

std::string to_string(const LinearFunctional& f, const SymbolTablePtr& table) {
  std::string out = "{";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (i) out += ", ";
    SymbolId id = f.values[i].first;
    std::string name = table && id < table->size() ? table->symbol(id).name
                                                   : (id == kPiSymbol ? "PI" : "1");
    out += "f(" + name + ")=" + f.values[i].second.get_str();
  }
  return out + "}";
}

LinearFunctional solve_functional(const Scalar& v1, const Rational& a1, const Scalar& v2,
                                  const Rational& a2) {
  std::vector<SymbolId> keys;
  for (const auto& [k, c] : v1.form().terms()) keys.push_back(k);
  for (const auto& [k, c] : v2.form().terms()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  for (SymbolId k : keys) {
    Rational c1 = v1.coefficient(k), c2 = v2.coefficient(k);
    Rational f = c1 != 0 ? Rational(a1 / c1) : Rational(a2 / c2);
    if (c1 * f == a1 && c2 * f == a2) return LinearFunctional{{{k, f}}};
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      Rational p = v1.coefficient(keys[i]), q = v1.coefficient(keys[j]);
      Rational r = v2.coefficient(keys[i]), s = v2.coefficient(keys[j]);
      Rational det = p * s - q * r;
      if (det == 0) continue;
      Rational fi = (a1 * s - q * a2) / det;
      Rational fj = (p * a2 - r * a1) / det;
      LinearFunctional f;
      if (fi != 0) f.values.emplace_back(keys[i], fi);
      if (fj != 0) f.values.emplace_back(keys[j], fj);
      return f;
    }
  throw Error(ErrorKind::InternalInconsistency,
              "no linear functional separates " + to_string(v1) + " and " + to_string(v2));
}

std::pair<Rational, Rational> functional_identity(const MeasureTiling& t, const LinearFunctional& f,
                                                  unsigned bits) {
  if (auto fail = verify_measure_tiling(t, false, bits))
    throw Error(ErrorKind::InvalidTiling, describe(t, *fail));
  Rational left = f(t.x.total()) * f(t.y.total());
  Rational right = 0;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) right += f(t.side_a(i)) * f(t.side_b(i));
  return {left, right};
}

namespace {

FunctionalCertificate evaluate(const MeasureTiling& t, FunctionalCertificate::Kind kind,
                               LinearFunctional f) {
  FunctionalCertificate c{kind, std::nullopt, std::move(f), 0, 0, {}, 0, 0, {}, {}};
  c.fx = c.f(t.x.total());
  c.fy = c.f(t.y.total());
  c.left = c.fx * c.fy;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    Rational fa = c.f(t.side_a(i)), fb = c.f(t.side_b(i));
    c.piece_values.emplace_back(fa, fb);
    c.right += fa * fb;
  }
  return c;
}

}  // namespace

std::string_view to_string(FunctionalCertificate::Kind k) {
  switch (k) {
    case FunctionalCertificate::Kind::SidesIncommensurable: return "SidesIncommensurable";
    case FunctionalCertificate::Kind::PieceIncommensurable: return "PieceIncommensurable";
    case FunctionalCertificate::Kind::LemmaVariant: return "LemmaVariant";
  }
  return "Unknown";
}

bool FunctionalCertificate::recheck(const MeasureTiling& t, unsigned bits) const {
  if (t.pieces.size() != piece_values.size()) return false;
  FunctionalCertificate again = evaluate(t, kind, f);
  if (again.fx != fx || again.fy != fy || again.left != left || again.right != right) return false;
  for (std::size_t i = 0; i < piece_values.size(); ++i)
    if (again.piece_values[i] != piece_values[i]) return false;
  auto fail = verify_measure_tiling(t, kind != Kind::LemmaVariant, bits);
  return fail && *fail == violated;
}

DehnResult dehn_test(const MeasureTiling& t, unsigned bits) {
  const Scalar mx = t.x.total();
  const Scalar my = t.y.total();
  if (compare(mx, Scalar(0), bits) != Ordering::Greater ||
      compare(my, Scalar(0), bits) != Ordering::Greater)
    throw Error(ErrorKind::InvalidArgument, "both sides of a tiling need positive measure");

  // Ratios to mu X of mu Y, then of each side of each piece.
  std::vector<Rational> ratios;
  std::optional<std::size_t> bad;  // index into the sequence Y, A_0, B_0, A_1, ...
  std::vector<Scalar> values{my};
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    values.push_back(t.side_a(i));
    values.push_back(t.side_b(i));
  }
  for (std::size_t k = 0; k < values.size() && !bad; ++k) {
    auto rho = commensurable(mx, values[k]);
    if (rho)
      ratios.push_back(*rho);
    else
      bad = k;
  }

  DehnResult result;
  if (!bad) {
    mpz_class num_gcd = 1, den_lcm = 1;  // gcd over 1 (for mu X) and every ratio
    for (const auto& r : ratios) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), r.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.get_den_mpz_t());
    }
    Rational g(num_gcd, den_lcm);
    g.canonicalize();
    DehnCommensurable c{mx * g, Rational(1 / g), Rational(ratios[0] / g), {}};
    for (std::size_t i = 0; i < t.pieces.size(); ++i) c.pieces.push_back(ratios[1 + 2 * i] / g);
    result.commensurable = std::move(c);
    return result;
  }

  FunctionalCertificate cert;
  if (*bad == 0) {
    cert = evaluate(t, FunctionalCertificate::Kind::SidesIncommensurable,
                    solve_functional(mx, 1, my, -1));
    cert.summary = "f(X) f(Y) = " + cert.left.get_str() + " while the pieces sum to " +
                   cert.right.get_str();
  } else {
    std::size_t piece = (*bad - 1) / 2;
    cert = evaluate(t, FunctionalCertificate::Kind::PieceIncommensurable,
                    solve_functional(mx, 0, values[*bad], 1));
    cert.piece = piece;
    cert.summary = "g(X) = 0 and g of a side of piece " + std::to_string(piece) +
                   " = 1; the pieces sum to " + cert.right.get_str() + " instead of 0";
  }
  auto fail = verify_measure_tiling(t, true, bits);
  if (!fail)
    throw Error(ErrorKind::InternalInconsistency,
                "a square tiling with incommensurable sides passed every axiom check");
  cert.violated = *fail;
  cert.summary += "; " + std::string(to_string(fail->kind)) + ": " + describe(t, *fail);
  result.certificate = std::move(cert);
  return result;
}

LemmaResult dehn_plus_test(const MeasureTiling& t, const Scalar& q, const Scalar& r,
                           const Rational& a, const std::vector<std::size_t>& designated,
                           unsigned bits) {
  LemmaResult res;
  auto fail = [&](std::string clause) { res.failed_clauses.push_back(std::move(clause)); };

  if (compare(q, Scalar(0), bits) != Ordering::Greater ||
      compare(r, Scalar(0), bits) != Ordering::Greater)
    fail("q and r must be positive");
  const Rational half_a_minus_1 = a / 2 - 1;
  if (!(t.x.total() == q * 2 + r * a)) fail("mu X = 2q + a r");
  if (!(t.y.total() == q + r * half_a_minus_1)) fail("mu Y = q + (a/2 - 1) r");
  if (t.pieces.size() < 2) {
    fail("pieces 0 and 1 must be r x (q + r) rectangles");
  } else {
    for (std::size_t i = 0; i < 2; ++i)
      if (!(t.side_a(i) == r) || !(t.side_b(i) == q + r))
        fail("piece " + std::to_string(i) + " is not an r x (q + r) rectangle");
  }
  for (std::size_t i = 2; i < t.pieces.size(); ++i)
    if (!(t.side_a(i) == t.side_b(i))) fail("piece " + std::to_string(i) + " is not a square");

  res.bound = r * r * (a - 4);
  std::vector<std::size_t> seen;
  for (std::size_t i : designated) {
    if (i < 2 || i >= t.pieces.size() || std::find(seen.begin(), seen.end(), i) != seen.end()) {
      fail("designated piece " + std::to_string(i) + " is not a distinct square piece");
      continue;
    }
    seen.push_back(i);
    Scalar side = t.side_a(i);
    if (!commensurable(r, side))
      fail("designated piece " + std::to_string(i) + " is not commensurable with r");
    res.designated_sum += side * side;
  }
  if (order(res.designated_sum, res.bound, bits) <= 0)
    fail("designated squares sum to " + to_string(res.designated_sum) + ", not above (a-4) r^2 = " +
         to_string(res.bound));
  if (!res.audit_passed()) return res;

  if (auto rho = commensurable(r, q)) {
    res.ratio = *rho;
    return res;
  }
  FunctionalCertificate cert = evaluate(t, FunctionalCertificate::Kind::LemmaVariant,
                                        solve_functional(q, half_a_minus_1, r, -1));
  auto broken = verify_measure_tiling(t, false, bits);
  if (!broken)
    throw Error(ErrorKind::InternalInconsistency,
                "a tiling meeting every lemma clause has incommensurable q and r");
  cert.violated = *broken;
  cert.summary = "f(X) f(Y) = " + cert.left.get_str() + " but the rectangles give 2 * (" +
                 Rational(2 - a / 2).get_str() + ") and the pieces sum to " + cert.right.get_str() +
                 "; " + std::string(to_string(broken->kind)) + ": " + describe(t, *broken);
  res.certificate = std::move(cert);
  return res;
}

// ------------------------------------------------------------------- text

namespace {

std::vector<std::size_t> parse_atom_set(const std::string& body, const MeasureSpace& s) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in(body);
  while (std::getline(in, item, ',')) {
    auto words = split_words(item);
    if (words.empty()) continue;
    if (words.size() != 1) throw Error(ErrorKind::Syntax, "malformed atom list '" + body + "'");
    auto it = std::find(s.atoms.begin(), s.atoms.end(), words[0]);
    if (it == s.atoms.end())
      throw Error(ErrorKind::UnknownName, "unknown atom '" + words[0] + "' of " + s.name);
    out.push_back(static_cast<std::size_t>(it - s.atoms.begin()));
  }
  return out;
}

}  // namespace

MeasureTilingDocument parse_measure_tiling(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);) lines.push_back(l.substr(0, l.find('#')));
  }
  auto table = std::make_shared<SymbolTable>();
  auto at_line = [](std::size_t i, const Error& e) {
    std::string what = e.what();
    auto colon = what.find(": ");
    return Error(e.kind(), "line " + std::to_string(i + 1) + ": " + what.substr(colon + 2));
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      parse_symbol_line(split_words(lines[i]), *table);
    } catch (const Error& e) {
      throw at_line(i, e);
    }
  }
  SymbolTablePtr symbols = table;

  static const std::regex space_re(R"(^\s*space\s+([A-Za-z_]\w*)\s*(.*?)\s*$)");
  static const std::regex split_re(R"(\s+(?=[A-Za-z_]\w*=))");
  static const std::regex atom_re(R"(^([A-Za-z_]\w*)=(.+)$)");
  static const std::regex piece_re(R"(^\s*piece\s+A=\{([^}]*)\}\s+B=\{([^}]*)\}\s*$)");

  MeasureTiling t;
  int spaces = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto words = split_words(lines[i]);
    if (words.empty() || words[0] == "symbol") continue;
    try {
      std::smatch m;
      if (words[0] == "space") {
        if (!std::regex_match(lines[i], m, space_re))
          throw Error(ErrorKind::Syntax, "expected 'space NAME atom=<scalar> ...'");
        if (spaces == 2) throw Error(ErrorKind::Syntax, "more than two spaces");
        MeasureSpace& s = spaces++ == 0 ? t.x : t.y;
        s.name = m[1];
        const std::string body = m[2];
        for (std::sregex_token_iterator it(body.begin(), body.end(), split_re, -1), end;
             it != end; ++it) {
          std::string item = *it;
          if (item.empty()) continue;
          std::smatch am;
          if (!std::regex_match(item, am, atom_re))
            throw Error(ErrorKind::Syntax, "malformed atom '" + item + "'");
          if (std::find(s.atoms.begin(), s.atoms.end(), am[1].str()) != s.atoms.end())
            throw Error(ErrorKind::DuplicateName, "atom '" + am[1].str() + "' declared twice");
          s.atoms.push_back(am[1]);
          s.measures.push_back(parse_scalar(am[2].str(), symbols));
        }
      } else if (words[0] == "piece") {
        if (spaces < 2) throw Error(ErrorKind::Syntax, "piece before both spaces are declared");
        if (!std::regex_match(lines[i], m, piece_re))
          throw Error(ErrorKind::Syntax, "expected 'piece A={...} B={...}'");
        t.pieces.push_back({parse_atom_set(m[1], t.x), parse_atom_set(m[2], t.y)});
      } else {
        throw Error(ErrorKind::Syntax, "unknown directive '" + words[0] + "'");
      }
    } catch (const Error& e) {
      throw at_line(i, e);
    }
  }
  if (spaces != 2) throw Error(ErrorKind::Syntax, "expected two 'space' lines");
  return {symbols, std::move(t)};
}

std::string serialize_measure_tiling(const MeasureTiling& t, const SymbolTablePtr& symbols) {
  std::string out = symbols ? serialize_symbols(*symbols) : std::string();
  for (const MeasureSpace* s : {&t.x, &t.y}) {
    out += "space " + s->name;
    for (std::size_t i = 0; i < s->atoms.size(); ++i)
      out += " " + s->atoms[i] + "=" + to_string(s->measures[i]);
    out += "\n";
  }
  auto set = [](const std::vector<std::size_t>& idx, const MeasureSpace& s) {
    std::string body;
    for (std::size_t k = 0; k < idx.size(); ++k) body += (k ? "," : "") + s.atoms[idx[k]];
    return "{" + body + "}";
  };
  for (const auto& p : t.pieces) out += "piece A=" + set(p.a, t.x) + " B=" + set(p.b, t.y) + "\n";
  return out;
}

}  // namespace commensura
