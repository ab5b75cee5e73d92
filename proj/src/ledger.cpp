#include "nslab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <stdexcept>

namespace nslab {

namespace {

// cpp_int reads a leading zero as an octal prefix, so strip them first.
boost::multiprecision::cpp_int decimal_int(std::string digits) {
  const std::size_t sign = !digits.empty() && (digits[0] == '+' || digits[0] == '-');
  const std::size_t nz = digits.find_first_not_of('0', sign);
  digits.erase(sign, std::min(nz, digits.size() - 1) - sign);
  if (sign && digits[0] == '+') digits.erase(0, 1);
  return boost::multiprecision::cpp_int(digits);
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  static const std::regex frac(R"(^([+-]?\d+)/(\d+)$)");
  static const std::regex dec(R"(^([+-]?)(\d*)(?:\.(\d*))?$)");
  std::smatch m;
  using boost::multiprecision::cpp_int;
  if (std::regex_match(text, m, frac)) {
    cpp_int p = decimal_int(m[1].str());
    cpp_int q = decimal_int(m[2].str());
    if (q == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
    return Rational(p, q);
  }
  if (std::regex_match(text, m, dec) && (m[2].length() > 0 || m[3].length() > 0)) {
    std::string ip = m[2].length() ? m[2].str() : "0";
    std::string fp = m[3].str();
    cpp_int num = decimal_int(ip + fp);
    cpp_int den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    Rational r(num, den);
    return m[1].str() == "-" ? Rational(-r) : r;
  }
  throw std::invalid_argument("not a rational number: '" + raw + "'");
}

std::string rational_to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

DeltaParam::DeltaParam(Rational value) : value_(std::move(value)) {
  if (!admissible(value_))
    throw std::invalid_argument("delta = " + rational_to_string(value_) +
                                " outside the interval (1/3, 5/8]");
}

std::string ExponentExpr::to_string() const {
  std::string s;
  if (const_part != 0 || delta_coeff == 0) s = rational_to_string(const_part);
  if (delta_coeff != 0) {
    Rational mag = delta_coeff < 0 ? Rational(-delta_coeff) : delta_coeff;
    std::string coef = mag == 1 ? "" : rational_to_string(mag) + "*";
    if (delta_coeff < 0)
      s += "-" + coef + "delta";
    else
      s += (s.empty() ? "" : "+") + coef + "delta";
  }
  return s;
}

ExponentExpr combine_exponents(const std::vector<ExponentExpr>& terms) {
  ExponentExpr sum;
  for (const auto& t : terms) sum += t;
  return sum;
}

ExponentExpr BalanceTable::total() const {
  ExponentExpr sum;
  for (const auto& t : terms) sum += t.exponent;
  return sum;
}

BalanceTable BalanceTable::with_term(const std::string& label, const ExponentExpr& replacement) const {
  BalanceTable copy = *this;
  for (auto& t : copy.terms) {
    if (t.label == label) {
      t.exponent = replacement;
      return copy;
    }
  }
  throw std::out_of_range("table '" + name + "' has no term '" + label + "'");
}

namespace {

ExponentExpr R(long p, long q = 1) { return ExponentExpr(Rational(p, q)); }

std::vector<BalanceTable> build_catalog() {
  const ExponentExpr minus_delta(Rational(0), Rational(-1));
  std::vector<BalanceTable> t;

  t.push_back({"local-balance", "local space-time balance",
               {{"six-fold IBP (phase)", R(-3)},
                {"passage to H^-1", R(-1)},
                {"time window length", R(-1, 2)},
                {"local L6 Strichartz", R(-1, 2)},
                {"rank-4 decoupling", R(-1, 4)}},
               R(-21, 4)});

  t.push_back({"local-A", "local balance, wave branch",
               {{"phase reserve", R(-3)},
                {"passage to H^-1", R(-1)},
                {"time window length", R(-1, 2)},
                {"Strichartz + decoupling brick", R(-3, 4)}},
               R(-21, 4)});

  t.push_back({"nullform-local", "null-form local balance",
               {{"local balance unit", R(-21, 4)},
                {"null-form symbol", R(1, 2) + minus_delta}},
               R(-19, 4) + minus_delta,
               true});

  t.push_back({"coronal-global", "coronal global exponent",
               {{"coronal local unit", R(-19, 4) + minus_delta},
                {"angular tiles", R(2)},
                {"time windows", R(1, 2)},
                {"commutator d/dt chi_j", R(1, 2)}},
               R(-7, 4) + minus_delta,
               true});

  t.push_back({"global-A", "global exponent, wave branch",
               {{"local balance unit", R(-21, 4)},
                {"angular patching", R(1)},
                {"time windows", R(1, 2)}},
               R(-15, 4)});

  t.push_back({"heat-local", "heat-line local balance",
               {{"six-fold IBP (phase)", R(-3)},
                {"rank-4 static decoupling", R(-1, 4)},
                {"heat local L6", R(1, 12)}},
               R(-19, 6)});

  t.push_back({"local-B", "local balance, heat branch",
               {{"phase reserve", R(-3)},
                {"heat L6 x static decoupling", R(-1, 6)}},
               R(-19, 6)});

  t.push_back({"global-B", "global exponent, heat branch",
               {{"heat local unit", R(-19, 6)},
                {"angular patching", R(1)},
                {"global time accounting", R(1, 12)}},
               R(-25, 12)});
  return t;
}

}  // namespace

const std::vector<BalanceTable>& canonical_tables() {
  static const std::vector<BalanceTable> catalog = build_catalog();
  return catalog;
}

const BalanceTable& canonical_table(const std::string& name) {
  for (const auto& t : canonical_tables())
    if (t.name == name) return t;
  throw std::out_of_range("no table named '" + name + "'");
}

Rational logfree_margin(const ExponentExpr& expr, const DeltaParam& delta) {
  return -expr.eval(delta) - 1;
}

std::vector<TableCheck> verify_tables(const std::vector<BalanceTable>& tables,
                                      const std::vector<Rational>& probe_deltas) {
  std::vector<TableCheck> out;
  for (const auto& table : tables) {
    TableCheck c;
    c.name = table.name;
    c.anchor = table.anchor;
    c.computed = table.total();
    c.expected = table.expected_total;
    c.exact = c.computed == c.expected;
    c.coronal = table.coronal;
    c.pass = c.exact;
    for (const auto& d : probe_deltas) {
      if (!table.active_at(d)) {
        c.margins.emplace_back(d, std::nullopt);
        continue;
      }
      Rational m = logfree_margin(c.computed, DeltaParam(d));
      if (m <= 0) c.pass = false;
      c.margins.emplace_back(d, m);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TableCheck> verify_canonical_tables(const std::vector<Rational>& probe_deltas) {
  return verify_tables(canonical_tables(), probe_deltas);
}

DyadicSum dyadic_tail_sum(const Rational& alpha, long k0, long k_max) {
  if (alpha <= 0)
    throw std::domain_error("dyadic sum diverges for alpha = " + rational_to_string(alpha));
  const double a = rational_to_double(alpha);
  DyadicSum s;
  s.tail_bound = std::exp2(-a * static_cast<double>(k0)) / (1.0 - std::exp2(-a));
  for (long k = k0; k <= k_max; ++k) {
    s.partial += std::exp2(-a * static_cast<double>(k));
    s.partials.push_back(s.partial);
  }
  return s;
}

}  // namespace nslab
