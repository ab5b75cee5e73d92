#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nslab {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal such as "0.51" into an exact rational.
Rational parse_rational(const std::string& text);
/// "p/q", or "p" when the denominator is one.
std::string rational_to_string(const Rational& r);
double rational_to_double(const Rational& r);

/// Open-closed interval (1/3, 5/8].
class DeltaParam {
 public:
  explicit DeltaParam(Rational value);
  static DeltaParam parse(const std::string& text) { return DeltaParam(parse_rational(text)); }

  const Rational& value() const { return value_; }
  double as_double() const { return rational_to_double(value_); }

  static Rational lower_bound() { return Rational(1, 3); }
  static Rational upper_bound() { return Rational(5, 8); }
  static bool admissible(const Rational& v) { return v > lower_bound() && v <= upper_bound(); }

 private:
  Rational value_;
};

/// Represents N^{const_part + delta_coeff * delta}.
struct ExponentExpr {
  Rational const_part{0};
  Rational delta_coeff{0};

  ExponentExpr() = default;
  ExponentExpr(Rational c, Rational d = 0) : const_part(std::move(c)), delta_coeff(std::move(d)) {}
  static ExponentExpr parse(const std::string& c, const std::string& d = "0") {
    return {parse_rational(c), parse_rational(d)};
  }

  Rational eval(const Rational& delta) const { return const_part + delta_coeff * delta; }
  Rational eval(const DeltaParam& delta) const { return eval(delta.value()); }

  ExponentExpr operator+(const ExponentExpr& o) const {
    return {const_part + o.const_part, delta_coeff + o.delta_coeff};
  }
  ExponentExpr operator-(const ExponentExpr& o) const {
    return {const_part - o.const_part, delta_coeff - o.delta_coeff};
  }
  ExponentExpr& operator+=(const ExponentExpr& o) {
    const_part += o.const_part;
    delta_coeff += o.delta_coeff;
    return *this;
  }
  bool operator==(const ExponentExpr& o) const {
    return const_part == o.const_part && delta_coeff == o.delta_coeff;
  }

  /// e.g. "-19/4-delta", "-7/4", "1/2-delta".
  std::string to_string() const;
};

ExponentExpr combine_exponents(const std::vector<ExponentExpr>& terms);

struct BalanceTerm {
  std::string label;
  ExponentExpr exponent;
};

struct BalanceTable {
  std::string name;
  std::string anchor;
  std::vector<BalanceTerm> terms;
  ExponentExpr expected_total;
  /// Tables built on the narrow corona are only meaningful for delta > 1/2.
  bool coronal = false;

  ExponentExpr total() const;
  bool active_at(const Rational& delta) const { return !coronal || delta > Rational(1, 2); }
  /// Returns a copy with the term labelled `label` replaced (what-if analysis).
  /// Throws std::out_of_range if no such term exists.
  BalanceTable with_term(const std::string& label, const ExponentExpr& replacement) const;
};

/// The eight shipped tables.
const std::vector<BalanceTable>& canonical_tables();
const BalanceTable& canonical_table(const std::string& name);

/// Margin against the log-free threshold -1: returns -eval(expr) - 1.
Rational logfree_margin(const ExponentExpr& expr, const DeltaParam& delta);

struct TableCheck {
  std::string name;
  std::string anchor;
  ExponentExpr computed;
  ExponentExpr expected;
  bool exact = false;
  bool coronal = false;
  /// (delta, margin) at each probed delta; nullopt where the table is inactive.
  std::vector<std::pair<Rational, std::optional<Rational>>> margins;
  bool pass = false;
};

/// Recomputes every table and checks exact totals and positive margins at the
/// probe deltas (defaults 51/100 and 5/8).
std::vector<TableCheck> verify_canonical_tables(
    const std::vector<Rational>& probe_deltas = {Rational(51, 100), Rational(5, 8)});
std::vector<TableCheck> verify_tables(const std::vector<BalanceTable>& tables,
                                      const std::vector<Rational>& probe_deltas);

struct DyadicSum {
  double partial = 0.0;
  double tail_bound = 0.0;
  std::vector<double> partials;  ///< running partial sums, k = k0..k_max
};

/// sum_{k=k0}^{k_max} 2^{-alpha k} and the closed-form full tail 2^{-alpha k0}/(1 - 2^{-alpha}).
/// Throws std::domain_error for alpha <= 0.
DyadicSum dyadic_tail_sum(const Rational& alpha, long k0, long k_max);

}  // namespace nslab
