#include "nslab/numerics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace nslab {

Vec3 any_orthogonal(const Vec3& v) {
  const double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
  Vec3 e = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  return normalized(cross(v, e));
}

double smooth_step_derivative(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double u = s - 1.0, w = 2.0 - s;
  const double a = glue(u), b = glue(w);
  const double da = a / (u * u);
  const double db = -b / (w * w);
  const double den = a + b;
  return (da * b - a * db) / (den * den);
}

double smooth_step_second_derivative(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double u = s - 1.0, w = 2.0 - s;
  const double a = glue(u), b = glue(w);
  const double da = a / (u * u);
  const double db = -b / (w * w);
  const double dda = a * (1.0 - 2.0 * u) / (u * u * u * u);
  const double ddb = b * (1.0 - 2.0 * w) / (w * w * w * w);
  const double den = a + b;
  const double num = da * b - a * db;
  const double dnum = dda * b - a * ddb;
  const double dden = da + db;
  return (dnum * den - 2.0 * num * dden) / (den * den * den);
}

namespace {
double ramp_log(double s) { return smooth_step(s + 2.0); }
}  // namespace

double lp_bump_squared(double r) {
  if (!(r > 0.5) || !(r < 2.0)) return 0.0;
  const double s = std::log2(r);
  return std::max(0.0, ramp_log(s) - ramp_log(s - 1.0));
}

double lp_bump(double r) { return std::sqrt(lp_bump_squared(r)); }

bool is_dyad(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) return false;
  int e = 0;
  const double m = std::frexp(n, &e);
  return m == 0.5;
}

void require_dyad(double n, double min_value, const char* what) {
  if (!is_dyad(n) || n < min_value)
    throw std::invalid_argument(std::string(what) + " must be a power of two >= " +
                                std::to_string(static_cast<long long>(min_value)));
}

namespace {

template <int P>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, P>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
    } else {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
    }
  }
  std::vector<std::size_t> idx(r.nodes.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.nodes[a] < r.nodes[b]; });
  GaussRule out;
  for (auto i : idx) {
    out.nodes.push_back(r.nodes[i]);
    out.weights.push_back(r.weights[i]);
  }
  return out;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static const std::map<int, GaussRule> rules = [] {
    std::map<int, GaussRule> m;
    m[4] = make_rule<4>();
    m[8] = make_rule<8>();
    m[12] = make_rule<12>();
    m[16] = make_rule<16>();
    m[20] = make_rule<20>();
    m[24] = make_rule<24>();
    m[32] = make_rule<32>();
    m[48] = make_rule<48>();
    m[64] = make_rule<64>();
    return m;
  }();
  auto it = rules.find(order);
  if (it == rules.end()) throw std::invalid_argument("unsupported Gauss order " + std::to_string(order));
  return it->second;
}

QuadratureGrid composite_grid(std::span<const double> edges, int order) {
  const GaussRule& rule = gauss_rule(order);
  QuadratureGrid g;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      g.nodes.push_back(mid + half * rule.nodes[i]);
      g.weights.push_back(half * rule.weights[i]);
    }
  }
  return g;
}

std::vector<double> uniform_edges(double a, double b, int panels) {
  std::vector<double> e(panels + 1);
  for (int i = 0; i <= panels; ++i) e[i] = a + (b - a) * i / panels;
  e[panels] = b;
  return e;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_slope needs >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace nslab
