#include "birkhoff/maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace birkhoff {

namespace {

// Continued-fraction cylinder of the Gauss map: x = [0; w1, ..., wn + y],
// y in [0,1). Returns continuant pair (q_n, q_{n-1}); the inverse branch is
// a Moebius map with |h'(y)| = 1/(q_n + q_{n-1} y)^2.
std::pair<double, double> continuants(const Word& w) {
  double q0 = 1.0, q1 = 0.0;
  for (Symbol a : w) {
    const double q = a * q0 + q1;
    q1 = q0;
    q0 = q;
  }
  return {q0, q1};
}

std::pair<double, double> gauss_cylinder_interval(const Word& w) {
  double p0 = 0.0, p1 = 1.0, q0 = 1.0, q1 = 0.0;
  for (Symbol a : w) {
    const double p = a * p0 + p1;
    const double q = a * q0 + q1;
    p1 = p0; p0 = p;
    q1 = q0; q0 = q;
  }
  const double x_end = p0 / q0;
  const double x_mid = (p0 + p1) / (q0 + q1);
  return {std::min(x_end, x_mid), std::max(x_end, x_mid)};
}

}  // namespace

MapSystem MapSystem::base_n(int n) {
  if (n < 2) throw std::invalid_argument("base_n: n >= 2 required");
  MapSystem m;
  m.family_ = MapFamily::BaseN;
  m.name_ = "base_" + std::to_string(n);
  m.branch_count_ = n;
  m.rule_ = TransitionRule::from_predicate(
      [n](Symbol i, Symbol j) { return i <= n && j <= n; });
  m.zeta_ = n;
  m.sup_log_deriv_ = std::log(static_cast<double>(n));
  return m;
}

MapSystem MapSystem::gauss() {
  MapSystem m;
  m.family_ = MapFamily::Gauss;
  m.name_ = "gauss";
  m.rule_ = TransitionRule::full_shift();
  m.zeta_ = 1.0;  // |G'(1)| = 1; uniform expansion only from the second branch
  return m;
}

MapSystem MapSystem::f_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("f_lambda: lambda in (0,1) required");
  MapSystem m;
  m.family_ = MapFamily::FLambda;
  m.name_ = "f_lambda";
  m.lambda_ = lambda;
  m.rule_ = TransitionRule::from_predicate(
      [](Symbol i, Symbol j) { return i == 1 || j >= i - 1; });
  m.zeta_ = 1.0 / (1.0 - lambda);
  m.sup_log_deriv_ = -std::log(lambda * (1.0 - lambda));
  return m;
}

MapSystem MapSystem::piecewise_linear(std::vector<Branch> branches) {
  if (branches.empty()) throw std::invalid_argument("piecewise_linear: no branches");
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.index < b.index; });
  double zeta = branches.front().slope;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Branch& b = branches[i];
    if (b.index != static_cast<Symbol>(i + 1))
      throw std::invalid_argument("piecewise_linear: branch indices must be 1..n");
    if (!(b.right > b.left)) throw std::invalid_argument("piecewise_linear: empty interval");
    if (!(b.slope > 1.0))
      throw std::invalid_argument("piecewise_linear: |T'| must exceed 1 on every branch");
    const double img = b.image_right - b.image_left;
    if (std::abs(img - b.slope * (b.right - b.left)) > 1e-9)
      throw std::invalid_argument("piecewise_linear: image length inconsistent with slope");
    zeta = std::min(zeta, b.slope);
  }
  for (std::size_t i = 0; i + 1 < branches.size(); ++i) {
    // intervals sorted by index need not be ordered in [0,1]; check pairwise
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      const Branch &a = branches[i], &b = branches[j];
      if (std::max(a.left, b.left) < std::min(a.right, b.right) - 1e-12)
        throw std::invalid_argument("piecewise_linear: branch intervals overlap");
    }
  }
  MapSystem m;
  m.family_ = MapFamily::PiecewiseLinear;
  m.name_ = "piecewise_linear";
  m.branch_count_ = static_cast<int>(branches.size());
  m.zeta_ = zeta;
  double sup = 0.0;
  for (const Branch& b : branches) sup = std::max(sup, std::log(b.slope));
  m.sup_log_deriv_ = sup;
  m.branches_ = std::move(branches);
  // rule is established by exact interval containment; reject non-Markov
  // layouts lazily in derive_transitions with the offending pair named.
  auto br = m.branches_;
  m.rule_ = TransitionRule::from_predicate([br](Symbol i, Symbol j) {
    const int n = static_cast<int>(br.size());
    if (i > n || j > n) return false;
    const Branch &bi = br[i - 1], &bj = br[j - 1];
    const double lo = std::max(bi.image_left, bj.left);
    const double hi = std::min(bi.image_right, bj.right);
    if (hi - lo <= 1e-12) return false;
    if (bi.image_left <= bj.left + 1e-12 && bj.right <= bi.image_right + 1e-12) return true;
    std::ostringstream os;
    os << "piecewise_linear is not Markov: image of branch " << i
       << " meets branch " << j << " in a proper nonempty part";
    throw std::runtime_error(os.str());
  });
  return m;
}

double MapSystem::branch_inf_log_deriv(Symbol i) const {
  if (i < 1) throw std::invalid_argument("branch index must be positive");
  switch (family_) {
    case MapFamily::BaseN:
      if (i > *branch_count_) throw std::invalid_argument("branch index out of range");
      return *sup_log_deriv_;
    case MapFamily::Gauss:
      return 2.0 * std::log(static_cast<double>(i));  // at the right endpoint 1/i
    case MapFamily::FLambda:
      return i == 1 ? std::log(1.0 / (1.0 - lambda_)) : -std::log(lambda_ * (1.0 - lambda_));
    case MapFamily::PiecewiseLinear:
      return std::log(branch_at(i).slope);
  }
  return 0.0;
}

double MapSystem::branch_sup_log_deriv(Symbol i) const {
  if (family_ == MapFamily::Gauss) return 2.0 * std::log(static_cast<double>(i) + 1.0);
  return branch_inf_log_deriv(i);
}

double MapSystem::branch_image_diameter(Symbol i) const {
  switch (family_) {
    case MapFamily::BaseN:
    case MapFamily::Gauss:
      return 1.0;
    case MapFamily::FLambda:
      return i == 1 ? 1.0 : std::pow(lambda_, i - 2);
    case MapFamily::PiecewiseLinear:
      return branch_at(i).image_right - branch_at(i).image_left;
  }
  return 1.0;
}

const Branch& MapSystem::branch_at(Symbol i) const {
  if (i < 1 || i > static_cast<Symbol>(branches_.size()))
    throw std::invalid_argument("branch index out of range");
  return branches_[i - 1];
}

FiniteSubshift MapSystem::derive_transitions(int k) const {
  return derive_truncation(k).shift;
}

Truncation MapSystem::derive_truncation(int k) const {
  // symbols beyond the branch count have all-zero rows/columns and fall to
  // the pruning pass (e.g. base_3 probed at k=5 comes back as a 3x3 block)
  return truncate(rule_, k);
}

CylinderGeometry MapSystem::cylinder_geometry(const Word& w) const {
  if (w.empty()) throw std::invalid_argument("cylinder_geometry: empty word");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 1 || (branch_count_ && w[i] > *branch_count_))
      throw std::invalid_argument("cylinder_geometry: word not admissible (symbol range)");
    if (i + 1 < w.size() && !rule_.allows(w[i], w[i + 1]))
      throw std::invalid_argument("cylinder_geometry: word not admissible at " +
                                  word_to_string(w));
  }
  CylinderGeometry g;
  g.word = w;
  const int n = static_cast<int>(w.size());
  if (family_ == MapFamily::Gauss) {
    const auto [qn, qn1] = continuants(w);
    g.inf_log_deriv = 2.0 * std::log(qn);
    g.sup_log_deriv = 2.0 * std::log(qn + qn1);
  } else {
    double sum = 0.0;
    for (Symbol s : w) sum += branch_inf_log_deriv(s);
    g.inf_log_deriv = g.sup_log_deriv = sum;
  }
  const double image = branch_image_diameter(w[n - 1]);
  g.diam_lower = image * std::exp(-g.sup_log_deriv);
  g.diam_upper = image * std::exp(-g.inf_log_deriv);
  return g;
}

std::pair<double, double> MapSystem::log_deriv_range(const Word& w) const {
  if (w.empty()) throw std::invalid_argument("log_deriv_range: empty word");
  if (family_ != MapFamily::Gauss) {
    const double v = branch_inf_log_deriv(w.front());
    return {v, v};
  }
  if (w.size() == 1)
    return {branch_inf_log_deriv(w.front()), branch_sup_log_deriv(w.front())};
  const auto [xmin, xmax] = gauss_cylinder_interval(w);
  return {-2.0 * std::log(xmax), -2.0 * std::log(xmin)};
}

}  // namespace birkhoff
