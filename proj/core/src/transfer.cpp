#include "birkhoff/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace birkhoff {

namespace {

constexpr long kPerronCap = 2000000;

// One-sided power iteration on W + shift*I. Returns (root of W, vector).
std::pair<double, std::vector<double>> power_iterate(
    int k, const std::function<void(const double*, double*)>& apply, double shift,
    double tol, long& iters, double& res_out, const std::vector<double>* v0 = nullptr) {
  std::vector<double> v(k, 1.0 / k), w(k, 0.0);
  if (v0 && static_cast<int>(v0->size()) == k) {
    double s = 0.0;
    for (double x : *v0) s += std::abs(x);
    if (s > 0.0)
      for (int i = 0; i < k; ++i) v[i] = std::abs((*v0)[i]) / s;
  }
  double root = 0.0;
  for (long it = 0; it < kPerronCap; ++it) {
    apply(v.data(), w.data());
    for (int i = 0; i < k; ++i) w[i] += shift * v[i];
    const double nw = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(nw > 0.0)) throw std::runtime_error("perron: operator annihilated the cone");
    double res = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] /= nw;
      res += std::abs(w[i] - v[i]);
    }
    v.swap(w);
    root = nw;
    if (res <= tol) {
      iters = it + 1;
      res_out = res;
      return {root - shift, v};
    }
  }
  throw std::runtime_error("perron: power iteration did not converge");
}

}  // namespace

PerronData perron(const FiniteSubshift& s, const std::vector<double>& logw, double tol,
                  const PerronData* warm) {
  const int k = s.k;
  if (logw.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("perron: dense k*k log-weights expected");
  double gmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (s.a[static_cast<std::size_t>(i) * k + j])
        gmax = std::max(gmax, logw[static_cast<std::size_t>(i) * k + j]);
  std::vector<double> W(static_cast<std::size_t>(k) * k, 0.0);
  double max_row = 0.0;
  for (int i = 0; i < k; ++i) {
    double rs = 0.0;
    for (int j = 0; j < k; ++j) {
      const std::size_t e = static_cast<std::size_t>(i) * k + j;
      if (s.a[e]) {
        W[e] = std::exp(logw[e] - gmax);
        rs += W[e];
      }
    }
    max_row = std::max(max_row, rs);
  }
  const double shift = max_row / 1024.0;

  auto apply = [&](const double* x, double* y) {
    for (int i = 0; i < k; ++i) {
      const double* row = &W[static_cast<std::size_t>(i) * k];
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
  };
  auto apply_t = [&](const double* x, double* y) {
    std::fill(y, y + k, 0.0);
    for (int i = 0; i < k; ++i) {
      const double* row = &W[static_cast<std::size_t>(i) * k];
      const double xi = x[i];
      for (int j = 0; j < k; ++j) y[j] += row[j] * xi;
    }
  };

  PerronData out;
  double res_r = 0.0, res_l = 0.0;
  long it_r = 0, it_l = 0;
  auto [root, v] = power_iterate(k, apply, shift, tol, it_r, res_r,
                                 warm ? &warm->right : nullptr);
  auto [root2, u] = power_iterate(k, apply_t, shift, tol, it_l, res_l,
                                  warm ? &warm->left : nullptr);
  (void)root2;
  out.log_root = std::log(root) + gmax;
  out.right = std::move(v);
  out.left = std::move(u);
  double dot = 0.0;
  for (int i = 0; i < k; ++i) dot += out.left[i] * out.right[i];
  for (auto& x : out.left) x /= dot;
  out.iterations = it_r + it_l;
  out.residual = std::max(res_r, res_l);
  return out;
}

PerronData perron_unweighted(const FiniteSubshift& s, double tol) {
  std::vector<double> logw(static_cast<std::size_t>(s.k) * s.k, 0.0);
  return perron(s, logw, tol);
}

MarkovMeasure gibbs_measure(std::shared_ptr<const FiniteSubshift> s,
                            const std::vector<double>& logw, std::vector<Symbol> labels) {
  const int k = s->k;
  const PerronData pd = perron(*s, logw);
  StochasticRows rows(k);
  for (int i = 0; i < k; ++i) {
    double rs = 0.0;
    for (int j = 0; j < k; ++j) {
      const std::size_t e = static_cast<std::size_t>(i) * k + j;
      if (!s->a[e]) continue;
      const double p = std::exp(logw[e] - pd.log_root) * pd.right[j] / pd.right[i];
      rows[i].push_back({j, p});
      rs += p;
    }
    for (auto& ent : rows[i]) ent.second /= rs;  // absorb iteration roundoff
  }
  MarkovMeasure m;
  m.k = k;
  m.rows = std::move(rows);
  m.pi.resize(k);
  double tot = 0.0;
  for (int i = 0; i < k; ++i) {
    m.pi[i] = pd.left[i] * pd.right[i];
    tot += m.pi[i];
  }
  for (auto& p : m.pi) p /= tot;
  m.subshift = std::move(s);
  if (labels.empty()) {
    labels.resize(k);
    std::iota(labels.begin(), labels.end(), 1);
  }
  m.labels = std::move(labels);
  return m;
}

MarkovMeasure max_entropy_measure(std::shared_ptr<const FiniteSubshift> s,
                                  std::vector<Symbol> labels) {
  std::vector<double> logw(static_cast<std::size_t>(s->k) * s->k, 0.0);
  return gibbs_measure(std::move(s), logw, std::move(labels));
}

double log_perron_ranges(const std::vector<std::pair<int, int>>& successors,
                         const std::function<double(int, int)>& weight,
                         double log_scale, double tol) {
  const int k = static_cast<int>(successors.size());
  // cache per-edge weights when affordable
  std::size_t edges = 0;
  for (auto [lo, hi] : successors) edges += static_cast<std::size_t>(hi - lo);
  std::vector<double> cache;
  const bool cached = edges <= (std::size_t{1} << 24);
  if (cached) {
    cache.reserve(edges);
    for (int b = 0; b < k; ++b)
      for (int c = successors[b].first; c < successors[b].second; ++c)
        cache.push_back(weight(b, c));
  }
  double max_row = 0.0;
  {
    std::size_t e = 0;
    for (int b = 0; b < k; ++b) {
      double rs = 0.0;
      for (int c = successors[b].first; c < successors[b].second; ++c)
        rs += cached ? cache[e++] : weight(b, c);
      max_row = std::max(max_row, rs);
    }
  }
  const double shift = max_row / 1024.0;
  auto apply = [&](const double* x, double* y) {
    std::size_t e = 0;
    for (int b = 0; b < k; ++b) {
      double acc = 0.0;
      for (int c = successors[b].first; c < successors[b].second; ++c)
        acc += (cached ? cache[e++] : weight(b, c)) * x[c];
      y[b] = acc;
    }
  };
  long iters = 0;
  double res = 0.0;
  auto [root, v] = power_iterate(k, apply, shift, tol, iters, res);
  (void)v;
  return std::log(root) + log_scale;
}

}  // namespace birkhoff
