#include "birkhoff/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace birkhoff {

namespace {

constexpr double kStationaryTol = 1e-12;
constexpr long kStationaryCap = 1000000;

void check_rows(const StochasticRows& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    int prev = -1;
    for (auto [j, p] : rows[i]) {
      if (j <= prev || j >= static_cast<int>(rows.size()))
        throw std::invalid_argument("markov: malformed sparse row");
      if (p < 0.0) throw std::invalid_argument("markov: negative transition probability");
      prev = j;
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "markov: row " << (i + 1) << " sums to " << s;
      throw std::invalid_argument(os.str());
    }
  }
}

// Tarjan strongly connected components on the support digraph.
std::vector<int> scc_ids(const StochasticRows& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> ids(n, -1), low(n, 0), idx(n, -1), stk;
  std::vector<char> on(n, 0);
  int counter = 0, comp = 0;
  // iterative Tarjan
  struct Frame { int v; std::size_t ei; };
  for (int root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei < rows[v].size()) {
        const int w = rows[v][ei].first;
        ++ei;
        if (rows[v][ei - 1].second <= 0.0) continue;
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      } else {
        if (low[v] == idx[v]) {
          while (true) {
            const int w = stk.back();
            stk.pop_back();
            on[w] = 0;
            ids[w] = comp;
            if (w == v) break;
          }
          ++comp;
        }
        const int child = v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[child]);
      }
    }
  }
  return ids;
}

}  // namespace

double MarkovMeasure::transition(int i, int j) const {
  const auto& r = rows[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const std::pair<int, double>& e, int col) { return e.first < col; });
  return (it != r.end() && it->first == j) ? it->second : 0.0;
}

double MarkovMeasure::cylinder_mass(std::span<const Symbol> w) const {
  if (w.empty()) return 1.0;
  double mass = pi[w[0] - 1];
  for (std::size_t i = 0; i + 1 < w.size() && mass > 0.0; ++i)
    mass *= transition(w[i] - 1, w[i + 1] - 1);
  return mass;
}

std::vector<double> stationary_distribution(const StochasticRows& rows) {
  check_rows(rows);
  const int n = static_cast<int>(rows.size());
  // irreducibility on the support; name a closed proper subclass otherwise
  const auto ids = scc_ids(rows);
  const int ncomp = 1 + *std::max_element(ids.begin(), ids.end());
  if (ncomp > 1) {
    std::vector<char> closed(ncomp, 1);
    for (int i = 0; i < n; ++i)
      for (auto [j, p] : rows[i])
        if (p > 0.0 && ids[j] != ids[i]) closed[ids[i]] = 0;
    int pick = -1;
    for (int c = 0; c < ncomp && pick < 0; ++c)
      if (closed[c]) pick = c;
    std::ostringstream os;
    os << "stationary_distribution: reducible chain; closed proper subclass {";
    bool first = true;
    for (int i = 0; i < n; ++i)
      if (ids[i] == pick) {
        if (!first) os << ',';
        os << (i + 1);
        first = false;
      }
    os << "}";
    throw std::runtime_error(os.str());
  }

  std::vector<double> pi(n, 1.0 / n), next(n, 0.0);
  for (long it = 0; it < kStationaryCap; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (auto [j, p] : rows[i]) next[j] += pi[i] * p;
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += std::abs(next[i] - pi[i]);
    if (res <= kStationaryTol) {
      pi.swap(next);
      const double s = std::accumulate(pi.begin(), pi.end(), 0.0);
      for (auto& v : pi) v /= s;
      return pi;
    }
    // lazy averaging keeps the same stationary vector but kills periodicity
    for (int i = 0; i < n; ++i) pi[i] = 0.5 * (pi[i] + next[i]);
  }
  throw std::runtime_error("stationary_distribution: power iteration did not converge");
}

MarkovMeasure make_markov(std::shared_ptr<const FiniteSubshift> s, StochasticRows rows,
                          std::vector<Symbol> labels) {
  if (!s) throw std::invalid_argument("make_markov: subshift required");
  if (static_cast<int>(rows.size()) != s->k)
    throw std::invalid_argument("make_markov: row count mismatch");
  for (int i = 0; i < s->k; ++i)
    for (auto [j, p] : rows[i])
      if (p > 0.0 && !s->allows(i + 1, j + 1))
        throw std::invalid_argument("make_markov: positive mass on a forbidden edge");
  MarkovMeasure m;
  m.k = s->k;
  m.pi = stationary_distribution(rows);
  m.rows = std::move(rows);
  m.subshift = std::move(s);
  if (labels.empty()) {
    labels.resize(m.k);
    std::iota(labels.begin(), labels.end(), 1);
  }
  m.labels = std::move(labels);
  return m;
}

MarkovMeasure bernoulli_measure(std::vector<double> p) {
  const int k = static_cast<int>(p.size());
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (k == 0 || std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("bernoulli_measure: weights must sum to 1");
  StochasticRows rows(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (p[j] > 0.0) rows[i].push_back({j, p[j]});
  auto shift = std::make_shared<FiniteSubshift>(full_subshift(k));
  MarkovMeasure m;
  m.k = k;
  m.rows = std::move(rows);
  m.pi = std::move(p);
  m.subshift = std::move(shift);
  m.labels.resize(k);
  std::iota(m.labels.begin(), m.labels.end(), 1);
  return m;
}

MarkovMeasure from_edge_weights(std::shared_ptr<const FiniteSubshift> s,
                                const std::vector<double>& edge_mass,
                                std::vector<Symbol> labels) {
  const int k = s->k;
  if (edge_mass.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("from_edge_weights: dense k*k mass expected");
  std::vector<double> out(k, 0.0), in(k, 0.0);
  double total = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double x = edge_mass[static_cast<std::size_t>(i) * k + j];
      if (x < -1e-14) throw std::invalid_argument("from_edge_weights: negative mass");
      if (x > 0.0 && !s->allows(i + 1, j + 1))
        throw std::invalid_argument("from_edge_weights: mass on forbidden edge");
      out[i] += x;
      in[j] += x;
      total += x;
    }
  if (total <= 0.0) throw std::invalid_argument("from_edge_weights: zero measure");
  for (int i = 0; i < k; ++i)
    if (std::abs(out[i] - in[i]) > 1e-9 * std::max(1.0, total))
      throw std::invalid_argument("from_edge_weights: balance equations violated");
  MarkovMeasure m;
  m.k = k;
  m.rows.resize(k);
  m.pi.resize(k);
  for (int i = 0; i < k; ++i) {
    m.pi[i] = out[i] / total;
    if (out[i] <= 0.0) {
      // unvisited state: park it on an arbitrary admissible successor
      for (int j = 0; j < k; ++j)
        if (s->allows(i + 1, j + 1)) {
          m.rows[i].push_back({j, 1.0});
          break;
        }
      continue;
    }
    for (int j = 0; j < k; ++j) {
      const double x = edge_mass[static_cast<std::size_t>(i) * k + j];
      if (x > 0.0) m.rows[i].push_back({j, x / out[i]});
    }
  }
  m.subshift = std::move(s);
  if (labels.empty()) {
    labels.resize(k);
    std::iota(labels.begin(), labels.end(), 1);
  }
  m.labels = std::move(labels);
  return m;
}

MarkovMeasure random_markov(std::shared_ptr<const FiniteSubshift> s, std::mt19937& rng,
                            std::vector<Symbol> labels) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  StochasticRows rows(s->k);
  for (int i = 0; i < s->k; ++i) {
    double sum = 0.0;
    for (int j = 0; j < s->k; ++j)
      if (s->allows(i + 1, j + 1)) {
        const double w = u(rng);
        rows[i].push_back({j, w});
        sum += w;
      }
    for (auto& e : rows[i]) e.second /= sum;
  }
  return make_markov(std::move(s), std::move(rows), std::move(labels));
}

double entropy(const MarkovMeasure& m) {
  double h = 0.0;
  for (int i = 0; i < m.k; ++i)
    for (auto [j, p] : m.rows[i])
      if (p > 0.0) h -= m.pi[i] * p * std::log(p);
  return h;
}

std::pair<double, double> lyapunov(const MarkovMeasure& m, const MapSystem& map, int m_geo) {
  if (!m.subshift) throw std::invalid_argument("lyapunov: measure has no subshift attached");
  if (m_geo < 1) throw std::invalid_argument("lyapunov: order >= 1");
  const auto words = enumerate_words(*m.subshift, m_geo);
  double lo = 0.0, hi = 0.0;
  Word orig;
  for (const Word& w : words) {
    const double mass = m.cylinder_mass(w);
    if (mass <= 0.0) continue;
    orig.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) orig[i] = m.labels[w[i] - 1];
    const auto g = map.cylinder_geometry(orig);
    lo += mass * g.inf_log_deriv;
    hi += mass * g.sup_log_deriv;
  }
  return {lo / m_geo, hi / m_geo};
}

double integrate(const MarkovMeasure& m, const Potential& f) {
  if (!m.subshift) throw std::invalid_argument("integrate: measure has no subshift attached");
  const auto words = enumerate_words(*m.subshift, f.order());
  double acc = 0.0;
  Word orig;
  for (const Word& w : words) {
    const double mass = m.cylinder_mass(w);
    if (mass == 0.0) continue;
    orig.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) orig[i] = m.labels[w[i] - 1];
    acc += mass * f(orig);
  }
  return acc;
}

}  // namespace birkhoff
