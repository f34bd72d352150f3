#include "birkhoff/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "birkhoff/transfer.hpp"

namespace birkhoff {

double RoofFunction::scale() const {
  double s = 1.0;
  for (int i = 0; i < order; ++i) s *= base;
  return s;
}

double RoofFunction::integral(const MarkovMeasure& block_measure) const {
  if (block_measure.k != static_cast<int>(words.size()))
    throw std::invalid_argument("roof integral: measure does not live on the m-block alphabet");
  double acc = 0.0;
  for (std::size_t b = 0; b < words.size(); ++b)
    acc += block_measure.pi[b] * static_cast<double>(k_w[b]);
  return acc;
}

int default_roof_base(const MapSystem& map) {
  const double lz = std::log(map.zeta());
  if (lz > 0.5) return 2;
  if (lz > 0.0) return static_cast<int>(std::floor(1.0 / lz)) + 1;
  throw std::runtime_error(
      "no integer roof base works: inf log|T'| vanishes on some branch (e.g. the first "
      "Gauss branch)");
}

RoofFunction build_roof(const MapSystem& map, int m, int k_trunc, int base) {
  if (m < 1 || base < 1) throw std::invalid_argument("build_roof: m >= 1, base >= 1");
  const Truncation tr = map.derive_truncation(k_trunc);
  RoofFunction roof;
  roof.order = m;
  roof.base = base;
  roof.labels = tr.labels;
  roof.words = enumerate_words(tr.shift, m);
  roof.k_w.reserve(roof.words.size());
  const double scale = roof.scale();
  Word orig;
  for (const Word& w : roof.words) {
    orig.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) orig[i] = tr.labels[w[i] - 1];
    const double inf_step = map.log_deriv_range(orig).first;
    const auto k = static_cast<std::int64_t>(std::floor(scale * inf_step));
    if (k < 1) {
      std::ostringstream os;
      os << "build_roof: k_w = 0 on cylinder " << word_to_string(orig)
         << " (inf log|T'| = " << inf_step << "); replace the base " << base;
      try {
        os << " by " << default_roof_base(map);
      } catch (const std::exception&) {
        os << ", but no integer base can work for this family";
      }
      throw std::runtime_error(os.str());
    }
    roof.k_w.push_back(k);
  }
  return roof;
}

std::vector<int> SplitShift::block_successor_list(int block) const {
  std::vector<int> out;
  if (m >= 2) {
    for (int c = block_successors[block].first; c < block_successors[block].second; ++c)
      out.push_back(c);
    return out;
  }
  for (int j = 0; j < parent.k; ++j)
    if (parent.allows(block + 1, j + 1)) out.push_back(j);
  return out;
}

std::int64_t SplitShift::vertex_of(int block, std::int64_t pos) const {
  if (block < 0 || block >= block_count() || pos < 1 || pos > roof.k_w[block])
    throw std::invalid_argument("vertex_of: out of range");
  return chain_start[block] + pos - 1;
}

std::pair<int, std::int64_t> SplitShift::block_of(std::int64_t vertex) const {
  if (vertex < 0 || vertex >= vertex_count) throw std::invalid_argument("block_of: out of range");
  const auto it = std::upper_bound(chain_start.begin(), chain_start.end(), vertex);
  const int b = static_cast<int>(it - chain_start.begin()) - 1;
  return {b, vertex - chain_start[b] + 1};
}

std::vector<std::int64_t> SplitShift::parent_cylinder_to_split(const Word& w) const {
  if (static_cast<int>(w.size()) < m)
    throw std::invalid_argument("parent_cylinder_to_split: word shorter than the block order");
  if (!parent.word_admissible(w))
    throw std::invalid_argument("parent_cylinder_to_split: word not admissible");
  std::vector<std::int64_t> run;
  const int blocks = static_cast<int>(w.size()) - m + 1;
  for (int i = 0; i < blocks; ++i) {
    Word blockw(w.begin() + i, w.begin() + i + m);
    const auto it = std::lower_bound(roof.words.begin(), roof.words.end(), blockw);
    if (it == roof.words.end() || *it != blockw)
      throw std::invalid_argument("parent_cylinder_to_split: block not in the alphabet");
    const int b = static_cast<int>(it - roof.words.begin());
    for (std::int64_t pos = 1; pos <= roof.k_w[b]; ++pos) run.push_back(vertex_of(b, pos));
  }
  return run;
}

Word SplitShift::split_cylinder_to_parent(const std::vector<std::int64_t>& run) const {
  if (run.empty()) throw std::invalid_argument("split_cylinder_to_parent: empty run");
  // verify the run is a split-admissible vertex word
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    const auto [b, pos] = block_of(run[i]);
    if (pos < roof.k_w[b]) {
      if (run[i + 1] != run[i] + 1)
        throw std::invalid_argument("split_cylinder_to_parent: broken chain step");
    } else {
      const auto [c, pos2] = block_of(run[i + 1]);
      if (pos2 != 1) throw std::invalid_argument("split_cylinder_to_parent: must re-enter a head");
      const auto succ = block_successor_list(b);
      if (!std::binary_search(succ.begin(), succ.end(), c))
        throw std::invalid_argument("split_cylinder_to_parent: forbidden chain transition");
    }
  }
  // normalize to whole chains (shift-invariance in front, forced tail behind)
  std::vector<int> blocks;
  blocks.push_back(block_of(run.front()).first);
  for (std::size_t i = 1; i < run.size(); ++i) {
    const auto [b, pos] = block_of(run[i]);
    if (pos == 1) blocks.push_back(b);
  }
  Word parent_word = roof.words[blocks.front()];
  for (std::size_t i = 1; i < blocks.size(); ++i)
    parent_word.push_back(roof.words[blocks[i]].back());
  return parent_word;
}

double SplitShift::log_perron(double tol) const {
  const auto n = static_cast<int>(vertex_count);
  // successor sets: forced inside chains, block heads at chain ends
  std::vector<std::vector<int>> heads(block_count());
  auto apply = [&](const double* x, double* y) {
    for (int b = 0; b < block_count(); ++b) {
      const std::int64_t start = chain_start[b];
      const std::int64_t len = roof.k_w[b];
      for (std::int64_t p = 0; p + 1 < len; ++p) y[start + p] = x[start + p + 1];
      double acc = 0.0;
      for (int c : block_successor_list(b)) acc += x[chain_start[c]];
      y[start + len - 1] = acc;
    }
  };
  // inline power iteration (shift handles the periodic chain structure)
  std::vector<double> v(n, 1.0 / n), w(n, 0.0);
  double shift = 0.0;
  {
    std::size_t max_out = 1;
    for (int b = 0; b < block_count(); ++b)
      max_out = std::max(max_out, block_successor_list(b).size());
    shift = static_cast<double>(max_out) / 1024.0;
  }
  double root = 0.0;
  for (long it = 0; it < 4000000; ++it) {
    apply(v.data(), w.data());
    double nw = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] += shift * v[i];
      nw += w[i];
    }
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] /= nw;
      res += std::abs(w[i] - v[i]);
    }
    v.swap(w);
    root = nw - shift;
    if (res <= tol) return std::log(root);
  }
  throw std::runtime_error("split log_perron: power iteration did not converge");
}

SplitShift build_split_shift(const MapSystem& map, int m, int k_trunc, int base) {
  SplitShift split;
  split.m = m;
  split.base = base;
  split.roof = build_roof(map, m, k_trunc, base);
  const Truncation tr = map.derive_truncation(k_trunc);
  split.parent = tr.shift;
  split.labels = tr.labels;
  if (m >= 2) {
    const BlockShift bs = block_recode(tr.shift, m);
    if (bs.words != split.roof.words)
      throw std::logic_error("build_split_shift: block enumeration mismatch");
    split.block_successors = bs.successors;
  }
  split.chain_start.resize(split.roof.words.size());
  std::int64_t acc = 0;
  for (std::size_t b = 0; b < split.roof.words.size(); ++b) {
    split.chain_start[b] = acc;
    acc += split.roof.k_w[b];
  }
  split.vertex_count = acc;
  return split;
}

MarkovMeasure block_measure_of(const MarkovMeasure& mm, const SplitShift& split) {
  if (split.m == 1) {
    if (mm.k != split.parent.k)
      throw std::invalid_argument("block_measure_of: measure not on the truncation");
    return mm;
  }
  if (!mm.subshift || mm.k != split.parent.k)
    throw std::invalid_argument("block_measure_of: measure not on the truncation");
  const int n = split.block_count();
  MarkovMeasure bm;
  bm.k = n;
  bm.rows.resize(n);
  bm.pi.resize(n);
  for (int b = 0; b < n; ++b) {
    const Word& w = split.roof.words[b];
    bm.pi[b] = mm.cylinder_mass(w);
    for (int c : split.block_successor_list(b)) {
      const Word& w2 = split.roof.words[c];
      const double p = mm.transition(w.back() - 1, w2.back() - 1);
      if (p > 0.0) bm.rows[b].push_back({c, p});
    }
    // rows of states with zero mass may be sub-stochastic on the recode;
    // renormalize so the row is a genuine distribution
    double rs = 0.0;
    for (auto& e : bm.rows[b]) rs += e.second;
    if (rs > 0.0)
      for (auto& e : bm.rows[b]) e.second /= rs;
    else
      bm.rows[b].push_back({split.block_successor_list(b).front(), 1.0});
  }
  bm.labels.resize(n);
  std::iota(bm.labels.begin(), bm.labels.end(), 1);
  return bm;
}

MarkovMeasure push_measure(const MarkovMeasure& block_measure, const SplitShift& split) {
  if (block_measure.k != split.block_count())
    throw std::invalid_argument("push_measure: measure does not live on the m-block alphabet");
  const double tau = split.roof.integral(block_measure);
  const auto n = static_cast<int>(split.vertex_count);
  MarkovMeasure pushed;
  pushed.k = n;
  pushed.rows.resize(n);
  pushed.pi.resize(n);
  for (int b = 0; b < split.block_count(); ++b) {
    const std::int64_t start = split.chain_start[b];
    const std::int64_t len = split.roof.k_w[b];
    const double w = block_measure.pi[b] / tau;
    for (std::int64_t p = 0; p < len; ++p) {
      pushed.pi[start + p] = w;
      if (p + 1 < len) pushed.rows[start + p].push_back({static_cast<int>(start + p + 1), 1.0});
    }
    for (auto [c, prob] : block_measure.rows[b])
      pushed.rows[start + len - 1].push_back({static_cast<int>(split.chain_start[c]), prob});
    std::sort(pushed.rows[start + len - 1].begin(), pushed.rows[start + len - 1].end());
  }
  return pushed;
}

double split_delta_inf_proxy(const SplitShift& split, int M, int q, int n_max) {
  const auto n_states = static_cast<int>(split.vertex_count);
  if (q > n_states) q = n_states;
  double best = -std::numeric_limits<double>::infinity();
  auto successors = [&](int v, std::vector<int>& out) {
    out.clear();
    const auto [b, pos] = split.block_of(v);
    if (pos < split.roof.k_w[b]) {
      out.push_back(v + 1);
    } else {
      for (int c : split.block_successor_list(b))
        out.push_back(static_cast<int>(split.chain_start[c]));
    }
  };
  std::vector<int> succ;
  const int lo_n = std::max(2, n_max / 2);
  for (int n = lo_n; n <= n_max; ++n) {
    const int L = n + 2;
    const int cap = L / M;
    std::vector<double> dp(static_cast<std::size_t>(n_states) * (cap + 1), 0.0);
    double logscale = 0.0;
    for (int v = 0; v < q; ++v)
      if (1 <= cap) dp[static_cast<std::size_t>(v) * (cap + 1) + 1] = 1.0;
    std::vector<double> nd(dp.size());
    for (int pos = 2; pos <= L; ++pos) {
      std::fill(nd.begin(), nd.end(), 0.0);
      for (int v = 0; v < n_states; ++v) {
        bool any = false;
        for (int c = 0; c <= cap; ++c)
          if (dp[static_cast<std::size_t>(v) * (cap + 1) + c] > 0.0) {
            any = true;
            break;
          }
        if (!any) continue;
        successors(v, succ);
        for (int c = 0; c <= cap; ++c) {
          const double val = dp[static_cast<std::size_t>(v) * (cap + 1) + c];
          if (val <= 0.0) continue;
          for (int u : succ) {
            const bool lw = u < q;
            const int nc = c + (lw ? 1 : 0);
            if (nc > cap) continue;
            if (pos == L && !lw) continue;
            nd[static_cast<std::size_t>(u) * (cap + 1) + nc] += val;
          }
        }
      }
      dp.swap(nd);
      const double mx = *std::max_element(dp.begin(), dp.end());
      if (mx > 1e280) {
        for (auto& x : dp) x /= mx;
        logscale += std::log(mx);
      }
    }
    const double total = std::accumulate(dp.begin(), dp.end(), 0.0);
    if (total > 0.0) best = std::max(best, (std::log(total) + logscale) / n);
  }
  return best;
}

}  // namespace birkhoff
