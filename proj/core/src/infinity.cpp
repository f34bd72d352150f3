#include "birkhoff/infinity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace birkhoff {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// DP over (state, low-symbol count) counting admissible length-L words with
// first/last symbol low and at most `cap` low symbols. Runs either in exact
// unsigned __int128 or in scaled doubles (log result), selected by Acc.
template <typename Acc>
std::pair<Acc, double> zn_dp(const FiniteSubshift& s, const std::vector<Symbol>& labels,
                             int M, int q, int n) {
  const int L = n + 2;
  const int cap = L / M;
  const int k = s.k;
  auto low = [&](int local) { return labels[local] <= q; };

  std::vector<Acc> dp(static_cast<std::size_t>(k) * (cap + 1), Acc(0));
  double logscale = 0.0;
  for (int i = 0; i < k; ++i)
    if (low(i) && 1 <= cap) dp[static_cast<std::size_t>(i) * (cap + 1) + 1] = Acc(1);
  std::vector<Acc> nd(dp.size());
  for (int pos = 2; pos <= L; ++pos) {
    std::fill(nd.begin(), nd.end(), Acc(0));
    for (int i = 0; i < k; ++i)
      for (int c = 0; c <= cap; ++c) {
        const Acc v = dp[static_cast<std::size_t>(i) * (cap + 1) + c];
        if (v == Acc(0)) continue;
        for (int j = 0; j < k; ++j) {
          if (!s.allows(i + 1, j + 1)) continue;
          const int nc = c + (low(j) ? 1 : 0);
          if (nc > cap) continue;
          if (pos == L && !low(j)) continue;
          Acc& slot = nd[static_cast<std::size_t>(j) * (cap + 1) + nc];
          if constexpr (std::is_same_v<Acc, unsigned __int128>) {
            const Acc before = slot;
            slot += v;
            if (slot < before) throw std::overflow_error("z_n count overflow");
          } else {
            slot += v;
          }
        }
      }
    dp.swap(nd);
    if constexpr (std::is_same_v<Acc, double>) {
      const double m = *std::max_element(dp.begin(), dp.end());
      if (m > 0.0 && (m > 1e280 || m < 1e-280)) {
        for (auto& x : dp) x /= m;
        logscale += std::log(m);
      }
    }
  }
  Acc total(0);
  for (const Acc& v : dp) {
    if constexpr (std::is_same_v<Acc, unsigned __int128>) {
      const Acc before = total;
      total += v;
      if (total < before) throw std::overflow_error("z_n count overflow");
    } else {
      total += v;
    }
  }
  return {total, logscale};
}

}  // namespace

std::uint64_t z_n_count(const MapSystem& map, int K, int M, int q, int n) {
  if (n < 1 || M < 1 || q < 1 || q > K) throw std::invalid_argument("z_n_count: bad arguments");
  const Truncation tr = map.derive_truncation(K);
  auto [total, ls] = zn_dp<unsigned __int128>(tr.shift, tr.labels, M, q, n);
  (void)ls;
  if (total > static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("z_n_count: result exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

DeltaInfTable delta_inf_counting(const MapSystem& map, int K, std::vector<int> M_list,
                                 std::vector<int> q_list, int n_max, int window) {
  if (M_list.empty() || q_list.empty())
    throw std::invalid_argument("delta_inf_counting: M and q lists must be nonempty");
  std::sort(M_list.begin(), M_list.end());
  std::sort(q_list.begin(), q_list.end());
  if (window <= 0) window = (n_max - 1) / 2 + 1;  // last ceil(n_max/2) values

  const Truncation tr = map.derive_truncation(K);
  DeltaInfTable table;
  table.K = K;
  table.n_max = n_max;
  table.window = window;
  table.Ms = M_list;
  table.qs = q_list;
  table.flags.push_back("K-truncated estimate");
  table.estimate.assign(M_list.size(), std::vector<double>(q_list.size(), kNegInf));

  for (std::size_t mi = 0; mi < M_list.size(); ++mi)
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
      double best = kNegInf;
      const int lo_n = std::max(2, n_max - window + 1);
      for (int n = lo_n; n <= n_max; ++n) {
        auto [total, ls] = zn_dp<double>(tr.shift, tr.labels, M_list[mi], q_list[qi], n);
        if (total > 0.0) best = std::max(best, (std::log(total) + ls) / n);
      }
      table.estimate[mi][qi] = best;
    }
  table.corner = table.estimate.back().back();
  table.corner_empty = !std::isfinite(table.corner);
  if (table.corner_empty) table.flags.push_back("corner empty: all counts zero");
  return table;
}

EscapeCertificate delta_inf_lower_bound(const MapSystem& map, const MarkovMeasure& base,
                                        std::vector<int> offsets, int depth,
                                        int low_symbol_bound) {
  if (offsets.empty()) throw std::invalid_argument("delta_inf_lower_bound: offsets required");
  if (!base.subshift)
    throw std::invalid_argument("delta_inf_lower_bound: base measure needs its subshift");
  std::sort(offsets.begin(), offsets.end());

  // every support edge must stay admissible under translation
  for (int off : offsets) {
    if (off == 0) continue;
    for (int i = 0; i < base.k; ++i)
      for (auto [j, p] : base.rows[i]) {
        if (p <= 0.0) continue;
        const Symbol a = base.labels[i] + off, b = base.labels[j] + off;
        if (map.branch_count() && (a > *map.branch_count() || b > *map.branch_count())) {
          std::ostringstream os;
          os << "translation by " << off << " leaves the branch family (edge "
             << base.labels[i] << "->" << base.labels[j] << ")";
          throw std::runtime_error(os.str());
        }
        if (!map.rule().allows(a, b)) {
          std::ostringstream os;
          os << "translation by " << off << " is not admissible for this family (edge "
             << a << "->" << b << ")";
          throw std::runtime_error(os.str());
        }
      }
  }

  EscapeCertificate cert;
  cert.base = base;
  cert.offsets = offsets;
  cert.h = entropy(base);
  cert.depth = depth;
  cert.low_symbol_bound = low_symbol_bound;
  cert.degenerate = offsets.size() == 1 && offsets[0] == 0;

  // low cylinders in original symbols, admissible for the map's rule
  std::vector<Word> low_words;
  Word w;
  std::function<void(int)> rec = [&](int len) {
    if (len == depth) {
      low_words.push_back(w);
      return;
    }
    for (Symbol s = 1; s <= low_symbol_bound; ++s) {
      if (!w.empty() && !map.rule().allows(w.back(), s)) continue;
      w.push_back(s);
      rec(len + 1);
      w.pop_back();
    }
  };
  rec(0);

  // local index of an original symbol in the base truncation
  auto local_of = [&](Symbol orig) -> int {
    for (std::size_t i = 0; i < base.labels.size(); ++i)
      if (base.labels[i] == orig) return static_cast<int>(i) + 1;
    return -1;
  };

  for (int off : offsets) {
    double worst = 0.0;
    Word shifted(depth);
    for (const Word& lw : low_words) {
      bool ok = true;
      for (int i = 0; i < depth && ok; ++i) {
        const Symbol s = lw[i] - off;  // nu_off([w]) = nu([w - off])
        if (s < 1) {
          ok = false;
          break;
        }
        const int loc = local_of(s);
        if (loc < 0) {
          ok = false;
          break;
        }
        shifted[i] = loc;
      }
      if (ok) worst = std::max(worst, base.cylinder_mass(shifted));
    }
    cert.max_low_cylinder_mass.push_back(worst);
  }

  if (cert.degenerate) {
    cert.decay_ok = false;
    cert.flags.push_back("degenerate certificate: single zero offset, decay check skipped");
  } else {
    bool mono = true;
    for (std::size_t i = 0; i + 1 < cert.max_low_cylinder_mass.size(); ++i)
      mono = mono && cert.max_low_cylinder_mass[i + 1] <= cert.max_low_cylinder_mass[i] + 1e-12;
    cert.decay_ok = mono && cert.max_low_cylinder_mass.back() <= 1e-6;
  }
  return cert;
}

}  // namespace birkhoff
