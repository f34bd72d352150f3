#include "birkhoff/shift.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace birkhoff {

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  os << ')';
  return os.str();
}

TransitionRule TransitionRule::full_shift() {
  TransitionRule r;
  r.pred_ = [](Symbol, Symbol) { return true; };
  return r;
}

TransitionRule TransitionRule::from_matrix(int k, std::vector<std::uint8_t> entries) {
  if (k <= 0 || entries.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("TransitionRule: matrix must be square k*k");
  TransitionRule r;
  auto m = std::make_shared<std::vector<std::uint8_t>>(std::move(entries));
  r.pred_ = [m, k](Symbol i, Symbol j) {
    if (i < 1 || j < 1 || i > k || j > k) return false;
    return (*m)[static_cast<std::size_t>(i - 1) * k + (j - 1)] != 0;
  };
  r.limit_ = k;
  return r;
}

TransitionRule TransitionRule::from_predicate(std::function<bool(Symbol, Symbol)> p) {
  TransitionRule r;
  r.pred_ = std::move(p);
  return r;
}

bool TransitionRule::allows(Symbol i, Symbol j) const {
  if (i < 1 || j < 1) throw std::invalid_argument("symbols are 1-based");
  return pred_(i, j);
}

bool FiniteSubshift::word_admissible(std::span<const Symbol> w) const {
  for (auto s : w)
    if (s < 1 || s > k) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!allows(w[i], w[i + 1])) return false;
  return !w.empty();
}

std::size_t FiniteSubshift::edge_count() const {
  return static_cast<std::size_t>(std::count(a.begin(), a.end(), std::uint8_t{1}));
}

FiniteSubshift full_subshift(int k) {
  FiniteSubshift s;
  s.k = k;
  s.a.assign(static_cast<std::size_t>(k) * k, 1);
  return s;
}

Truncation truncate(const TransitionRule& rule, int k) {
  if (k < 1) throw std::invalid_argument("truncate: k >= 1 required");
  std::vector<Symbol> labels(k);
  std::iota(labels.begin(), labels.end(), 1);
  std::vector<std::uint8_t> m(static_cast<std::size_t>(k) * k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      m[static_cast<std::size_t>(i - 1) * k + (j - 1)] = rule.allows(i, j) ? 1 : 0;

  // Prune rows/columns with no 1 until fixpoint, keeping the label map.
  int n = k;
  bool changed = true;
  while (changed && n > 0) {
    changed = false;
    std::vector<char> keep(n, 1);
    for (int i = 0; i < n; ++i) {
      bool row = false, col = false;
      for (int j = 0; j < n; ++j) {
        row = row || m[static_cast<std::size_t>(i) * n + j];
        col = col || m[static_cast<std::size_t>(j) * n + i];
      }
      if (!row || !col) {
        keep[i] = 0;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Symbol> nl;
    std::vector<int> pos;
    for (int i = 0; i < n; ++i)
      if (keep[i]) {
        pos.push_back(i);
        nl.push_back(labels[i]);
      }
    const int nn = static_cast<int>(pos.size());
    std::vector<std::uint8_t> nm(static_cast<std::size_t>(nn) * nn);
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j)
        nm[static_cast<std::size_t>(i) * nn + j] =
            m[static_cast<std::size_t>(pos[i]) * n + pos[j]];
    m = std::move(nm);
    labels = std::move(nl);
    n = nn;
  }
  if (n == 0) throw std::runtime_error("truncation too small: all symbols pruned");
  return Truncation{FiniteSubshift{n, std::move(m)}, std::move(labels)};
}

namespace {

// Depth-first lexicographic enumeration; `closing` filters the last symbol.
void enumerate_rec(const FiniteSubshift& s, int n, Word& w,
                   const std::function<bool(Symbol)>& closing,
                   std::vector<Word>& out) {
  if (static_cast<int>(w.size()) == n) {
    if (!closing || closing(w.back())) out.push_back(w);
    return;
  }
  const Symbol prev = w.back();
  for (Symbol j = 1; j <= s.k; ++j) {
    if (!s.allows(prev, j)) continue;
    w.push_back(j);
    enumerate_rec(s, n, w, closing, out);
    w.pop_back();
  }
}

}  // namespace

std::vector<Word> enumerate_words(const FiniteSubshift& s, int n) {
  if (n < 1) throw std::invalid_argument("enumerate_words: n >= 1");
  std::vector<Word> out;
  Word w;
  for (Symbol first = 1; first <= s.k; ++first) {
    w.assign(1, first);
    if (n == 1) {
      out.push_back(w);
      continue;
    }
    enumerate_rec(s, n, w, nullptr, out);
  }
  return out;
}

std::vector<Word> enumerate_periodic(const FiniteSubshift& s, int n, Symbol a) {
  if (a < 1 || a > s.k) throw std::invalid_argument("enumerate_periodic: symbol out of range");
  std::vector<Word> out;
  Word w{a};
  auto close = [&](Symbol last) { return s.allows(last, a); };
  if (n == 1) {
    if (close(a)) out.push_back(w);
    return out;
  }
  enumerate_rec(s, n, w, close, out);
  return out;
}

namespace {

// Boolean matrix square. Positivity of A^m is monotone in m once every row
// and column has a 1, so doubling suffices for the primitivity check.
std::vector<std::uint8_t> bool_square(const std::vector<std::uint8_t>& m, int k) {
  std::vector<std::uint8_t> r(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    const auto* row = &m[static_cast<std::size_t>(i) * k];
    auto* out = &r[static_cast<std::size_t>(i) * k];
    for (int l = 0; l < k; ++l) {
      if (!row[l]) continue;
      const auto* rl = &m[static_cast<std::size_t>(l) * k];
      for (int j = 0; j < k; ++j) out[j] |= rl[j];
    }
  }
  return r;
}

bool all_positive(const std::vector<std::uint8_t>& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace

bool is_mixing(const FiniteSubshift& s) {
  const long long bound = static_cast<long long>(s.k - 1) * (s.k - 1) + 1;
  std::vector<std::uint8_t> p = s.a;
  long long e = 1;
  while (e < 2 * bound) {
    if (all_positive(p)) return true;
    p = bool_square(p, s.k);
    e *= 2;
  }
  return all_positive(p);
}

bool is_irreducible(const FiniteSubshift& s) {
  // reachability closure: (I + A)^k via doubling
  std::vector<std::uint8_t> p = s.a;
  for (int i = 0; i < s.k; ++i) p[static_cast<std::size_t>(i) * s.k + i] = 1;
  long long e = 1;
  while (e < static_cast<long long>(s.k)) {
    p = bool_square(p, s.k);
    e *= 2;
  }
  return all_positive(p);
}

std::uint64_t count_loops(const FiniteSubshift& s, int n, Symbol a) {
  if (n < 1 || a < 1 || a > s.k) throw std::invalid_argument("count_loops: bad arguments");
  const int k = s.k;
  std::vector<std::uint64_t> v(k, 0);
  v[a - 1] = 1;
  auto checked_add = [](std::uint64_t x, std::uint64_t y) {
    if (x > std::numeric_limits<std::uint64_t>::max() - y)
      throw std::overflow_error("count_loops: overflow");
    return x + y;
  };
  for (int step = 0; step < n - 1; ++step) {
    std::vector<std::uint64_t> w(k, 0);
    for (int i = 0; i < k; ++i) {
      if (!v[i]) continue;
      for (int j = 0; j < k; ++j)
        if (s.a[static_cast<std::size_t>(i) * k + j]) w[j] = checked_add(w[j], v[i]);
    }
    v = std::move(w);
  }
  std::uint64_t total = 0;
  for (int j = 0; j < k; ++j)
    if (v[j] && s.allows(j + 1, a)) total = checked_add(total, v[j]);
  return total;
}

FiniteSubshift BlockShift::to_subshift() const {
  const int n = count();
  FiniteSubshift s;
  s.k = n;
  s.a.assign(static_cast<std::size_t>(n) * n, 0);
  for (int b = 0; b < n; ++b)
    for (int c = successors[b].first; c < successors[b].second; ++c)
      s.a[static_cast<std::size_t>(b) * n + c] = 1;
  return s;
}

BlockShift block_recode(const FiniteSubshift& s, int m) {
  if (m < 2) throw std::invalid_argument("block_recode: m >= 2 (use the base shift for m = 1)");
  BlockShift b;
  b.order = m;
  b.words = enumerate_words(s, m);
  const int n = b.count();
  b.successors.resize(n);
  // Blocks sharing the (m-1)-prefix w2..wm form a contiguous lexicographic
  // range; the overlap alone guarantees admissibility of the joined word.
  auto first_with_prefix_ge = [&](const Word& prefix) {
    return static_cast<int>(std::lower_bound(b.words.begin(), b.words.end(), prefix,
                                             [](const Word& w, const Word& p) {
                                               return std::lexicographical_compare(
                                                   w.begin(), w.end(), p.begin(), p.end());
                                             }) -
                            b.words.begin());
  };
  for (int i = 0; i < n; ++i) {
    Word suffix(b.words[i].begin() + 1, b.words[i].end());
    const int lo = first_with_prefix_ge(suffix);
    Word next = suffix;
    ++next.back();
    const int hi = first_with_prefix_ge(next);
    b.successors[i] = {lo, hi};
  }
  return b;
}

}  // namespace birkhoff
