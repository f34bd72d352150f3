#include "birkhoff/potential.hpp"

#include <stdexcept>

namespace birkhoff {

Potential Potential::zero() {
  return Potential(1, [](std::span<const Symbol>) { return 0.0; }, "0", 0);
}

Potential Potential::constant(double c) {
  return Potential(1, [c](std::span<const Symbol>) { return c; },
                   "const(" + std::to_string(c) + ")");
}

Potential Potential::indicator(Symbol i) {
  if (i < 1) throw std::invalid_argument("indicator: symbol must be positive");
  return Potential(1,
                   [i](std::span<const Symbol> w) { return w.front() == i ? 1.0 : 0.0; },
                   "1_{I_" + std::to_string(i) + "}", i);
}

TabulatedPotential tabulate(const Potential& f, const FiniteSubshift& s,
                            const std::vector<Symbol>& labels,
                            const std::vector<Word>& words) {
  if (static_cast<int>(labels.size()) != s.k)
    throw std::invalid_argument("tabulate: label map does not match truncation");
  TabulatedPotential t;
  t.order = f.order();
  t.values.reserve(words.size());
  Word orig;
  for (const Word& w : words) {
    orig.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) orig[i] = labels[w[i] - 1];
    t.values.push_back(f(orig));
  }
  return t;
}

}  // namespace birkhoff
