#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "birkhoff/shift.hpp"

namespace birkhoff {

// Locally constant function of finite order m on a shift: its value depends
// only on the first m symbols of a point. Words are given in ORIGINAL symbol
// labels; truncation-local evaluation goes through a label map.
class Potential {
 public:
  Potential() = default;
  Potential(int order, std::function<double(std::span<const Symbol>)> eval,
            std::string name = "", std::optional<Symbol> support_bound = std::nullopt)
      : order_(order), eval_(std::move(eval)), name_(std::move(name)),
        support_bound_(support_bound) {}

  int order() const { return order_; }
  const std::string& name() const { return name_; }

  // Largest first-symbol with a nonzero value, when known. A finite bound
  // certifies the C_0 "symbolically vanishes at infinity" condition used by
  // the sub-probability spectrum formulas.
  std::optional<Symbol> support_bound() const { return support_bound_; }

  double operator()(std::span<const Symbol> w) const { return eval_(w); }
  double operator()(const Word& w) const { return eval_(w); }

  static Potential zero();
  static Potential constant(double c);
  // Value 1 when the first symbol equals i, else 0 (frequency-of-digit data).
  static Potential indicator(Symbol i);

 private:
  int order_ = 1;
  std::function<double(std::span<const Symbol>)> eval_ = [](std::span<const Symbol>) {
    return 0.0;
  };
  std::string name_;
  std::optional<Symbol> support_bound_;
};

// Table of values over exactly the admissible m-words of a truncation,
// aligned with enumerate_words(s, m). `labels` translates local symbols to
// the original ones the potential understands.
struct TabulatedPotential {
  int order = 1;
  std::vector<double> values;  // values[i] for word i in lexicographic order
};

TabulatedPotential tabulate(const Potential& f, const FiniteSubshift& s,
                            const std::vector<Symbol>& labels,
                            const std::vector<Word>& words);

}  // namespace birkhoff
