#pragma once

#include <optional>
#include <string>
#include <vector>

#include "birkhoff/potential.hpp"
#include "birkhoff/shift.hpp"

namespace birkhoff {

// One expanding branch T_i : I_i -> [0,1].
struct Branch {
  Symbol index = 1;
  double left = 0.0, right = 1.0;        // branch interval (left, right]
  double image_left = 0.0, image_right = 1.0;
  double slope = 2.0;                    // |T'| for piecewise-linear branches
  bool orientation_preserving = true;
};

enum class MapFamily { BaseN, Gauss, FLambda, PiecewiseLinear };

// Derivative data for a cylinder: inf/sup of the Birkhoff sum of log|T'|
// over the cylinder and the induced diameter bracket.
struct CylinderGeometry {
  Word word;
  double inf_log_deriv = 0.0;  // inf over the cylinder of S_n log|T'|, nats
  double sup_log_deriv = 0.0;
  double diam_lower = 0.0;
  double diam_upper = 0.0;
};

// A countable family of expanding interval branches together with the
// induced Markov transition structure.
class MapSystem {
 public:
  static MapSystem base_n(int n);
  static MapSystem gauss();
  static MapSystem f_lambda(double lambda);
  // Custom piecewise-linear Markov family; derive_transitions rejects
  // non-Markov layouts naming the offending branch pair.
  static MapSystem piecewise_linear(std::vector<Branch> branches);

  MapFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  const TransitionRule& rule() const { return rule_; }

  // Number of branches when finite.
  std::optional<int> branch_count() const { return branch_count_; }
  double lambda() const { return lambda_; }

  // Uniform expansion floor: min over branches of inf |T'|.
  double zeta() const { return zeta_; }
  // sup log|T'| over the whole map, when finite (f_lambda, base_n,
  // piecewise-linear). Gauss has none.
  std::optional<double> sup_log_deriv() const { return sup_log_deriv_; }
  // Per-branch range of log|T'| (single application).
  double branch_inf_log_deriv(Symbol i) const;
  double branch_sup_log_deriv(Symbol i) const;
  double branch_image_diameter(Symbol i) const;
  // True when |T'| is constant on every branch (exact cylinder data).
  bool locally_constant_derivative() const { return family_ != MapFamily::Gauss; }
  // inf|T'| on branch i grows without bound (Gauss-type tail).
  bool branch_derivative_diverges() const { return family_ == MapFamily::Gauss; }

  FiniteSubshift derive_transitions(int k) const;
  Truncation derive_truncation(int k) const;

  CylinderGeometry cylinder_geometry(const Word& w) const;
  // Range of the single-step log|T'| over the cylinder [w] (w in original
  // labels). Drives roof functions and order-m integral brackets.
  std::pair<double, double> log_deriv_range(const Word& w) const;

  Potential indicator_potential(Symbol i) const { return Potential::indicator(i); }

 private:
  MapSystem() = default;
  MapFamily family_ = MapFamily::BaseN;
  std::string name_;
  TransitionRule rule_ = TransitionRule::full_shift();
  std::optional<int> branch_count_;
  double lambda_ = 0.0;
  double zeta_ = 2.0;
  std::optional<double> sup_log_deriv_;
  std::vector<Branch> branches_;  // materialized for piecewise_linear

  const Branch& branch_at(Symbol i) const;
  mutable std::vector<Branch> branch_cache_;  // generated lazily per family
};

}  // namespace birkhoff
