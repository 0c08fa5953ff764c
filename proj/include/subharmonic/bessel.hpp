#pragma once

#include <vector>

namespace subharmonic {

/// J_0(x) ... J_{n_max}(x) for integer orders by Miller's backward
/// recurrence normalized with J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_j_sequence(int n_max, double x);

/// Single integer-order value; negative orders use J_{-n} = (-1)^n J_n.
double bessel_j(int order, double x);

/// Table of J_l(x) for l in [-n_max, n_max]; at(l) handles the sign rule.
class BesselTable {
 public:
  BesselTable() = default;
  BesselTable(int n_max, double x);

  double at(int order) const;
  int max_order() const { return n_max_; }
  double argument() const { return x_; }

 private:
  int n_max_ = -1;
  double x_ = 0.0;
  std::vector<double> values_;
};

}  // namespace subharmonic
