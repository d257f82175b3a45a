#pragma once

#include <vector>

namespace icue {

// Stand-in for an edge of infinite cost.
inline constexpr double kDefaultBigM = 1e9;

// Continuous, nondecreasing, nonnegative edge cost c_e(load).
//
// Two kinds exist: a polynomial with nonnegative coefficients (constant term
// first), and a big-M sentinel that costs a fixed large value at every load.
// Nonnegative coefficients make monotonicity hold by construction.
class CostFunction {
 public:
  enum class Kind { polynomial, big_m };

  CostFunction() = default;

  static CostFunction polynomial(std::vector<double> coefficients);
  static CostFunction constant(double value) { return polynomial({value}); }
  static CostFunction linear(double slope, double intercept = 0.0) {
    return polynomial({intercept, slope});
  }
  static CostFunction big_m(double value = kDefaultBigM);

  Kind kind() const { return kind_; }
  bool is_big_m() const { return kind_ == Kind::big_m; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double big_m_value() const { return big_m_; }

  // Throws std::domain_error for negative load.
  double operator()(double load) const;
  double derivative(double load) const;
  // Integral of the cost from 0 to load.
  double integral(double load) const;

  bool strictly_increasing() const;
  // Sufficient pointwise test for this(t) <= other(t) for all t >= 0:
  // coefficient-wise for polynomials, any polynomial under a big-M, and
  // big-M values compared directly.
  bool dominated_by(const CostFunction& other) const;

  friend bool operator==(const CostFunction&, const CostFunction&) = default;

 private:
  Kind kind_ = Kind::polynomial;
  std::vector<double> coefficients_;
  double big_m_ = kDefaultBigM;
};

inline double eval_cost(const CostFunction& fn, double load) { return fn(load); }

}  // namespace icue
