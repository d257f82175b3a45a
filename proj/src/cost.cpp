#include "icue/cost.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace icue {

CostFunction CostFunction::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients) {
    if (!std::isfinite(c) || c < 0.0) {
      throw std::invalid_argument(
          fmt::format("polynomial cost coefficients must be finite and >= 0, got {}", c));
    }
  }
  CostFunction fn;
  fn.kind_ = Kind::polynomial;
  fn.coefficients_ = std::move(coefficients);
  return fn;
}

CostFunction CostFunction::big_m(double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(fmt::format("big-M value must be finite and > 0, got {}", value));
  }
  CostFunction fn;
  fn.kind_ = Kind::big_m;
  fn.big_m_ = value;
  return fn;
}

double CostFunction::operator()(double load) const {
  if (load < 0.0) throw std::domain_error(fmt::format("negative edge load {}", load));
  if (is_big_m()) return big_m_;
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * load + *it;
  return acc;
}

double CostFunction::derivative(double load) const {
  if (load < 0.0) throw std::domain_error(fmt::format("negative edge load {}", load));
  if (is_big_m() || coefficients_.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t j = coefficients_.size() - 1; j >= 1; --j) {
    acc = acc * load + static_cast<double>(j) * coefficients_[j];
  }
  return acc;
}

double CostFunction::integral(double load) const {
  if (load < 0.0) throw std::domain_error(fmt::format("negative edge load {}", load));
  if (is_big_m()) return big_m_ * load;
  double acc = 0.0;
  for (std::size_t j = coefficients_.size(); j-- > 0;) {
    acc = acc * load + coefficients_[j] / static_cast<double>(j + 1);
  }
  return acc * load;
}

bool CostFunction::strictly_increasing() const {
  if (is_big_m()) return false;
  for (std::size_t j = 1; j < coefficients_.size(); ++j) {
    if (coefficients_[j] > 0.0) return true;
  }
  return false;
}

bool CostFunction::dominated_by(const CostFunction& other) const {
  if (other.is_big_m()) return !is_big_m() || big_m_ <= other.big_m_;
  if (is_big_m()) return false;
  const std::size_t n = std::max(coefficients_.size(), other.coefficients_.size());
  for (std::size_t j = 0; j < n; ++j) {
    double mine = j < coefficients_.size() ? coefficients_[j] : 0.0;
    double theirs = j < other.coefficients_.size() ? other.coefficients_[j] : 0.0;
    if (mine > theirs) return false;
  }
  return true;
}

}  // namespace icue
