#include "qdioph/psi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qdioph {

PsiSpec PsiSpec::constant(double c) {
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("psi: constant must be positive");
  PsiSpec p;
  p.family_ = PsiFamily::kConstant;
  p.c_ = c;
  return p;
}

PsiSpec PsiSpec::power(double c, double s) {
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("psi: power coefficient must be positive");
  if (!(s > 0 && s <= 1)) throw std::invalid_argument("psi: power exponent must lie in (0, 1]");
  PsiSpec p;
  p.family_ = PsiFamily::kPower;
  p.c_ = c;
  p.s_ = s;
  return p;
}

PsiSpec PsiSpec::step(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.empty() || breaks.size() != values.size())
    throw std::invalid_argument("psi: step needs equally many breaks and values");
  if (breaks.front() != 1.0) throw std::invalid_argument("psi: first step break must be 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw std::invalid_argument("psi: step values must be positive");
    if (i > 0 && !(breaks[i] > breaks[i - 1])) throw std::invalid_argument("psi: step breaks must increase");
    if (i > 0 && values[i] > values[i - 1]) throw std::invalid_argument("psi: step values must not increase");
  }
  PsiSpec p;
  p.family_ = PsiFamily::kStep;
  p.breaks_ = std::move(breaks);
  p.values_ = std::move(values);
  return p;
}

double PsiSpec::operator()(double t) const {
  if (t < 1.0) return 0.0;
  switch (family_) {
    case PsiFamily::kConstant:
      return c_;
    case PsiFamily::kPower:
      return s_ == 1.0 ? c_ / t : c_ * std::pow(t, -s_);
    case PsiFamily::kStep: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }
  }
  return 0.0;
}

double PsiSpec::integral(double a, double b) const {
  a = std::max(a, 1.0);
  if (!(b > a)) return 0.0;
  switch (family_) {
    case PsiFamily::kConstant:
      return c_ * (b - a);
    case PsiFamily::kPower:
      if (s_ == 1.0) return c_ * std::log(b / a);
      return c_ * (std::pow(b, 1.0 - s_) - std::pow(a, 1.0 - s_)) / (1.0 - s_);
    case PsiFamily::kStep: {
      double total = 0.0;
      for (std::size_t i = 0; i < breaks_.size(); ++i) {
        const double lo = std::max(a, breaks_[i]);
        const double hi = i + 1 < breaks_.size() ? std::min(b, breaks_[i + 1]) : b;
        if (hi > lo) total += values_[i] * (hi - lo);
      }
      return total;
    }
  }
  return 0.0;
}

std::string PsiSpec::describe() const {
  char buf[96];
  switch (family_) {
    case PsiFamily::kConstant:
      std::snprintf(buf, sizeof buf, "constant(c=%.17g)", c_);
      return buf;
    case PsiFamily::kPower:
      std::snprintf(buf, sizeof buf, "power(c=%.17g,s=%.17g)", c_, s_);
      return buf;
    case PsiFamily::kStep:
      std::snprintf(buf, sizeof buf, "step(%zu pieces)", breaks_.size());
      return buf;
  }
  return "";
}

double psi_eval(const PsiSpec& psi, double t) { return psi(t); }

double psi_integral(const PsiSpec& psi, double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("psi_integral: T must be >= 1");
  return psi.integral(1.0, T);
}

}  // namespace qdioph
