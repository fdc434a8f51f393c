#pragma once

#include <string>
#include <vector>

namespace qdioph {

enum class PsiFamily { kConstant, kPower, kStep };

/// A positive nonincreasing approximation function psi on [1, inf), extended
/// by zero on [0, 1).
///
///   constant:  psi(t) = c
///   power:     psi(t) = c * t^(-s), 0 < s <= 1
///   step:      psi(t) = values[i] for breaks[i] <= t < breaks[i+1],
///              breaks[0] == 1, the last value extends to infinity.
class PsiSpec {
 public:
  static PsiSpec constant(double c);
  static PsiSpec power(double c, double s);
  static PsiSpec step(std::vector<double> breaks, std::vector<double> values);

  PsiFamily family() const { return family_; }
  double c() const { return c_; }
  double s() const { return s_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double t) const;
  /// Antiderivative integral of psi over [a, b], zero below 1.
  double integral(double a, double b) const;
  std::string describe() const;

 private:
  PsiFamily family_ = PsiFamily::kConstant;
  double c_ = 1.0;
  double s_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

double psi_eval(const PsiSpec& psi, double t);

/// Psi(T) = integral_1^T psi(t) dt.
double psi_integral(const PsiSpec& psi, double T);

}  // namespace qdioph
