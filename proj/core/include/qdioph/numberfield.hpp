#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace qdioph {

/// Element a + b*omega of the ring of integers, in the integral basis {1, omega}.
struct QuadInt {
  std::int64_t a = 0;
  std::int64_t b = 0;

  bool is_zero() const { return a == 0 && b == 0; }
  friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

using Mat2 = std::array<std::array<std::int64_t, 2>, 2>;

enum class OmegaKind {
  kSqrtMinusD,       // omega = sqrt(-D), D = 1, 2 (mod 4)
  kHalfOnePlusSqrt,  // omega = (1 + sqrt(-D)) / 2, D = 3 (mod 4)
};

/// The imaginary quadratic field Q(sqrt(-D)) together with its integral basis.
///
/// omega satisfies omega^2 = trace * omega - norm, so every ring operation stays
/// inside integer coordinates.
class FieldSpec {
 public:
  /// Throws std::invalid_argument unless D >= 1 is squarefree.
  explicit FieldSpec(std::int64_t D);

  std::int64_t D() const { return D_; }
  OmegaKind omega_kind() const { return kind_; }
  std::int64_t discriminant() const { return discriminant_; }
  std::int64_t omega_trace() const { return trace_; }
  std::int64_t omega_norm() const { return norm_; }
  std::complex<double> omega() const;
  std::complex<long double> omega_ld() const;
  std::string name() const;

  QuadInt add(const QuadInt& x, const QuadInt& y) const;
  QuadInt sub(const QuadInt& x, const QuadInt& y) const;
  QuadInt mul(const QuadInt& x, const QuadInt& y) const;

  /// The binary quadratic form a^2 + tr*a*b + nm*b^2, i.e. |a + b*omega|^2,
  /// evaluated on real coordinates.
  template <typename Real>
  Real norm_form(Real a, Real b) const {
    return a * a + static_cast<Real>(trace_) * a * b + static_cast<Real>(norm_) * b * b;
  }

  friend bool operator==(const FieldSpec& x, const FieldSpec& y) { return x.D_ == y.D_; }

 private:
  std::int64_t D_;
  OmegaKind kind_;
  std::int64_t discriminant_;
  std::int64_t trace_;
  std::int64_t norm_;
};

/// Nonzero ideal of O, stored as a Z-basis in row Hermite normal form:
/// rows (h00, h01) and (0, h11), h00 > 0, h11 > 0, 0 <= h01 < h11.
struct IdealRep {
  Mat2 basis{};
  std::int64_t norm = 0;

  friend bool operator==(const IdealRep&, const IdealRep&) = default;
};

FieldSpec field_new(std::int64_t D);

std::complex<double> embed(const FieldSpec& f, const QuadInt& x);

/// |x|^2 in the complex embedding, computed exactly (it equals the field norm).
std::int64_t norm_inf(const FieldSpec& f, const QuadInt& x);

/// Matrix ytilde with [x*y] = [x] * ytilde for coordinate row vectors [x].
Mat2 regular_representation(const FieldSpec& f, const QuadInt& y);

IdealRep ideal_from_generators(const FieldSpec& f, std::span<const QuadInt> generators);
IdealRep unit_ideal();

bool ideal_contains(const IdealRep& ideal, const QuadInt& x);

/// Canonical representative of x + I in the box [0, h00) x [0, h11).
QuadInt reduce_mod(const IdealRep& ideal, const QuadInt& x);

/// True iff z_i - v_i lies in I for every component.
bool congruent(const FieldSpec& f, std::span<const QuadInt> z, std::span<const QuadInt> v,
               const IdealRep& ideal);

std::string to_string(const QuadInt& x);

}  // namespace qdioph
