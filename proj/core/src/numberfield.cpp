#include "qdioph/numberfield.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdioph/checked.hpp"
#include "qdioph/intmat.hpp"

namespace qdioph {

namespace {

bool is_squarefree(std::int64_t n) {
  for (std::int64_t p = 2; p <= n / p; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

FieldSpec::FieldSpec(std::int64_t D) : D_(D) {
  if (D < 1) throw std::invalid_argument("field: D must be a positive integer, got " + std::to_string(D));
  if (!is_squarefree(D)) throw std::invalid_argument("field: D must be squarefree, got " + std::to_string(D));
  if (D % 4 == 3) {
    kind_ = OmegaKind::kHalfOnePlusSqrt;
    discriminant_ = -D;
    trace_ = 1;
    norm_ = (1 + D) / 4;
  } else {
    kind_ = OmegaKind::kSqrtMinusD;
    discriminant_ = checked_mul(-4, D);
    trace_ = 0;
    norm_ = D;
  }
}

std::complex<double> FieldSpec::omega() const {
  const double im = std::sqrt(static_cast<double>(D_));
  return kind_ == OmegaKind::kSqrtMinusD ? std::complex<double>(0.0, im)
                                         : std::complex<double>(0.5, 0.5 * im);
}

std::complex<long double> FieldSpec::omega_ld() const {
  const long double im = std::sqrt(static_cast<long double>(D_));
  return kind_ == OmegaKind::kSqrtMinusD ? std::complex<long double>(0.0L, im)
                                         : std::complex<long double>(0.5L, 0.5L * im);
}

std::string FieldSpec::name() const { return "Q(sqrt(-" + std::to_string(D_) + "))"; }

QuadInt FieldSpec::add(const QuadInt& x, const QuadInt& y) const {
  return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
}

QuadInt FieldSpec::sub(const QuadInt& x, const QuadInt& y) const {
  return {checked_sub(x.a, y.a), checked_sub(x.b, y.b)};
}

QuadInt FieldSpec::mul(const QuadInt& x, const QuadInt& y) const {
  // (a + b w)(c + d w) = ac - bd*N + (ad + bc + bd*T) w
  const __int128 ac = static_cast<__int128>(x.a) * y.a;
  const __int128 bd = static_cast<__int128>(x.b) * y.b;
  const __int128 ad = static_cast<__int128>(x.a) * y.b;
  const __int128 bc = static_cast<__int128>(x.b) * y.a;
  return {narrow(ac - bd * norm_), narrow(ad + bc + bd * trace_)};
}

FieldSpec field_new(std::int64_t D) { return FieldSpec(D); }

std::complex<double> embed(const FieldSpec& f, const QuadInt& x) {
  return static_cast<double>(x.a) + static_cast<double>(x.b) * f.omega();
}

std::int64_t norm_inf(const FieldSpec& f, const QuadInt& x) {
  const __int128 a = x.a;
  const __int128 b = x.b;
  return narrow(a * a + a * b * f.omega_trace() + b * b * f.omega_norm());
}

Mat2 regular_representation(const FieldSpec& f, const QuadInt& y) {
  const QuadInt r0 = y;                   // 1 * y
  const QuadInt r1 = f.mul({0, 1}, y);    // omega * y
  return {{{r0.a, r0.b}, {r1.a, r1.b}}};
}

IdealRep unit_ideal() { return IdealRep{{{{1, 0}, {0, 1}}}, 1}; }

IdealRep ideal_from_generators(const FieldSpec& f, std::span<const QuadInt> generators) {
  IntMatrix m(0, 2);
  for (const QuadInt& g : generators) {
    const QuadInt gw = f.mul(g, {0, 1});
    const std::int64_t r0[2] = {g.a, g.b};
    const std::int64_t r1[2] = {gw.a, gw.b};
    m.append_row(r0);
    m.append_row(r1);
  }
  const IntMatrix h = hermite_normal_form(m);
  if (h.rows() == 0) throw std::invalid_argument("ideal: all generators are zero");
  // A nonzero ideal of an order in an imaginary quadratic field has rank 2.
  if (h.rows() != 2) throw std::logic_error("ideal: generated module is not of full rank");
  IdealRep ideal;
  ideal.basis = {{{h(0, 0), h(0, 1)}, {h(1, 0), h(1, 1)}}};
  ideal.norm = checked_mul(h(0, 0), h(1, 1));
  return ideal;
}

bool ideal_contains(const IdealRep& ideal, const QuadInt& x) {
  const auto& h = ideal.basis;
  if (x.a % h[0][0] != 0) return false;
  const std::int64_t s = x.a / h[0][0];
  const std::int64_t rest = checked_sub(x.b, checked_mul(s, h[0][1]));
  return rest % h[1][1] == 0;
}

QuadInt reduce_mod(const IdealRep& ideal, const QuadInt& x) {
  const auto& h = ideal.basis;
  const std::int64_t s = floor_div(x.a, h[0][0]);
  QuadInt r{checked_sub(x.a, checked_mul(s, h[0][0])), checked_sub(x.b, checked_mul(s, h[0][1]))};
  const std::int64_t t = floor_div(r.b, h[1][1]);
  r.b = checked_sub(r.b, checked_mul(t, h[1][1]));
  return r;
}

bool congruent(const FieldSpec& f, std::span<const QuadInt> z, std::span<const QuadInt> v,
               const IdealRep& ideal) {
  if (z.size() != v.size()) throw std::invalid_argument("congruent: length mismatch");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!ideal_contains(ideal, f.sub(z[i], v[i]))) return false;
  }
  return true;
}

std::string to_string(const QuadInt& x) {
  return "(" + std::to_string(x.a) + "," + std::to_string(x.b) + ")";
}

}  // namespace qdioph
