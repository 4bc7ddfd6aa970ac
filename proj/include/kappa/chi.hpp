#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace kappa {

using Rat = mpq_class;

struct arithmetic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct specialization_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense polynomial in the formal variable chi over Q.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(const Rat& a);
  explicit QPoly(long a);
  explicit QPoly(std::vector<Rat> coeffs);  // ascending degree

  static QPoly chi();                // the variable itself
  static QPoly chi_minus(const Rat& k);

  int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  const Rat& lead() const;
  Rat coeff(int i) const;
  const std::vector<Rat>& coeffs() const { return c_; }

  QPoly operator-() const;
  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator*(const QPoly& o) const;
  QPoly operator*(const Rat& a) const;
  bool operator==(const QPoly& o) const { return c_ == o.c_; }
  bool operator<(const QPoly& o) const;

  // Euclidean division; b must be nonzero.
  static void divrem(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
  static QPoly gcd(QPoly a, QPoly b);  // monic

  Rat eval(const Rat& x) const;
  Rat make_monic();  // returns old leading coefficient

  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rat> c_;
};

/// Exact rational function of chi: num/den with den monic and gcd(num,den)=1.
class ChiScalar {
 public:
  ChiScalar() : num_(), den_(Rat(1)) {}
  ChiScalar(long a) : num_(a), den_(Rat(1)) {}
  ChiScalar(const Rat& a) : num_(a), den_(Rat(1)) {}
  explicit ChiScalar(QPoly p) : num_(std::move(p)), den_(Rat(1)) {}
  ChiScalar(QPoly num, QPoly den);

  static ChiScalar chi() { return ChiScalar(QPoly::chi()); }
  static ChiScalar chi_minus(long k) { return ChiScalar(QPoly::chi_minus(Rat(k))); }
  static ChiScalar inv_chi();  // 1/chi

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }

  ChiScalar operator-() const;
  ChiScalar operator+(const ChiScalar& o) const;
  ChiScalar operator-(const ChiScalar& o) const;
  ChiScalar operator*(const ChiScalar& o) const;
  ChiScalar operator/(const ChiScalar& o) const;  // throws arithmetic_error on /0
  ChiScalar& operator+=(const ChiScalar& o) { return *this = *this + o; }
  ChiScalar& operator-=(const ChiScalar& o) { return *this = *this - o; }
  ChiScalar& operator*=(const ChiScalar& o) { return *this = *this * o; }
  ChiScalar& operator/=(const ChiScalar& o) { return *this = *this / o; }
  bool operator==(const ChiScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const ChiScalar& o) const { return !(*this == o); }
  bool operator<(const ChiScalar& o) const;

  ChiScalar pow(int k) const;  // k may be negative for nonzero values
  ChiScalar inverse() const;

  /// Evaluate at chi = 2 + (-1)^n 2g. The pair (n odd, g = 1) is rejected.
  Rat specialize(int n, int g) const;
  Rat eval_at(const Rat& x) const;  // throws specialization_error at poles

  /// Monic irreducible factors of the denominator. Linear factors are split
  /// off exactly; anything left of degree >= 2 is reported as one block.
  std::vector<QPoly> denominator_support() const;

  std::string str(const std::string& var = "x") const;

 private:
  void reduce();
  QPoly num_, den_;
};

ChiScalar operator*(const Rat& a, const ChiScalar& s);

}  // namespace kappa
