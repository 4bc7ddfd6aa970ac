#include "kappa/chi.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kappa {

QPoly::QPoly(const Rat& a) {
  if (a != 0) c_.push_back(a);
}
QPoly::QPoly(long a) {
  if (a != 0) c_.push_back(Rat(a));
}
QPoly::QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::chi() { return QPoly(std::vector<Rat>{Rat(0), Rat(1)}); }
QPoly QPoly::chi_minus(const Rat& k) { return QPoly(std::vector<Rat>{-k, Rat(1)}); }

bool QPoly::is_one() const { return c_.size() == 1 && c_[0] == 1; }

const Rat& QPoly::lead() const {
  static const Rat zero(0);
  return c_.empty() ? zero : c_.back();
}

Rat QPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
  return c_[i];
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& a : r.c_) a = -a;
  return r;
}

QPoly QPoly::operator+(const QPoly& o) const {
  QPoly r;
  r.c_.resize(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
  r.trim();
  return r;
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return QPoly();
  QPoly r;
  r.c_.assign(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
  r.trim();
  return r;
}

QPoly QPoly::operator*(const Rat& a) const {
  if (a == 0) return QPoly();
  QPoly r = *this;
  for (auto& x : r.c_) x *= a;
  return r;
}

bool QPoly::operator<(const QPoly& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  for (size_t i = c_.size(); i-- > 0;)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

void QPoly::divrem(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.is_zero()) throw arithmetic_error("polynomial division by zero");
  q = QPoly();
  r = a;
  int db = b.deg();
  while (!r.is_zero() && r.deg() >= db) {
    int k = r.deg() - db;
    Rat f = r.lead() / b.lead();
    QPoly t;
    t.c_.assign(k + 1, Rat(0));
    t.c_[k] = f;
    q = q + t;
    r = r - t * b;
  }
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly q, r;
    divrem(a, b, q, r);
    a = b;
    b = r;
  }
  if (!a.is_zero()) a.make_monic();
  return a;
}

Rat QPoly::eval(const Rat& x) const {
  Rat r(0);
  for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Rat QPoly::make_monic() {
  if (is_zero()) return Rat(1);
  Rat l = c_.back();
  for (auto& a : c_) a /= l;
  return l;
}

std::string QPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    Rat a = c_[i];
    if (a == 0) continue;
    bool neg = a < 0;
    Rat mag = neg ? Rat(-a) : a;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? "-" : "+");
    }
    bool unit = (mag == 1) && i > 0;
    if (!unit) os << mag.get_str();
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

ChiScalar::ChiScalar(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw arithmetic_error("zero denominator");
  reduce();
}

ChiScalar ChiScalar::inv_chi() { return ChiScalar(QPoly(Rat(1)), QPoly::chi()); }

void ChiScalar::reduce() {
  if (num_.is_zero()) {
    den_ = QPoly(Rat(1));
    return;
  }
  QPoly g = QPoly::gcd(num_, den_);
  if (!g.is_one()) {
    QPoly q, r;
    QPoly::divrem(num_, g, q, r);
    num_ = q;
    QPoly::divrem(den_, g, q, r);
    den_ = q;
  }
  Rat l = den_.make_monic();
  num_ = num_ * (Rat(1) / l);
}

ChiScalar ChiScalar::operator-() const {
  ChiScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

ChiScalar ChiScalar::operator+(const ChiScalar& o) const {
  return ChiScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ChiScalar ChiScalar::operator-(const ChiScalar& o) const { return *this + (-o); }

ChiScalar ChiScalar::operator*(const ChiScalar& o) const {
  return ChiScalar(num_ * o.num_, den_ * o.den_);
}

ChiScalar ChiScalar::operator/(const ChiScalar& o) const {
  if (o.is_zero()) throw arithmetic_error("division by zero");
  return ChiScalar(num_ * o.den_, den_ * o.num_);
}

bool ChiScalar::operator<(const ChiScalar& o) const {
  if (!(num_ == o.num_)) return num_ < o.num_;
  return den_ < o.den_;
}

ChiScalar ChiScalar::inverse() const {
  if (is_zero()) throw arithmetic_error("inverse of zero");
  return ChiScalar(den_, num_);
}

ChiScalar ChiScalar::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  ChiScalar r(1);
  ChiScalar b = *this;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

Rat ChiScalar::specialize(int n, int g) const {
  if (n <= 0) throw specialization_error("n must be positive");
  if (g < 0) throw specialization_error("g must be nonnegative");
  if (n % 2 == 1 && g == 1)
    throw specialization_error("chi vanishes for (n odd, g = 1)");
  Rat x = Rat(2) + (n % 2 == 0 ? Rat(2 * g) : Rat(-2 * g));
  return eval_at(x);
}

Rat ChiScalar::eval_at(const Rat& x) const {
  if (den_.eval(x) == 0) {
    std::string which = "x-" + x.get_str();
    for (const QPoly& f : denominator_support())
      if (f.eval(x) == 0) which = f.str();
    throw specialization_error("pole at chi = " + x.get_str() + " (factor " + which + ")");
  }
  return num_.eval(x) / den_.eval(x);
}

std::vector<QPoly> ChiScalar::denominator_support() const {
  std::vector<QPoly> out;
  QPoly d = den_;
  if (d.deg() <= 0) return out;
  // Rational-root extraction. Scale to integer coefficients first.
  mpz_class l(1);
  for (const Rat& a : d.coeffs()) l = lcm(l, a.get_den());
  std::vector<mpz_class> ic;
  for (const Rat& a : d.coeffs()) ic.push_back(mpz_class(a.get_num() * (l / a.get_den())));
  auto divisors = [](mpz_class v) {
    std::vector<mpz_class> ds;
    v = abs(v);
    if (v == 0) return ds;
    for (mpz_class i = 1; i * i <= v; ++i)
      if (v % i == 0) {
        ds.push_back(i);
        if (i * i != v) ds.push_back(v / i);
      }
    return ds;
  };
  while (d.deg() >= 1) {
    if (d.coeff(0) == 0) {  // root at 0
      QPoly root = QPoly::chi();
      if (out.empty() || !(out.back() == root)) out.push_back(root);
      QPoly q, r;
      QPoly::divrem(d, root, q, r);
      d = q;
      continue;
    }
    // candidates p/q with p | const, q | lead of the integer image
    mpz_class il(1);
    for (const Rat& a : d.coeffs()) il = lcm(il, a.get_den());
    mpz_class c0(Rat(d.coeff(0) * Rat(il)).get_num());
    mpz_class cl(Rat(d.lead() * Rat(il)).get_num());
    bool found = false;
    for (const auto& p : divisors(c0)) {
      for (const auto& q : divisors(cl)) {
        for (int s = 0; s < 2 && !found; ++s) {
          Rat cand = Rat(s == 0 ? p : -p, q);
          cand.canonicalize();
          if (d.eval(cand) == 0) {
            QPoly f = QPoly::chi_minus(cand);
            bool seen = false;
            for (const auto& g : out) seen = seen || g == f;
            if (!seen) out.push_back(f);
            QPoly qq, rr;
            QPoly::divrem(d, f, qq, rr);
            d = qq;
            found = true;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) break;  // no rational root left
  }
  if (d.deg() >= 1) out.push_back(d);  // irreducible-over-our-needs remainder
  std::sort(out.begin(), out.end());
  return out;
}

std::string ChiScalar::str(const std::string& var) const {
  if (den_.is_one()) return num_.str(var);
  std::string ns = num_.str(var);
  std::string ds = den_.str(var);
  auto compound = [](const std::string& s) {
    return s.find_first_of("+-", 1) != std::string::npos;
  };
  std::string r = compound(ns) ? "(" + ns + ")" : ns;
  r += "/";
  r += (compound(ds) || ds.find('*') != std::string::npos) ? "(" + ds + ")" : ds;
  return r;
}

ChiScalar operator*(const Rat& a, const ChiScalar& s) { return ChiScalar(a) * s; }

}  // namespace kappa
