#include "kappa/label.hpp"

#include <sstream>
#include <stdexcept>

namespace kappa {

std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Disc: return "disc";
    case Flavor::ThetaPointed: return "theta-pointed";
    case Flavor::Pointed: return "pointed";
    case Flavor::Theta: return "theta";
    case Flavor::Closed: return "closed";
  }
  return "?";
}

Flavor flavor_from_name(const std::string& s) {
  if (s == "disc") return Flavor::Disc;
  if (s == "theta-pointed" || s == "theta_pointed") return Flavor::ThetaPointed;
  if (s == "pointed") return Flavor::Pointed;
  if (s == "theta") return Flavor::Theta;
  if (s == "closed") return Flavor::Closed;
  throw std::invalid_argument("unknown flavor: " + s);
}

LabelMonomial LabelMonomial::euler(int k) {
  LabelMonomial m;
  m.e = k;
  return m;
}

LabelMonomial LabelMonomial::pont(int i, int k) {
  LabelMonomial m;
  if (i < 1) throw std::invalid_argument("pontryagin index must be >= 1");
  m.p.assign(i, 0);
  m.p[i - 1] = k;
  m.trim();
  return m;
}

void LabelMonomial::trim() {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int LabelMonomial::degree(int n) const {
  int d = 2 * n * e;
  for (size_t i = 0; i < p.size(); ++i) d += 4 * static_cast<int>(i + 1) * p[i];
  return d;
}

int LabelMonomial::p_exp(int i) const {
  if (i < 1 || i > static_cast<int>(p.size())) return 0;
  return p[i - 1];
}

int LabelMonomial::lowest_low_p(int n) const {
  int bound = low_p_bound(n);
  for (int i = 1; i <= bound && i <= static_cast<int>(p.size()); ++i)
    if (p[i - 1] > 0) return i;
  return 0;
}

bool LabelMonomial::in_restricted_algebra(int n) const {
  int lo = min_p_index(n);
  for (int i = 1; i < lo && i <= static_cast<int>(p.size()); ++i)
    if (p[i - 1] > 0) return false;
  return true;
}

bool LabelMonomial::valid_for(Flavor f, int n) const {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0 && static_cast<int>(i + 1) > n - 1) return false;
  if (!w_labels(f)) return in_restricted_algebra(n);
  return true;
}

LabelMonomial LabelMonomial::operator*(const LabelMonomial& o) const {
  LabelMonomial r;
  r.e = e + o.e;
  r.p.resize(std::max(p.size(), o.p.size()), 0);
  for (size_t i = 0; i < p.size(); ++i) r.p[i] += p[i];
  for (size_t i = 0; i < o.p.size(); ++i) r.p[i] += o.p[i];
  r.trim();
  return r;
}

LabelMonomial LabelMonomial::div_p(int i) const {
  LabelMonomial r = *this;
  if (r.p_exp(i) <= 0) throw std::invalid_argument("label not divisible by p_" + std::to_string(i));
  r.p[i - 1]--;
  r.trim();
  return r;
}

bool LabelMonomial::operator<(const LabelMonomial& o) const {
  if (e != o.e) return e < o.e;
  return p < o.p;
}

std::string LabelMonomial::str() const {
  if (is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  if (e > 0) {
    os << "e";
    if (e > 1) os << "^" << e;
    first = false;
  }
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (!first) os << "*";
    os << "p" << (i + 1);
    if (p[i] > 1) os << "^" << p[i];
    first = false;
  }
  return os.str();
}

std::string LabelMonomial::latex() const {
  if (is_one()) return "1";
  std::ostringstream os;
  if (e > 0) {
    os << "e";
    if (e > 1) os << "^" << e;
  }
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    os << "p_" << (i + 1);
    if (p[i] > 1) os << "^" << p[i];
  }
  return os.str();
}

}  // namespace kappa
