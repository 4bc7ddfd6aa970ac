#pragma once

#include <string>
#include <vector>

namespace kappa {

/// The five graph-space flavors. Disc, ThetaPointed and Pointed use the
/// unmodified (red) contraction rules; Theta and Closed the modified (blue)
/// ones. Pointed flavors carry an external label.
enum class Flavor { Disc, ThetaPointed, Pointed, Theta, Closed };

inline bool is_blue(Flavor f) { return f == Flavor::Theta || f == Flavor::Closed; }
inline bool has_external(Flavor f) {
  return f == Flavor::ThetaPointed || f == Flavor::Pointed;
}
/// W-labelled flavors allow all Pontryagin classes p_1..p_{n-1}; the others
/// restrict to p_{ceil((n+1)/4)}..p_{n-1}.
inline bool w_labels(Flavor f) { return f == Flavor::Pointed || f == Flavor::Closed; }

std::string flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& s);

/// lowest index allowed in the restricted label algebra
inline int min_p_index(int n) { return (n + 1 + 3) / 4; }  // ceil((n+1)/4)
/// p_i with i <= low_p_bound(n) are the "low" classes moved out by rule (c'').
inline int low_p_bound(int n) { return n / 4; }

/// Monomial in the Euler class e and Pontryagin classes p_1..p_{n-1}.
struct LabelMonomial {
  int e = 0;
  std::vector<int> p;  // p[i] = exponent of p_{i+1}; trailing zeros trimmed

  LabelMonomial() = default;
  static LabelMonomial one() { return {}; }
  static LabelMonomial euler(int k = 1);
  static LabelMonomial pont(int i, int k = 1);  // p_i^k

  int degree(int n) const;
  bool is_one() const { return e == 0 && p.empty(); }
  bool is_euler() const { return e == 1 && p.empty(); }         // exactly e
  bool pure_pontryagin() const { return e == 0 && !p.empty(); }
  int p_exp(int i) const;  // exponent of p_i
  /// smallest i with 1 <= i <= low_p_bound(n) and p_i | this, or 0
  int lowest_low_p(int n) const;
  bool in_restricted_algebra(int n) const;  // no p_i with i < min_p_index(n)
  bool valid_for(Flavor f, int n) const;

  LabelMonomial operator*(const LabelMonomial& o) const;
  LabelMonomial div_p(int i) const;  // divide by p_i once
  bool operator==(const LabelMonomial& o) const { return e == o.e && p == o.p; }
  bool operator<(const LabelMonomial& o) const;

  std::string str() const;          // "1", "e^2", "e*p1^2*p3"
  std::string latex() const;        // "e^2", "ep_1^2"
  void trim();
};

}  // namespace kappa
