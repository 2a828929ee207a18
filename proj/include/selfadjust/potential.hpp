#ifndef SELFADJUST_POTENTIAL_HPP
#define SELFADJUST_POTENTIAL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace selfadjust {

// All logarithms are base 2.
inline double log2d(double x) { return std::log2(x); }

namespace detail {
inline double ipow(double x, int e) {
  double r = x;
  for (int i = 1; i < e; ++i) r *= x;
  return r;
}
}  // namespace detail

/// Parameters of the potential family phi(x) = H(x)/log^e(shift + H(x)).
///
/// The exponent-2 flavor uses shift 2 and gamma 3000; the exponent-3 flavor
/// uses shift 4 and gamma 3000^2. `d` scales the category threshold function
/// h(x) = d*log^2(2+x), and `scale` is an extra multiplier applied on top of
/// the structure-dependent amortization scale.
struct PotentialConfig {
  int exponent = 2;
  double shift = 2.0;
  double gamma = 3000.0;
  double d = 1.0;
  double scale = 1.0;

  static PotentialConfig exp2(double gamma = 3000.0, double d = 1.0) {
    return PotentialConfig{2, 2.0, gamma, d, 1.0};
  }
  static PotentialConfig exp3(double gamma = 3000.0 * 3000.0, double d = 1.0) {
    return PotentialConfig{3, 4.0, gamma, d, 1.0};
  }
  // The (exponent, shift) pairing is fixed unless explicitly overridden.
  static PotentialConfig custom(int exponent, double shift, double gamma,
                                double d = 1.0, double scale = 1.0) {
    PotentialConfig cfg{exponent, shift, gamma, d, scale};
    cfg.validate(/*allow_custom_shift=*/true);
    return cfg;
  }

  void validate(bool allow_custom_shift = false) const {
    if (exponent != 2 && exponent != 3)
      throw std::invalid_argument("PotentialConfig: exponent must be 2 or 3");
    if (!allow_custom_shift) {
      const double want = exponent == 2 ? 2.0 : 4.0;
      if (shift != want)
        throw std::invalid_argument(
            "PotentialConfig: shift must pair with exponent (2->2, 3->4)");
    }
    if (!(shift > 0)) throw std::invalid_argument("PotentialConfig: shift > 0");
    if (!(gamma >= 1.0))
      throw std::invalid_argument("PotentialConfig: gamma >= 1");
    if (!(d > 0)) throw std::invalid_argument("PotentialConfig: d > 0");
    if (!(scale > 0)) throw std::invalid_argument("PotentialConfig: scale > 0");
  }
};

/// f(x) = log(x) / log^e(shift + log(x)), defined for x >= 1.
inline double f_val(double x, const PotentialConfig& cfg) {
  if (!(x >= 1.0)) throw std::domain_error("f_val: x must be >= 1");
  const double lx = std::log2(x);
  return lx / detail::ipow(std::log2(cfg.shift + lx), cfg.exponent);
}

/// g(x) = x / log^e(shift + x), defined for x >= 0. f(x) = g(log x).
inline double g_val(double x, const PotentialConfig& cfg) {
  if (!(x >= 0.0)) throw std::domain_error("g_val: x must be >= 0");
  return x / detail::ipow(std::log2(cfg.shift + x), cfg.exponent);
}

/// h(x) = d * log^2(2 + x), defined for x >= 0. Always squared, independent
/// of the potential exponent.
inline double h_val(double x, const PotentialConfig& cfg) {
  if (!(x >= 0.0)) throw std::domain_error("h_val: x must be >= 0");
  const double l = std::log2(2.0 + x);
  return cfg.d * l * l;
}

/// i-fold composition of h, h^(0)(x) = x.
inline double h_iter(std::int64_t i, double x, const PotentialConfig& cfg) {
  if (i < 0) throw std::domain_error("h_iter: i must be >= 0");
  double v = x;
  for (std::int64_t k = 0; k < i; ++k) v = h_val(v, cfg);
  return v;
}

/// Iterated logarithm: smallest i such that the i-fold base-2 log of n
/// is <= 1. log_star(1) = 0.
inline int log_star(std::uint64_t n) {
  if (n < 1) throw std::domain_error("log_star: n must be >= 1");
  int i = 0;
  double v = static_cast<double>(n);
  while (v > 1.0) {
    v = std::log2(v);
    ++i;
  }
  return i;
}

inline int log_star(double n) {
  if (!(n >= 1.0)) throw std::domain_error("log_star: n must be >= 1");
  int i = 0;
  double v = n;
  while (v > 1.0) {
    v = std::log2(v);
    ++i;
  }
  return i;
}

/// Per-node potential data: H(x) = log(s(p(x))/s(x)) and phi(x) = g(H(x)).
struct NodeStat {
  std::uint64_t subtree_size = 1;
  std::uint64_t parent_subtree_size = 2;
  double H = 0.0;
  double phi = 0.0;

  static NodeStat from_sizes(std::uint64_t size, std::uint64_t parent_size,
                             const PotentialConfig& cfg) {
    if (size < 1 || parent_size <= size)
      throw std::domain_error("NodeStat: need parent_size > size >= 1");
    NodeStat s;
    s.subtree_size = size;
    s.parent_subtree_size = parent_size;
    s.H = std::log2(static_cast<double>(parent_size) /
                    static_cast<double>(size));
    s.phi = g_val(s.H, cfg);
    return s;
  }
};

/// Potential increase of a single link/rotation in the Figure-3 configuration,
/// where a, b, c are the sizes of the three moving subtrees. Terms belonging
/// to an empty subtree are dropped on both sides.
inline double delta_phi_closed_form(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c,
                                    const PotentialConfig& cfg) {
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double cd = static_cast<double>(c);
  const double S = ad + bd + cd + 2.0;  // whole configuration
  const double P = ad + bd + 1.0;       // loser subtree after the link
  const double Q = bd + cd + 1.0;       // lower node subtree before the link
  double delta = f_val(S / P, cfg) - f_val(S / Q, cfg);
  if (a > 0) delta += f_val(P / ad, cfg) - f_val(S / ad, cfg);
  if (b > 0) delta += f_val(P / bd, cfg) - f_val(Q / bd, cfg);
  if (c > 0) delta += f_val(S / cd, cfg) - f_val(Q / cd, cfg);
  return delta;
}

/// Double-valued variant for synthetic size streams that exceed 2^64.
inline double delta_phi_closed_form(double ad, double bd, double cd,
                                    const PotentialConfig& cfg) {
  const double S = ad + bd + cd + 2.0;
  const double P = ad + bd + 1.0;
  const double Q = bd + cd + 1.0;
  double delta = f_val(S / P, cfg) - f_val(S / Q, cfg);
  if (ad > 0) delta += f_val(P / ad, cfg) - f_val(S / ad, cfg);
  if (bd > 0) delta += f_val(P / bd, cfg) - f_val(Q / bd, cfg);
  if (cd > 0) delta += f_val(S / cd, cfg) - f_val(Q / cd, cfg);
  return delta;
}

/// Phi = sum of phi(x) over all non-root nodes of a binary tree; the root has
/// no parent and contributes 0. Works for any node type exposing `left`,
/// `right` and `subtree_size`. Iterative so deep paths do not overflow the
/// stack.
template <typename Node>
double total_potential(const Node* root, const PotentialConfig& cfg) {
  if (root == nullptr) return 0.0;
  double phi = 0.0;
  std::vector<const Node*> stack{root};
  while (!stack.empty()) {
    const Node* u = stack.back();
    stack.pop_back();
    const double su = static_cast<double>(u->subtree_size);
    for (const Node* child : {u->left, u->right}) {
      if (child == nullptr) continue;
      phi += f_val(su / static_cast<double>(child->subtree_size), cfg);
      stack.push_back(child);
    }
  }
  return phi;
}

struct SumOfLogs {
  double psi_prime = 0.0;  // sum of log s(x) over all nodes
  double psi = 0.0;        // psi_prime / logloglog n, when defined
  bool scaled_valid = false;
};

/// Sum-of-logs potential Psi' and its scaled variant Psi = Psi'/logloglog(n).
/// The scaled value is flagged invalid when logloglog(n) <= 0.
template <typename Node>
SumOfLogs sum_of_logs_potential(const Node* root, std::uint64_t n) {
  if (root == nullptr) throw std::domain_error("sum_of_logs: empty tree");
  SumOfLogs out;
  std::vector<const Node*> stack{root};
  while (!stack.empty()) {
    const Node* u = stack.back();
    stack.pop_back();
    out.psi_prime += std::log2(static_cast<double>(u->subtree_size));
    if (u->left) stack.push_back(u->left);
    if (u->right) stack.push_back(u->right);
  }
  if (n >= 2) {
    const double lll = std::log2(std::log2(std::log2(static_cast<double>(n))));
    if (lll > 0.0 && std::isfinite(lll)) {
      out.psi = out.psi_prime / lll;
      out.scaled_valid = true;
    }
  }
  return out;
}

}  // namespace selfadjust

#endif  // SELFADJUST_POTENTIAL_HPP
