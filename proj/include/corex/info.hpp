#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Exact information-theoretic quantities over small discrete joint
// distributions. All values are in nats.

namespace corex::info {

inline constexpr std::size_t kMaxArity = 12;

/// Joint probability table over k discrete variables. Outcomes are laid out
/// row-major: the last variable varies fastest.
class JointTable {
 public:
  // Throws InvalidArgument unless masses are >= 0, sum to 1 within 1e-12,
  // and 1 <= k <= kMaxArity.
  JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probs);

  std::size_t arity() const { return cards_.size(); }
  const std::vector<std::size_t>& cardinalities() const { return cards_; }
  const std::vector<double>& probs() const { return probs_; }

  // Multi-index of the outcome at flat position `flat`.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> states) const;

  // Marginal over `vars`, kept in the given order.
  JointTable marginal(std::span<const std::size_t> vars) const;

 private:
  std::vector<std::size_t> cards_;
  std::vector<double> probs_;
};

// -sum p log p, 0 log 0 = 0. Throws on negative mass or |sum - 1| > 1e-9.
double entropy(std::span<const double> dist);

double joint_entropy(const JointTable& t);
double entropy_of(const JointTable& t, std::span<const std::size_t> vars);

// I(X1 : X2) = H(X1) + H(X2) - H(X1, X2). Requires arity 2.
double mutual_information(const JointTable& t);
// I(X_A : X_B) for disjoint variable groups.
double mutual_information(const JointTable& t, std::span<const std::size_t> a,
                          std::span<const std::size_t> b);

// sum_i H(X_i) - H(X).
double total_correlation(const JointTable& t);
// D_KL(p(x) || prod_i p(x_i)). Throws if p > 0 where the product is 0.
double total_correlation_kl(const JointTable& t);
// TC(X_G | Y) with Y the last variable.
double conditional_total_correlation(const JointTable& t);

// TC(X_G) - TC(X_G | Y), Y the last variable.
double tc_reduction(const JointTable& t);
// sum_i I(X_i : Y) - I(X_G : Y), Y the last variable.
double tc_reduction_mi(const JointTable& t);

}  // namespace corex::info
