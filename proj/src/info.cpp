#include "corex/info.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "corex/error.hpp"

namespace corex::info {

namespace {

std::vector<std::size_t> iota_vars(std::size_t n, std::size_t start = 0) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), start);
  return v;
}

}  // namespace

JointTable::JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probs)
    : cards_(std::move(cardinalities)), probs_(std::move(probs)) {
  if (cards_.empty() || cards_.size() > kMaxArity) {
    throw InvalidArgument("joint table arity must be in [1, " + std::to_string(kMaxArity) + "]");
  }
  std::size_t cells = 1;
  for (auto c : cards_) {
    if (c == 0) throw InvalidArgument("joint table: zero cardinality");
    cells *= c;
  }
  if (probs_.size() != cells) throw InvalidArgument("joint table: mass count != outcome count");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidArgument("joint table: negative or NaN mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("joint table: masses do not sum to 1");
}

std::vector<std::size_t> JointTable::unflatten(std::size_t flat) const {
  std::vector<std::size_t> s(cards_.size());
  for (std::size_t k = cards_.size(); k-- > 0;) {
    s[k] = flat % cards_[k];
    flat /= cards_[k];
  }
  return s;
}

std::size_t JointTable::flatten(std::span<const std::size_t> states) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < cards_.size(); ++k) flat = flat * cards_[k] + states[k];
  return flat;
}

JointTable JointTable::marginal(std::span<const std::size_t> vars) const {
  std::vector<std::size_t> cards;
  for (auto v : vars) {
    if (v >= cards_.size()) throw InvalidArgument("marginal: variable index out of range");
    cards.push_back(cards_[v]);
  }
  std::size_t cells = 1;
  for (auto c : cards) cells *= c;
  std::vector<double> out(cells, 0.0);
  for (std::size_t f = 0; f < probs_.size(); ++f) {
    auto s = unflatten(f);
    std::size_t g = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) g = g * cards[k] + s[vars[k]];
    out[g] += probs_[f];
  }
  // Renormalize away accumulated rounding so the result passes validation.
  double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& p : out) p /= sum;
  return JointTable(std::move(cards), std::move(out));
}

double entropy(std::span<const double> dist) {
  double sum = 0.0, h = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw InvalidArgument("invalid distribution: negative or NaN mass");
    sum += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("invalid distribution: masses sum to " +
                                                        std::to_string(sum));
  return h;
}

double joint_entropy(const JointTable& t) { return entropy(t.probs()); }

double entropy_of(const JointTable& t, std::span<const std::size_t> vars) {
  return entropy(t.marginal(vars).probs());
}

double mutual_information(const JointTable& t) {
  if (t.arity() != 2) throw InvalidArgument("mutual_information: table must have arity 2");
  const std::size_t a[] = {0}, b[] = {1};
  return mutual_information(t, a, b);
}

double mutual_information(const JointTable& t, std::span<const std::size_t> a,
                          std::span<const std::size_t> b) {
  std::vector<std::size_t> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy_of(t, a) + entropy_of(t, b) - entropy_of(t, ab);
}

double total_correlation(const JointTable& t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const std::size_t v[] = {i};
    sum += entropy_of(t, v);
  }
  return sum - joint_entropy(t);
}

double total_correlation_kl(const JointTable& t) {
  std::vector<std::vector<double>> margins;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const std::size_t v[] = {i};
    margins.push_back(t.marginal(v).probs());
  }
  double kl = 0.0;
  const auto& p = t.probs();
  for (std::size_t f = 0; f < p.size(); ++f) {
    if (p[f] == 0.0) continue;
    auto s = t.unflatten(f);
    double q = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) q *= margins[i][s[i]];
    if (q == 0.0) throw InvalidArgument("total_correlation_kl: positive mass where product is 0");
    kl += p[f] * std::log(p[f] / q);
  }
  return kl;
}

double conditional_total_correlation(const JointTable& t) {
  if (t.arity() < 2) throw InvalidArgument("conditional TC needs at least one X and a Y");
  const std::size_t y = t.arity() - 1;
  const std::size_t yv[] = {y};
  const double hy = entropy_of(t, yv);
  double sum = 0.0;
  for (std::size_t i = 0; i < y; ++i) {
    const std::size_t v[] = {i, y};
    sum += entropy_of(t, v) - hy;
  }
  return sum - (joint_entropy(t) - hy);
}

double tc_reduction(const JointTable& t) {
  if (t.arity() < 2) throw InvalidArgument("tc_reduction needs at least one X and a Y");
  auto xs = iota_vars(t.arity() - 1);
  return total_correlation(t.marginal(xs)) - conditional_total_correlation(t);
}

double tc_reduction_mi(const JointTable& t) {
  if (t.arity() < 2) throw InvalidArgument("tc_reduction needs at least one X and a Y");
  const std::size_t y[] = {t.arity() - 1};
  auto xs = iota_vars(t.arity() - 1);
  double sum = 0.0;
  for (auto i : xs) {
    const std::size_t v[] = {i};
    sum += mutual_information(t, v, y);
  }
  return sum - mutual_information(t, xs, y);
}

}  // namespace corex::info
