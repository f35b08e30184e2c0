#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "dbs/error.hpp"
#include "dbs/policy/policy.hpp"
#include "dbs/policy/t3p.hpp"

namespace dbs::policy {

inline constexpr std::array<std::string_view, 7> kAlgorithms{
    "t3p", "eps-greedy", "ucb", "bayes-ucb", "discounted-ucb", "thompson", "random"};

/// Algorithm tag plus the constants of every algorithm; only the tagged
/// algorithm's fields are read.
struct PolicyParams {
  std::string algorithm = "t3p";
  T3PConfig t3p;
  double eps = 0.4;
  double ucb_c = 0.05;
  double bayes_ucb_c = 1.0;
  double discounted_ucb_c = 0.35;
  double discount = 0.99;
  GaussianPrior prior;

  friend bool operator==(const PolicyParams& a, const PolicyParams& b) {
    return a.algorithm == b.algorithm && a.t3p == b.t3p && a.eps == b.eps && a.ucb_c == b.ucb_c &&
           a.bayes_ucb_c == b.bayes_ucb_c && a.discounted_ucb_c == b.discounted_ucb_c &&
           a.discount == b.discount && a.prior.mu0 == b.prior.mu0 && a.prior.sigma0_sq == b.prior.sigma0_sq;
  }
};

inline bool is_known_algorithm(std::string_view name) {
  for (auto a : kAlgorithms) {
    if (a == name) return true;
  }
  return false;
}

inline std::unique_ptr<Policy> make_policy(const PolicyParams& p, std::size_t arms, std::uint64_t seed) {
  const auto& a = p.algorithm;
  if (a == "t3p") return std::make_unique<T3PPolicy>(arms, p.t3p, seed);
  if (a == "eps-greedy") return std::make_unique<EpsGreedyPolicy>(arms, p.eps, seed);
  if (a == "ucb") return std::make_unique<UcbPolicy>(arms, p.ucb_c);
  if (a == "bayes-ucb") return std::make_unique<BayesUcbPolicy>(arms, p.bayes_ucb_c, p.prior);
  if (a == "discounted-ucb") return std::make_unique<DiscountedUcbPolicy>(arms, p.discounted_ucb_c, p.discount);
  if (a == "thompson") return std::make_unique<ThompsonPolicy>(arms, p.prior, seed);
  if (a == "random") return std::make_unique<UniformRandomPolicy>(arms, seed);
  throw Error(ErrorKind::ConfigError, "unknown policy '" + a + "'");
}

}  // namespace dbs::policy
