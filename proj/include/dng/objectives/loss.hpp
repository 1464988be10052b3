#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/core/matrix.hpp"
#include "dng/ngram.hpp"

namespace dng {

// Objective value and its gradient with respect to the logits of a single
// example.
struct LossOutput {
  double value = 0.0;
  GradMatrix grad;
};

enum class Family { kCrossEntropy, kRewards, kMatches, kProbCount, kBagOfNgrams };

struct Objective {
  Family family = Family::kCrossEntropy;
  std::size_t order = 0;  // unused for cross-entropy

  bool operator==(const Objective&) const = default;
};

inline std::string family_name(Family f) {
  switch (f) {
    case Family::kCrossEntropy: return "ce";
    case Family::kRewards: return "rewards";
    case Family::kMatches: return "matches";
    case Family::kProbCount: return "pp";
    case Family::kBagOfNgrams: return "bon";
  }
  return "?";
}

inline std::string objective_name(const Objective& o) {
  if (o.family == Family::kCrossEntropy) return "ce";
  return family_name(o.family) + "-" + std::to_string(o.order);
}

// Every objective kind exercised by the verification suites: CE, rewards
// n=2..4, matches n=1..4, P-P2 and BoN n=2..4.
inline const std::vector<Objective>& verification_objectives() {
  static const std::vector<Objective> kinds = {
      {Family::kCrossEntropy, 0}, {Family::kRewards, 2},     {Family::kRewards, 3},
      {Family::kRewards, 4},      {Family::kMatches, 1},     {Family::kMatches, 2},
      {Family::kMatches, 3},      {Family::kMatches, 4},     {Family::kProbCount, 2},
      {Family::kBagOfNgrams, 2},  {Family::kBagOfNgrams, 3}, {Family::kBagOfNgrams, 4}};
  return kinds;
}

// Which terms are summed into the training target. CE plus n-gram rewards
// over {2..N} and CE plus n-gram matches over {1..N} are the two headline
// configurations; the baselines slot in the same way.
struct ObjectiveSpec {
  bool use_ce = true;
  std::set<std::size_t> rewards_orders;
  std::set<std::size_t> matches_orders;
  std::set<std::size_t> pp_orders;
  std::set<std::size_t> bon_orders;

  void validate() const {
    if (!use_ce && rewards_orders.empty() && matches_orders.empty() && pp_orders.empty() &&
        bon_orders.empty()) {
      throw InvalidInput("objective spec enables no terms");
    }
    for (std::size_t n : rewards_orders) {
      if (n < 2) throw InvalidInput("n-gram rewards requires n >= 2 (unigrams are excluded)");
    }
    for (const auto* orders : {&matches_orders, &pp_orders, &bon_orders}) {
      for (std::size_t n : *orders) {
        if (n < 1) throw InvalidInput("n-gram order must be >= 1");
      }
    }
  }

  // Enabled terms in their fixed evaluation order.
  std::vector<Objective> terms() const {
    std::vector<Objective> out;
    if (use_ce) out.push_back({Family::kCrossEntropy, 0});
    for (std::size_t n : rewards_orders) out.push_back({Family::kRewards, n});
    for (std::size_t n : matches_orders) out.push_back({Family::kMatches, n});
    for (std::size_t n : pp_orders) out.push_back({Family::kProbCount, n});
    for (std::size_t n : bon_orders) out.push_back({Family::kBagOfNgrams, n});
    return out;
  }
};

namespace detail {

inline void require_example(const LogitMatrix& logits, std::span<const TokenId> ref,
                            const char* where) {
  if (logits.rows() < 1 || logits.cols() < 2) {
    throw InvalidInput(std::string(where) + ": logits must be at least 1x2, got " +
                       logits.shape_string());
  }
  if (ref.size() != logits.rows()) {
    throw InvalidInput(std::string(where) + ": reference length " + std::to_string(ref.size()) +
                       " != logit rows " + std::to_string(logits.rows()));
  }
  for (TokenId t : ref) {
    if (t >= logits.cols()) {
      throw InvalidInput(std::string(where) + ": token " + std::to_string(t) +
                         " outside vocabulary of " + std::to_string(logits.cols()));
    }
  }
}

inline double product_except(std::span<const double> factors, std::size_t skip) {
  double p = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i != skip) p *= factors[i];
  }
  return p;
}

}  // namespace detail

}  // namespace dng
