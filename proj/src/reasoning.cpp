#include "normsim/reasoning.hpp"

namespace normsim {

const char* to_string(Decision d) {
  return d == Decision::Perform ? "PERFORM" : "ABSTAIN";
}

ReasoningOutcome default_reason(const NormativeResponse& response,
                                double expected_action_utility) {
  ReasoningOutcome outcome;
  outcome.response = response;
  outcome.expected_action_utility = expected_action_utility;
  outcome.net_utility_if_performed =
      expected_action_utility + response.total_penalty;

  switch (response.status) {
    case RegulatoryStatus::Inviolable:
      outcome.decision = Decision::Abstain;
      break;
    case RegulatoryStatus::Forbidden:
      outcome.decision = outcome.net_utility_if_performed > 0.0
                             ? Decision::Perform
                             : Decision::Abstain;
      break;
    case RegulatoryStatus::Allowed:
    case RegulatoryStatus::NotRegulated:
      outcome.decision = Decision::Perform;
      break;
  }
  return outcome;
}

Reasoner make_default_reasoner() {
  return [](const NormativeResponse& response, double expected) {
    return default_reason(response, expected);
  };
}

}  // namespace normsim
