#pragma once

#include <functional>

#include "normsim/norm.hpp"

namespace normsim {

enum class Decision { Perform, Abstain };

const char* to_string(Decision d);

// Output of the normative reasoning engine: perform or abstain, plus the
// figures the decision was based on.
struct ReasoningOutcome {
  Decision decision = Decision::Abstain;
  NormativeResponse response;
  double expected_action_utility = 0.0;
  // expected_action_utility + response.total_penalty (penalty is <= 0)
  double net_utility_if_performed = 0.0;
};

// Pluggable decision component; must be a pure function of its arguments.
using Reasoner =
    std::function<ReasoningOutcome(const NormativeResponse&, double)>;

// Inviolable -> abstain, whatever the stakes. Forbidden -> perform iff the
// action still pays after penalties (ties abstain). Allowed/NotRegulated ->
// perform.
ReasoningOutcome default_reason(const NormativeResponse& response,
                                double expected_action_utility);

Reasoner make_default_reasoner();

}  // namespace normsim
