#include "normsim/runtime.hpp"

#include "json.hpp"
#include "normsim/errors.hpp"

namespace normsim {

std::string to_json_line(const EventRecord& record) {
  nlohmann::ordered_json j;
  j["tick"] = record.tick;
  j["agent"] = record.agent;
  j["action"] = record.action;
  j["status"] = to_string(record.status);
  j["decision"] = to_string(record.decision);
  j["violated"] = record.violated;
  j["complied"] = record.complied;
  j["utility_delta"] = record.utility_delta;
  return j.dump();
}

void Environment::set_fact(const std::string& name, Value value) {
  facts_.insert_or_assign(name, std::move(value));
}

void Environment::erase_fact(const std::string& name) { facts_.erase(name); }

void Environment::register_effect(const std::string& action_name,
                                  EffectFn effect) {
  effects_[action_name] = std::move(effect);
}

void Environment::apply_outcome(const EventRecord& record) {
  utility_[record.agent] += record.utility_delta;
  if (record.decision != Decision::Perform) return;
  for (const std::string& norm_id : record.violated) ++violations_[norm_id];
  auto it = effects_.find(record.action);
  if (it != effects_.end()) it->second(*this, record);
}

double Environment::utility(const AgentId& agent) const {
  auto it = utility_.find(agent);
  return it == utility_.end() ? 0.0 : it->second;
}

void Environment::init_utility_account(const AgentId& agent) {
  utility_.emplace(agent, 0.0);
}

std::uint64_t Environment::violation_count(const std::string& norm_id) const {
  auto it = violations_.find(norm_id);
  return it == violations_.end() ? 0 : it->second;
}

Agent::Agent(Runtime& runtime, AgentId id, std::vector<Behavior> behaviors,
             NormativeBackpack backpack)
    : runtime_(runtime),
      id_(std::move(id)),
      behaviors_(std::move(behaviors)),
      backpack_(std::move(backpack)),
      one_shot_done_(behaviors_.size(), false) {}

EvaluationContext Agent::make_context() const {
  return EvaluationContext(&facts_, &runtime_.env_.facts(),
                           &runtime_.functions_);
}

EventRecord Agent::normative_action_process(const ActionDescriptor& action,
                                            double expected_action_utility) {
  EventRecord record;
  record.tick = runtime_.tick_;
  record.agent = id_;
  record.action = action.name;

  try {
    const NormativeResponse response = backpack_.check(action, make_context());
    const ReasoningOutcome outcome =
        backpack_.reasoner()(response, expected_action_utility);
    record.status = response.status;
    record.decision = outcome.decision;
    record.violated = response.forbidding;
    record.complied = response.allowing;
    if (outcome.decision == Decision::Perform)
      record.utility_delta = expected_action_utility + response.total_reward +
                             response.total_penalty;
    backpack_.note_outcome(outcome.decision, !response.forbidding.empty());
  } catch (const EvaluationError&) {
    // Fail closed: an unevaluable norm blocks the action, it never waves
    // it through.
    record.status = RegulatoryStatus::Forbidden;
    record.decision = Decision::Abstain;
    record.violated.clear();
    record.complied.clear();
    record.utility_delta = 0.0;
    backpack_.note_outcome(Decision::Abstain, false);
  }

  runtime_.log_.push_back(record);
  runtime_.env_.apply_outcome(record);
  return record;
}

Runtime::Runtime() = default;

Agent& Runtime::spawn_agent(AgentId id, std::vector<Behavior> behaviors,
                            NormativeBackpack backpack) {
  if (agents_.count(id))
    throw DuplicateAgentError("agent '" + id + "' already spawned");
  env_.init_utility_account(id);
  auto agent = std::make_unique<Agent>(*this, id, std::move(behaviors),
                                       std::move(backpack));
  Agent& ref = *agent;
  agents_.emplace(std::move(id), std::move(agent));
  return ref;
}

void Runtime::send(Message msg) {
  auto it = agents_.find(msg.to);
  if (it == agents_.end())
    throw UnknownAgentError("no agent '" + msg.to + "'");
  msg.sent_at = tick_;
  it->second->pending_.push_back(std::move(msg));
}

std::vector<EventRecord> Runtime::tick() {
  const std::uint64_t current = tick_;
  const std::size_t log_start = log_.size();

  for (auto& [id, agent] : agents_) {
    while (!agent->pending_.empty()) {
      agent->mailbox_.push_back(std::move(agent->pending_.front()));
      agent->pending_.pop_front();
    }
  }

  for (auto& [id, agent] : agents_) {
    for (std::size_t i = 0; i < agent->behaviors_.size(); ++i) {
      Behavior& behavior = agent->behaviors_[i];
      bool due = false;
      switch (behavior.kind) {
        case BehaviorKind::OneShot:
          due = !agent->one_shot_done_[i];
          agent->one_shot_done_[i] = true;
          break;
        case BehaviorKind::Cyclic:
          due = true;
          break;
        case BehaviorKind::Periodic:
          due = behavior.period != 0 && current % behavior.period == 0;
          break;
      }
      if (!due || !behavior.step) continue;
      BehaviorContext ctx{*this, *agent, env_, current};
      behavior.step(ctx);
    }
  }

  tick_ = current + 1;
  return std::vector<EventRecord>(log_.begin() +
                                      static_cast<std::ptrdiff_t>(log_start),
                                  log_.end());
}

Agent* Runtime::find_agent(const AgentId& id) {
  auto it = agents_.find(id);
  return it == agents_.end() ? nullptr : it->second.get();
}

}  // namespace normsim
