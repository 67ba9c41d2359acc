#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "normsim/organization.hpp"
#include "normsim/reasoning.hpp"

namespace normsim {

struct Message {
  AgentId from;
  AgentId to;
  std::string performative;
  std::map<std::string, Value> body;
  std::uint64_t sent_at = 0;
};

enum class BehaviorKind { OneShot, Cyclic, Periodic };

class Agent;
class Runtime;
class Environment;

struct BehaviorContext {
  Runtime& runtime;
  Agent& self;
  Environment& environment;
  std::uint64_t tick;
};

// Independent task executing an agent's actions. OneShot runs exactly once,
// Periodic at ticks divisible by its period, Cyclic every tick.
struct Behavior {
  BehaviorKind kind = BehaviorKind::Cyclic;
  std::uint64_t period = 0;  // Periodic only
  std::function<void(BehaviorContext&)> step;
};

// One simulation-trace entry; the unit of the event log.
struct EventRecord {
  std::uint64_t tick = 0;
  AgentId agent;
  std::string action;
  RegulatoryStatus status = RegulatoryStatus::NotRegulated;
  Decision decision = Decision::Perform;
  std::vector<std::string> violated;
  std::vector<std::string> complied;
  double utility_delta = 0.0;
};

// One JSON line, keys in order: tick, agent, action, status, decision,
// violated, complied, utility_delta. This is the determinism surface.
std::string to_json_line(const EventRecord& record);

// World state shared by all agents: facts, per-action effect functions,
// utility accounts and per-norm violation counters. Mutations are
// serialized through apply_outcome and the single-threaded tick loop.
class Environment {
 public:
  using EffectFn = std::function<void(Environment&, const EventRecord&)>;

  void set_fact(const std::string& name, Value value);
  void erase_fact(const std::string& name);
  const Bindings& facts() const { return facts_; }

  void register_effect(const std::string& action_name, EffectFn effect);

  // Credits utility_delta, runs the action's effect when the decision was
  // Perform, and counts performed violations per norm id.
  void apply_outcome(const EventRecord& record);

  double utility(const AgentId& agent) const;
  void init_utility_account(const AgentId& agent);
  const std::map<AgentId, double>& utility_accounts() const {
    return utility_;
  }

  std::uint64_t violation_count(const std::string& norm_id) const;
  const std::map<std::string, std::uint64_t>& violation_counts() const {
    return violations_;
  }

 private:
  Bindings facts_;
  std::map<std::string, EffectFn> effects_;
  std::map<AgentId, double> utility_;
  std::map<std::string, std::uint64_t> violations_;
};

class Agent {
 public:
  Agent(Runtime& runtime, AgentId id, std::vector<Behavior> behaviors,
        NormativeBackpack backpack);

  const AgentId& id() const { return id_; }
  NormativeBackpack& backpack() { return backpack_; }
  const NormativeBackpack& backpack() const { return backpack_; }

  Bindings& facts() { return facts_; }
  const Bindings& facts() const { return facts_; }

  // Messages delivered at the start of the current tick, oldest first.
  std::deque<Message>& mailbox() { return mailbox_; }

  // Evaluation context layering this agent's facts over the environment's,
  // with the runtime's function registry.
  EvaluationContext make_context() const;

  // The normative action process: unregulated actions are performed
  // directly; regulated ones are checked through the backpack and decided
  // by its reasoner. The resulting record is appended to the runtime log
  // and applied to the environment, and the backpack counters advance. An
  // evaluation failure yields a Forbidden/Abstain record with empty norm
  // lists instead of aborting the agent.
  EventRecord normative_action_process(const ActionDescriptor& action,
                                       double expected_action_utility);

 private:
  friend class Runtime;

  Runtime& runtime_;
  AgentId id_;
  std::vector<Behavior> behaviors_;
  NormativeBackpack backpack_;
  Bindings facts_;
  std::deque<Message> mailbox_;   // visible to behaviors this tick
  std::deque<Message> pending_;   // delivered at the next tick start
  std::vector<bool> one_shot_done_;
};

// Deterministic logical-clock runtime. Agents step in sorted-id order;
// behaviors of one agent never run concurrently.
class Runtime {
 public:
  Runtime();

  Agent& spawn_agent(AgentId id, std::vector<Behavior> behaviors,
                     NormativeBackpack backpack);  // throws DuplicateAgentError

  // Enqueues for delivery at the start of the next tick; per-sender order
  // is preserved. Throws UnknownAgentError.
  void send(Message msg);

  // Delivers pending messages, runs due behaviors, advances the clock.
  // Returns this tick's event records in execution order.
  std::vector<EventRecord> tick();

  std::uint64_t now() const { return tick_; }
  Environment& environment() { return env_; }
  const Environment& environment() const { return env_; }
  FunctionRegistry& functions() { return functions_; }
  const FunctionRegistry& functions() const { return functions_; }

  Agent* find_agent(const AgentId& id);
  const std::vector<EventRecord>& event_log() const { return log_; }

 private:
  friend class Agent;

  std::uint64_t tick_ = 0;
  std::map<AgentId, std::unique_ptr<Agent>> agents_;  // sorted by id
  Environment env_;
  FunctionRegistry functions_;
  std::vector<EventRecord> log_;
};

}  // namespace normsim
