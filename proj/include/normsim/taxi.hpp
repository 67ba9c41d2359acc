#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "normsim/runtime.hpp"
#include "normsim/scenario.hpp"

namespace normsim {

// Shared taxi-rank state. All mutation goes through the effect methods,
// which keep the evaluation facts in sync: NumClientsWaiting and
// numTaxisQueue live in the environment, taxiCapacity, driverQueuePos,
// hoursWorked and onBreak on each driver agent. Queue front is position 1.
class TaxiWorld {
 public:
  TaxiWorld(Runtime& runtime, TaxiWorldConfig config, std::uint64_t seed);

  // Appends the driver to the queue tail and seeds its facts.
  void add_driver(const AgentId& id, double capacity, bool greedy);

  std::uint64_t waiting() const { return waiting_; }
  // 1-based queue position, 0 when out of the queue.
  std::size_t queue_position(const AgentId& id) const;
  double capacity(const AgentId& id) const;
  bool greedy(const AgentId& id) const;
  double hours(const AgentId& id) const;
  bool on_break(const AgentId& id) const;
  double reward_per_customer() const { return config_.reward_per_customer; }
  const std::vector<AgentId>& queue() const { return queue_; }

  // Stages the next group when none is waiting: scripted sizes first, then
  // the splitmix64 stream if random arrivals are enabled. False when there
  // is nothing to draw.
  bool draw_arrival();

  // Effect handlers.
  void commit_arrival(const AgentId&);           // Arrive
  void serve(const AgentId& id);                 // PickClients, Queue
  void rejoin_tail(const AgentId& id);           // Rejoin
  void start_break(const AgentId& id);           // StartBreak
  void end_break(const AgentId& id);             // EndBreak

  // Pushes every fact into the runtime; called once after setup.
  void sync_all();

 private:
  struct Driver {
    double capacity = 4.0;
    bool greedy = false;
    double hours = 0.0;
    bool on_break = false;
  };

  std::uint64_t next_random();
  void remove_from_queue(const AgentId& id);
  void sync_environment();
  void sync_driver(const AgentId& id);

  Runtime& runtime_;
  TaxiWorldConfig config_;
  std::vector<AgentId> queue_;
  std::map<AgentId, Driver> drivers_;
  std::uint64_t waiting_ = 0;
  std::uint64_t staged_arrival_ = 0;
  std::size_t script_index_ = 0;
  std::uint64_t prng_state_ = 0;
};

// Registry of behavior implementations scenario agents can name.
bool is_known_behavior(const std::string& name);
std::vector<std::string> known_behaviors();

// Builds the agent's behaviors; throws FormatError on an unknown name.
std::vector<Behavior> make_behaviors(const std::string& name,
                                     std::shared_ptr<TaxiWorld> world,
                                     const AgentSpec& spec);

// Registers the taxi action effects on the runtime's environment.
void register_taxi_effects(Runtime& runtime, std::shared_ptr<TaxiWorld> world);

}  // namespace normsim
