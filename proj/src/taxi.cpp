#include "normsim/taxi.hpp"

#include <algorithm>

#include "normsim/errors.hpp"

namespace normsim {

TaxiWorld::TaxiWorld(Runtime& runtime, TaxiWorldConfig config,
                     std::uint64_t seed)
    : runtime_(runtime), config_(std::move(config)), prng_state_(seed) {}

std::uint64_t TaxiWorld::next_random() {
  // splitmix64; the whole arrival stream is a pure function of the seed.
  prng_state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t x = prng_state_;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void TaxiWorld::add_driver(const AgentId& id, double capacity, bool greedy) {
  drivers_[id] = Driver{capacity, greedy, 0.0, false};
  queue_.push_back(id);
  sync_all();
}

std::size_t TaxiWorld::queue_position(const AgentId& id) const {
  for (std::size_t i = 0; i < queue_.size(); ++i)
    if (queue_[i] == id) return i + 1;
  return 0;
}

double TaxiWorld::capacity(const AgentId& id) const {
  return drivers_.at(id).capacity;
}
bool TaxiWorld::greedy(const AgentId& id) const {
  return drivers_.at(id).greedy;
}
double TaxiWorld::hours(const AgentId& id) const {
  return drivers_.at(id).hours;
}
bool TaxiWorld::on_break(const AgentId& id) const {
  return drivers_.at(id).on_break;
}

bool TaxiWorld::draw_arrival() {
  if (script_index_ < config_.scripted_arrivals.size()) {
    staged_arrival_ = config_.scripted_arrivals[script_index_++];
    return staged_arrival_ > 0;
  }
  if (!config_.random_arrivals) return false;
  staged_arrival_ = 1 + next_random() % 6;
  return true;
}

void TaxiWorld::commit_arrival(const AgentId&) {
  waiting_ = staged_arrival_;
  staged_arrival_ = 0;
  sync_all();
}

void TaxiWorld::serve(const AgentId& id) {
  waiting_ = 0;
  remove_from_queue(id);
  queue_.push_back(id);
  drivers_.at(id).hours += 1.0;
  sync_all();
}

void TaxiWorld::rejoin_tail(const AgentId& id) {
  remove_from_queue(id);
  queue_.push_back(id);
  sync_all();
}

void TaxiWorld::start_break(const AgentId& id) {
  remove_from_queue(id);
  drivers_.at(id).on_break = true;
  sync_all();
}

void TaxiWorld::end_break(const AgentId& id) {
  Driver& driver = drivers_.at(id);
  driver.on_break = false;
  driver.hours = 0.0;
  remove_from_queue(id);
  queue_.push_back(id);
  sync_all();
}

void TaxiWorld::remove_from_queue(const AgentId& id) {
  queue_.erase(std::remove(queue_.begin(), queue_.end(), id), queue_.end());
}

void TaxiWorld::sync_all() {
  sync_environment();
  for (const auto& [id, driver] : drivers_) sync_driver(id);
}

void TaxiWorld::sync_environment() {
  Environment& env = runtime_.environment();
  env.set_fact("NumClientsWaiting", Value(static_cast<double>(waiting_)));
  env.set_fact("numTaxisQueue", Value(static_cast<double>(queue_.size())));
}

void TaxiWorld::sync_driver(const AgentId& id) {
  Agent* agent = runtime_.find_agent(id);
  if (!agent) return;
  const Driver& driver = drivers_.at(id);
  Bindings& facts = agent->facts();
  facts.insert_or_assign("taxiCapacity", Value(driver.capacity));
  facts.insert_or_assign(
      "driverQueuePos", Value(static_cast<double>(queue_position(id))));
  facts.insert_or_assign("hoursWorked", Value(driver.hours));
  facts.insert_or_assign("onBreak", Value(driver.on_break));
}

namespace {

constexpr double kMaxHoursBeforeBreak = 8.0;

Behavior make_driver_behavior(std::shared_ptr<TaxiWorld> world) {
  Behavior behavior;
  behavior.kind = BehaviorKind::Cyclic;
  behavior.step = [world](BehaviorContext& ctx) {
    const AgentId& id = ctx.self.id();
    if (world->on_break(id)) {
      ctx.self.normative_action_process({"EndBreak", DomainId{}, {}}, 0.0);
      return;
    }

    const std::uint64_t group = world->waiting();
    const std::size_t pos = world->queue_position(id);
    const double payoff =
        world->reward_per_customer() * static_cast<double>(group);

    if (world->hours(id) >= kMaxHoursBeforeBreak) {
      // The pickup attempt is expected to bounce off the work-limit norm;
      // the driver then clocks out.
      if (pos == 1 && group > 0)
        ctx.self.normative_action_process({"PickClients", DomainId{"PICKING"}, {}},
                                          payoff);
      ctx.self.normative_action_process({"StartBreak", DomainId{}, {}}, 0.0);
      return;
    }

    if (pos == 1 && group > 0) {
      const EventRecord record = ctx.self.normative_action_process(
          {"PickClients", DomainId{"PICKING"}, {}}, payoff);
      if (record.decision == Decision::Abstain)
        ctx.self.normative_action_process({"Rejoin", DomainId{}, {}}, 0.0);
      return;
    }

    if (pos > 1 && group > 0 && world->greedy(id) &&
        static_cast<double>(group) <= world->capacity(id)) {
      ctx.self.normative_action_process({"Queue", DomainId{"QUEUE"}, {}},
                                        payoff);
    }
  };
  return behavior;
}

Behavior make_station_behavior(std::shared_ptr<TaxiWorld> world) {
  Behavior behavior;
  behavior.kind = BehaviorKind::Cyclic;
  behavior.step = [world](BehaviorContext& ctx) {
    if (world->waiting() > 0) return;
    if (!world->draw_arrival()) return;
    ctx.self.normative_action_process({"Arrive", DomainId{}, {}}, 0.0);
  };
  return behavior;
}

}  // namespace

bool is_known_behavior(const std::string& name) {
  return name == "taxi_driver" || name == "taxi_station";
}

std::vector<std::string> known_behaviors() {
  return {"taxi_driver", "taxi_station"};
}

std::vector<Behavior> make_behaviors(const std::string& name,
                                     std::shared_ptr<TaxiWorld> world,
                                     const AgentSpec&) {
  if (name == "taxi_driver") return {make_driver_behavior(std::move(world))};
  if (name == "taxi_station") return {make_station_behavior(std::move(world))};
  throw FormatError("unknown behavior '" + name + "'");
}

void register_taxi_effects(Runtime& runtime, std::shared_ptr<TaxiWorld> world) {
  Environment& env = runtime.environment();
  env.register_effect("Arrive", [world](Environment&, const EventRecord& r) {
    world->commit_arrival(r.agent);
  });
  env.register_effect("PickClients",
                      [world](Environment&, const EventRecord& r) {
                        world->serve(r.agent);
                      });
  env.register_effect("Queue", [world](Environment&, const EventRecord& r) {
    world->serve(r.agent);
  });
  env.register_effect("Rejoin", [world](Environment&, const EventRecord& r) {
    world->rejoin_tail(r.agent);
  });
  env.register_effect("StartBreak",
                      [world](Environment&, const EventRecord& r) {
                        world->start_break(r.agent);
                      });
  env.register_effect("EndBreak", [world](Environment&, const EventRecord& r) {
    world->end_break(r.agent);
  });
}

}  // namespace normsim
