#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "normsim/errors.hpp"
#include "normsim/runtime.hpp"

using namespace normsim;

namespace {

// Prohibition org with two norms over fact x:
//   soft: complies while x < 5, reward 1, penalty -2
//   hard: complies while x < 9, penalty -1, inviolable
// plus registered action "Act".
std::shared_ptr<Organization> taxi_free_org() {
  StateSchema schema;
  schema.identifiers["x"] = ValueTag::Number;
  auto org = Organization::create("org", EngineMode::Prohibition,
                                  {RoleId{"DRIVER"}}, schema);
  Norm soft;
  soft.id = "soft";
  soft.condition = parse_source("x < 5");
  soft.reward = 1.0;
  soft.penalty = -2.0;
  soft.inviolable = false;
  org->add_norm(soft);

  Norm hard;
  hard.id = "hard";
  hard.condition = parse_source("x < 9");
  hard.penalty = -1.0;
  hard.inviolable = true;
  org->add_norm(hard);

  org->register_action("Act", DomainId{});
  return org;
}

Agent& spawn(Runtime& runtime, const std::shared_ptr<Organization>& org,
             const AgentId& id, std::vector<Behavior> behaviors = {}) {
  return runtime.spawn_agent(id, std::move(behaviors),
                             org->join(id, {RoleId{"DRIVER"}}));
}

const ActionDescriptor kAct{"Act", DomainId{}, {}};
const ActionDescriptor kFree{"Free", DomainId{}, {}};

}  // namespace

TEST_CASE("event records serialize with a fixed key order") {
  EventRecord r;
  r.tick = 3;
  r.agent = "a1";
  r.action = "Act";
  r.status = RegulatoryStatus::Forbidden;
  r.decision = Decision::Perform;
  r.violated = {"n1"};
  r.complied = {"n2"};
  r.utility_delta = 5.0;
  CHECK(to_json_line(r) ==
        R"({"tick":3,"agent":"a1","action":"Act","status":"FORBIDDEN",)"
        R"("decision":"PERFORM","violated":["n1"],"complied":["n2"],)"
        R"("utility_delta":5.0})");

  EventRecord plain;
  plain.agent = "b";
  plain.action = "Idle";
  CHECK(to_json_line(plain) ==
        R"({"tick":0,"agent":"b","action":"Idle","status":"NOT_REGULATED",)"
        R"("decision":"PERFORM","violated":[],"complied":[],)"
        R"("utility_delta":0.0})");
}

TEST_CASE("apply_outcome credits utility, gates effects on Perform") {
  Environment env;
  int effect_runs = 0;
  env.register_effect("Act", [&](Environment&, const EventRecord&) {
    ++effect_runs;
  });

  EventRecord performed;
  performed.agent = "a";
  performed.action = "Act";
  performed.decision = Decision::Perform;
  performed.violated = {"n1", "n2"};
  performed.utility_delta = 2.5;
  env.apply_outcome(performed);
  CHECK(env.utility("a") == 2.5);
  CHECK(env.violation_count("n1") == 1);
  CHECK(env.violation_count("n2") == 1);
  CHECK(effect_runs == 1);

  EventRecord abstained = performed;
  abstained.decision = Decision::Abstain;
  abstained.utility_delta = 0.0;
  env.apply_outcome(abstained);
  // An abstention leaves the world untouched: no effect, no violation.
  CHECK(env.utility("a") == 2.5);
  CHECK(env.violation_count("n1") == 1);
  CHECK(effect_runs == 1);
}

TEST_CASE("spawn and send guard rails") {
  auto org = taxi_free_org();
  Runtime runtime;
  spawn(runtime, org, "a");
  CHECK_THROWS_AS(spawn(runtime, org, "a"), AlreadyMemberError);
  // Membership under a fresh id sidesteps the organization; the runtime
  // still rejects the duplicate agent id.
  CHECK_THROWS_AS(
      runtime.spawn_agent("a", {}, org->join("a2", {RoleId{"DRIVER"}})),
      DuplicateAgentError);
  CHECK_THROWS_AS(runtime.send(Message{"a", "ghost", "ping", {}, 0}),
                  UnknownAgentError);
  CHECK(runtime.environment().utility("a") == 0.0);
}

TEST_CASE("messages arrive at the start of the next tick, per-sender FIFO") {
  auto org = taxi_free_org();
  Runtime runtime;
  std::vector<std::pair<std::uint64_t, std::string>> seen;
  std::uint64_t received = 0;

  Behavior sender{BehaviorKind::Cyclic, 0, [&](BehaviorContext& ctx) {
                    if (ctx.tick >= 5) return;
                    ctx.runtime.send(
                        {"a", "b", "m" + std::to_string(ctx.tick) + ".1", {},
                         0});
                    ctx.runtime.send(
                        {"a", "b", "m" + std::to_string(ctx.tick) + ".2", {},
                         0});
                  }};
  Behavior receiver{BehaviorKind::Cyclic, 0, [&](BehaviorContext& ctx) {
                      auto& box = ctx.self.mailbox();
                      while (!box.empty()) {
                        const Message& m = box.front();
                        CHECK(m.sent_at + 1 == ctx.tick);
                        seen.emplace_back(ctx.tick, m.performative);
                        ++received;
                        box.pop_front();
                      }
                    }};
  spawn(runtime, org, "a", {sender});
  spawn(runtime, org, "b", {receiver});

  for (int i = 0; i < 6; ++i) runtime.tick();

  // 5 ticks of sending, each delivered one tick later, order preserved.
  CHECK(received == 10);
  REQUIRE(seen.size() == 10);
  CHECK(seen.front() == std::pair<std::uint64_t, std::string>{1, "m0.1"});
  CHECK(seen[1].second == "m0.2");
  CHECK(seen.back() == std::pair<std::uint64_t, std::string>{5, "m4.2"});
  for (std::size_t i = 0; i + 1 < seen.size(); i += 2)
    CHECK(seen[i].first == seen[i + 1].first);
}

TEST_CASE("behavior scheduling: sorted agents, declaration order, kinds") {
  auto org = taxi_free_org();
  Runtime runtime;
  std::vector<std::string> trace;
  auto mark = [&](std::string tag) {
    return Behavior{BehaviorKind::Cyclic, 0,
                    [&trace, tag](BehaviorContext&) { trace.push_back(tag); }};
  };

  spawn(runtime, org, "b",
        {Behavior{BehaviorKind::OneShot, 0,
                  [&](BehaviorContext&) { trace.push_back("b.once"); }}});
  Behavior a1 = mark("a1");
  Behavior a2 = mark("a2");
  spawn(runtime, org, "a", {a1, a2});
  spawn(runtime, org, "c",
        {Behavior{BehaviorKind::Periodic, 2,
                  [&](BehaviorContext&) { trace.push_back("c.p2"); }},
         Behavior{BehaviorKind::Periodic, 0,
                  [&](BehaviorContext&) { trace.push_back("c.never"); }}});

  for (int i = 0; i < 4; ++i) runtime.tick();

  const std::vector<std::string> want{
      "a1", "a2", "b.once", "c.p2",  // tick 0, period 2 fires at 0
      "a1", "a2",                    // tick 1
      "a1", "a2", "c.p2",            // tick 2
      "a1", "a2",                    // tick 3
  };
  CHECK(trace == want);
  CHECK(runtime.now() == 4);
}

TEST_CASE("normative action process") {
  auto org = taxi_free_org();
  Runtime runtime;
  Agent& agent = spawn(runtime, org, "a");
  Environment& env = runtime.environment();

  SUBCASE("unregulated actions pass straight through") {
    const EventRecord r = agent.normative_action_process(kFree, 4.0);
    CHECK(r.status == RegulatoryStatus::NotRegulated);
    CHECK(r.decision == Decision::Perform);
    CHECK(r.violated.empty());
    CHECK(r.complied.empty());
    CHECK(r.utility_delta == 4.0);
    CHECK(env.utility("a") == 4.0);
  }

  SUBCASE("allowed actions collect rewards") {
    env.set_fact("x", Value(1.0));
    const EventRecord r = agent.normative_action_process(kAct, 4.0);
    CHECK(r.status == RegulatoryStatus::Allowed);
    CHECK(r.decision == Decision::Perform);
    CHECK(r.complied == std::vector<std::string>{"soft", "hard"});
    CHECK(r.utility_delta == 5.0);  // 4 expected + 1 reward
  }

  SUBCASE("forbidden actions perform only when they still pay") {
    env.set_fact("x", Value(6.0));  // violates soft (-2), complies with hard
    const EventRecord paying = agent.normative_action_process(kAct, 5.0);
    CHECK(paying.status == RegulatoryStatus::Forbidden);
    CHECK(paying.decision == Decision::Perform);
    CHECK(paying.violated == std::vector<std::string>{"soft"});
    CHECK(paying.utility_delta == 3.0);  // 5 expected - 2 penalty
    CHECK(env.violation_count("soft") == 1);

    // Net exactly zero abstains.
    const EventRecord tie = agent.normative_action_process(kAct, 2.0);
    CHECK(tie.decision == Decision::Abstain);
    CHECK(tie.utility_delta == 0.0);
    CHECK(env.violation_count("soft") == 1);
    CHECK(agent.backpack().violations() == 1);
    CHECK(agent.backpack().abstentions() == 1);
  }

  SUBCASE("inviolable norms abstain regardless of the stakes") {
    env.set_fact("x", Value(20.0));
    const EventRecord r = agent.normative_action_process(kAct, 1e9);
    CHECK(r.status == RegulatoryStatus::Inviolable);
    CHECK(r.decision == Decision::Abstain);
    CHECK(r.utility_delta == 0.0);
    CHECK(env.violation_count("hard") == 0);
  }

  SUBCASE("agent facts shadow environment facts") {
    env.set_fact("x", Value(1.0));
    agent.facts().insert_or_assign("x", Value(20.0));
    const EventRecord r = agent.normative_action_process(kAct, 1.0);
    CHECK(r.status == RegulatoryStatus::Inviolable);
  }

  SUBCASE("an unevaluable norm fails closed") {
    // No fact x anywhere: the check raises, the record abstains.
    const EventRecord r = agent.normative_action_process(kAct, 100.0);
    CHECK(r.status == RegulatoryStatus::Forbidden);
    CHECK(r.decision == Decision::Abstain);
    CHECK(r.violated.empty());
    CHECK(r.complied.empty());
    CHECK(r.utility_delta == 0.0);
    CHECK(agent.backpack().abstentions() == 1);
    CHECK(agent.backpack().checks() == 1);
    CHECK(runtime.event_log().size() == 1);
  }

  SUBCASE("checks counter matches record count") {
    env.set_fact("x", Value(1.0));
    agent.normative_action_process(kAct, 1.0);
    agent.normative_action_process(kAct, 1.0);
    agent.normative_action_process(kFree, 1.0);  // unregulated still checks
    CHECK(agent.backpack().checks() == 3);
    CHECK(runtime.event_log().size() == 3);
  }
}

TEST_CASE("tick returns exactly this tick's records") {
  auto org = taxi_free_org();
  Runtime runtime;
  Behavior act{BehaviorKind::Cyclic, 0, [&](BehaviorContext& ctx) {
                 if (ctx.tick % 2 == 0)
                   ctx.self.normative_action_process(kFree, 1.0);
               }};
  spawn(runtime, org, "a", {act});
  CHECK(runtime.tick().size() == 1);
  CHECK(runtime.tick().empty());
  CHECK(runtime.tick().size() == 1);
  CHECK(runtime.event_log().size() == 2);
}

TEST_CASE("identical runs log identical bytes") {
  auto run_once = [] {
    auto org = taxi_free_org();
    Runtime runtime;
    Behavior busy{BehaviorKind::Cyclic, 0, [](BehaviorContext& ctx) {
                    ctx.environment.set_fact(
                        "x", Value(static_cast<double>(ctx.tick % 12)));
                    ctx.self.normative_action_process(
                        kAct, static_cast<double>(ctx.tick % 7));
                  }};
    spawn(runtime, org, "a", {busy});
    spawn(runtime, org, "b", {busy});
    std::string out;
    for (int i = 0; i < 50; ++i)
      for (const EventRecord& r : runtime.tick()) out += to_json_line(r) + "\n";
    return out;
  };
  const std::string first = run_once();
  const std::string second = run_once();
  CHECK(first == second);
  CHECK(!first.empty());
}
