#include <string>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "normsim/engine.hpp"
#include "normsim/errors.hpp"

using namespace normsim;

namespace {

Norm simple_norm(std::string id, DeonticType type, const std::string& cond,
                 double reward = 0.0, double penalty = -1.0,
                 bool inviolable = false) {
  Norm norm;
  norm.id = std::move(id);
  norm.deontic_type = type;
  norm.condition = parse_source(cond);
  norm.reward = reward;
  norm.penalty = penalty;
  norm.inviolable = inviolable;
  norm.issuer = Issuer::Organization;
  return norm;
}

const ActionDescriptor kAction{"act", DomainId{}, {}};

}  // namespace

TEST_CASE("store rejects norms of the opposite deontic type") {
  NormStore store(EngineMode::Prohibition);
  store.add_norm(simple_norm("p1", DeonticType::Prohibition, "true"));
  try {
    store.add_norm(simple_norm("q1", DeonticType::Permission, "true"));
    FAIL("expected ModeConflictError");
  } catch (const ModeConflictError& e) {
    CHECK(std::string(e.what()).find("mode conflict") != std::string::npos);
  }
  CHECK(store.norms().size() == 1);
}

TEST_CASE("store rejects duplicate ids and keeps insertion order") {
  NormStore store(EngineMode::Prohibition);
  store.add_norm(simple_norm("a", DeonticType::Prohibition, "true"));
  store.add_norm(simple_norm("b", DeonticType::Prohibition, "true"));
  CHECK_THROWS_AS(
      store.add_norm(simple_norm("a", DeonticType::Prohibition, "false")),
      DuplicateIdError);
  REQUIRE(store.norms().size() == 2);
  CHECK(store.norms()[0].id == "a");
  CHECK(store.norms()[1].id == "b");
  CHECK(store.find("b") != nullptr);
  CHECK(store.find("zzz") == nullptr);
}

TEST_CASE("action registration is idempotent per domain") {
  NormStore store(EngineMode::Prohibition);
  store.register_action("Pick", DomainId{"PICKING"});
  CHECK_NOTHROW(store.register_action("Pick", DomainId{"PICKING"}));
  CHECK_THROWS_AS(store.register_action("Pick", DomainId{"QUEUE"}),
                  DuplicateActionError);
  CHECK(store.is_regulated("Pick"));
  CHECK_FALSE(store.is_regulated("Drop"));
}

TEST_CASE("filter_candidates preserves insertion order across indexes") {
  NormStore store(EngineMode::Prohibition);
  Norm a = simple_norm("a", DeonticType::Prohibition, "true");
  a.roles = std::set<RoleId>{RoleId{"R1"}};
  Norm b = simple_norm("b", DeonticType::Prohibition, "true");
  Norm c = simple_norm("c", DeonticType::Prohibition, "true");
  c.roles = std::set<RoleId>{RoleId{"R1"}, RoleId{"R2"}};
  Norm d = simple_norm("d", DeonticType::Prohibition, "true");
  d.domain = DomainId{"OTHER"};
  store.add_norm(a);
  store.add_norm(b);
  store.add_norm(c);
  store.add_norm(d);

  const auto picked = store.filter_candidates(kAction, {RoleId{"R1"}});
  REQUIRE(picked.size() == 3);
  CHECK(picked[0]->id == "a");
  CHECK(picked[1]->id == "b");
  CHECK(picked[2]->id == "c");

  const auto unroled = store.filter_candidates(kAction, {});
  REQUIRE(unroled.size() == 1);
  CHECK(unroled[0]->id == "b");
}

TEST_CASE("unregistered actions are not regulated") {
  NormStore store(EngineMode::Prohibition);
  store.add_norm(simple_norm("n", DeonticType::Prohibition, "false", 0, -2));
  const EvaluationContext ctx;
  const NormativeResponse response = check_action(store, kAction, {}, ctx);
  CHECK(response.status == RegulatoryStatus::NotRegulated);
  CHECK(response.allowing.empty());
  CHECK(response.forbidding.empty());
  CHECK(response.total_reward == 0.0);
  CHECK(response.total_penalty == 0.0);
}

TEST_CASE("prohibition verdicts") {
  NormStore store(EngineMode::Prohibition);
  store.register_action("act", DomainId{});
  store.add_norm(simple_norm("ok", DeonticType::Prohibition, "x > 0", 2.0));
  store.add_norm(
      simple_norm("soft", DeonticType::Prohibition, "x > 1", 0.0, -3.0));
  Bindings env{{"x", Value(2.0)}};
  const EvaluationContext ctx(nullptr, &env, nullptr);

  SUBCASE("all active norms comply") {
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Allowed);
    CHECK(r.allowing == std::vector<std::string>{"ok", "soft"});
    CHECK(r.forbidding.empty());
    CHECK(r.total_reward == 2.0);
    CHECK(r.total_penalty == 0.0);
  }

  SUBCASE("a violated norm forbids") {
    env["x"] = Value(-1.0);
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Forbidden);
    CHECK(r.allowing.empty());
    CHECK(r.forbidding == std::vector<std::string>{"ok", "soft"});
    CHECK(r.total_penalty == -4.0);
  }

  SUBCASE("a partial violation keeps the compliers listed") {
    env["x"] = Value(0.5);  // complies with ok, violates soft
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Forbidden);
    CHECK(r.allowing == std::vector<std::string>{"ok"});
    CHECK(r.forbidding == std::vector<std::string>{"soft"});
    CHECK(r.total_reward == 2.0);
    CHECK(r.total_penalty == -3.0);
  }

  SUBCASE("a violated inviolable norm dominates") {
    store.add_norm(simple_norm("hard", DeonticType::Prohibition, "x > 10",
                               0.0, -9.0, true));
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Inviolable);
    CHECK(r.forbidding == std::vector<std::string>{"hard"});
    CHECK(r.allowing == std::vector<std::string>{"ok", "soft"});
    CHECK(r.total_penalty == -9.0);
  }

  SUBCASE("inactive norms leave the action unregulated") {
    Norm gated = simple_norm("gated", DeonticType::Prohibition, "true");
    gated.activation = parse_source("false");
    NormStore fresh(EngineMode::Prohibition);
    fresh.register_action("act", DomainId{});
    fresh.add_norm(gated);
    const NormativeResponse r = check_action(fresh, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::NotRegulated);
  }
}

TEST_CASE("permission verdicts") {
  NormStore store(EngineMode::Permission);
  store.register_action("act", DomainId{});
  store.add_norm(simple_norm("allowA", DeonticType::Permission, "x > 3", 1.0));
  store.add_norm(simple_norm("allowB", DeonticType::Permission, "x > 5", 2.0));
  Bindings env{{"x", Value(6.0)}};
  const EvaluationContext ctx(nullptr, &env, nullptr);

  SUBCASE("a holding permission allows") {
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Allowed);
    CHECK(r.allowing == std::vector<std::string>{"allowA", "allowB"});
    CHECK(r.total_reward == 3.0);
    CHECK(r.forbidding.empty());
    CHECK(r.total_penalty == 0.0);
  }

  SUBCASE("no holding permission forbids by default") {
    env["x"] = Value(1.0);
    const NormativeResponse r = check_action(store, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::Forbidden);
    CHECK(r.allowing.empty());
    CHECK(r.forbidding.empty());
    CHECK(r.total_penalty == 0.0);
  }

  SUBCASE("no active permission leaves the action unregulated") {
    NormStore fresh(EngineMode::Permission);
    fresh.register_action("act", DomainId{});
    Norm gated = simple_norm("gated", DeonticType::Permission, "true");
    gated.activation = parse_source("false");
    fresh.add_norm(gated);
    const NormativeResponse r = check_action(fresh, kAction, {}, ctx);
    CHECK(r.status == RegulatoryStatus::NotRegulated);
  }
}

TEST_CASE("evaluation failures surface the norm id") {
  NormStore store(EngineMode::Prohibition);
  store.register_action("act", DomainId{});
  store.add_norm(simple_norm("broken", DeonticType::Prohibition, "ghost > 0"));
  const EvaluationContext ctx;
  try {
    check_action(store, kAction, {}, ctx);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.norm_id == "broken");
    CHECK(e.kind == EvalErrorKind::UnresolvedIdentifier);
  }
}

TEST_CASE("brute force oracle agrees with the indexed engine") {
  testgen::Rng rng(0x04AC1EULL);
  for (int i = 0; i < 1200; ++i) {
    const EngineMode mode =
        rng.flip() ? EngineMode::Prohibition : EngineMode::Permission;
    NormStore store(mode);
    const std::uint64_t count = rng.below(6);
    for (std::uint64_t n = 0; n < count; ++n)
      store.add_norm(testgen::random_norm(rng, deontic_type_for(mode),
                                          "n" + std::to_string(n)));
    const ActionDescriptor action = testgen::random_action(rng);
    store.register_action(action.name, action.domain);
    const std::set<RoleId> roles = testgen::random_roles(rng);
    const Bindings bindings = testgen::random_bindings(rng);
    const EvaluationContext ctx(nullptr, &bindings, nullptr);

    const NormativeResponse fast = check_action(store, action, roles, ctx);
    const NormativeResponse slow =
        brute_force_check(store.norms(), mode, action, roles, ctx);
    if (!(fast == slow))
      FAIL("divergence at case " << i << ": fast status "
                                 << to_string(fast.status) << ", slow status "
                                 << to_string(slow.status));
  }
}

TEST_CASE("adding a prohibition never lowers severity") {
  testgen::Rng rng(0xCAFEF00DULL);
  for (int i = 0; i < 1000; ++i) {
    NormStore store(EngineMode::Prohibition);
    const ActionDescriptor action = testgen::random_action(rng);
    store.register_action(action.name, action.domain);
    const std::uint64_t count = rng.below(4);
    for (std::uint64_t n = 0; n < count; ++n)
      store.add_norm(testgen::random_norm(
          rng, DeonticType::Prohibition, "n" + std::to_string(n)));
    const std::set<RoleId> roles = testgen::random_roles(rng);
    const Bindings bindings = testgen::random_bindings(rng);
    const EvaluationContext ctx(nullptr, &bindings, nullptr);

    const NormativeResponse before = check_action(store, action, roles, ctx);
    store.add_norm(
        testgen::random_norm(rng, DeonticType::Prohibition, "extra"));
    const NormativeResponse after = check_action(store, action, roles, ctx);
    CHECK(severity(after.status) >= severity(before.status));
  }
}
