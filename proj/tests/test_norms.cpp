#include <limits>

#include "doctest.h"
#include "normsim/errors.hpp"
#include "normsim/norm.hpp"

using namespace normsim;

namespace {

StateSchema taxi_schema() {
  StateSchema schema;
  schema.identifiers["taxiCapacity"] = ValueTag::Number;
  schema.identifiers["NumClientsWaiting"] = ValueTag::Number;
  schema.identifiers["onBreak"] = ValueTag::Boolean;
  schema.functions["min"] = 2;
  return schema;
}

Norm capacity_norm() {
  Norm norm;
  norm.id = "cap";
  norm.deontic_type = DeonticType::Prohibition;
  norm.condition = parse_source("taxiCapacity >= NumClientsWaiting");
  norm.reward = 0.0;
  norm.penalty = -5.0;
  norm.domain = DomainId{"PICKING"};
  norm.inviolable = true;
  norm.issuer = Issuer::Organization;
  return norm;
}

bool has_diagnostic(const ValidationReport& report, const std::string& text) {
  for (const Diagnostic& d : report.diagnostics())
    if (d.render().find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("severity follows the status lattice") {
  CHECK(severity(RegulatoryStatus::NotRegulated) <
        severity(RegulatoryStatus::Allowed));
  CHECK(severity(RegulatoryStatus::Allowed) <
        severity(RegulatoryStatus::Forbidden));
  CHECK(severity(RegulatoryStatus::Forbidden) <
        severity(RegulatoryStatus::Inviolable));
}

TEST_CASE("status and issuer names") {
  CHECK(std::string(to_string(RegulatoryStatus::NotRegulated)) ==
        "NOT_REGULATED");
  CHECK(std::string(to_string(RegulatoryStatus::Inviolable)) == "INVIOLABLE");
  CHECK(std::string(to_string(Issuer::Self)) == "SELF");
  CHECK(std::string(to_string(DeonticType::Permission)) == "PERMISSION");
}

TEST_CASE("a well-formed norm validates cleanly") {
  const ValidationReport report = validate_norm(capacity_norm(), taxi_schema());
  CHECK(report.empty());
}

TEST_CASE("validation flags empty and whitespace ids") {
  Norm norm = capacity_norm();
  norm.id = "";
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()), "empty id"));
  norm.id = "two words";
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "id contains whitespace"));
}

TEST_CASE("validation flags sign violations on reward and penalty") {
  Norm norm = capacity_norm();
  norm.reward = -1.0;
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "reward must be >= 0"));
  norm = capacity_norm();
  norm.penalty = 2.0;
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "penalty must be <= 0"));
  norm = capacity_norm();
  norm.reward = std::numeric_limits<double>::infinity();
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "reward must be finite"));
}

TEST_CASE("validation resolves identifiers and functions in both expressions") {
  Norm norm = capacity_norm();
  norm.condition = parse_source("taxiCapacity >= mystery");
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "unresolved identifier in condition: mystery"));

  norm = capacity_norm();
  norm.activation = parse_source("ghost > 0");
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "unresolved identifier in activation: ghost"));

  norm = capacity_norm();
  norm.condition = parse_source("min(taxiCapacity, 3, 4) > 0");
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "takes 2 arguments, got 3"));

  norm = capacity_norm();
  norm.condition = parse_source("nosuch(1) > 0");
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "unresolved function in condition: nosuch"));
}

TEST_CASE("validation rejects an explicitly empty role set") {
  Norm norm = capacity_norm();
  norm.roles = std::set<RoleId>{};
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "explicit role set must not be empty"));
  norm.roles = std::set<RoleId>{RoleId{"DRIVER"}};
  CHECK(validate_norm(norm, taxi_schema()).empty());
}

TEST_CASE("validation requires a condition") {
  Norm norm = capacity_norm();
  norm.condition = nullptr;
  CHECK(has_diagnostic(validate_norm(norm, taxi_schema()),
                       "missing condition"));
}

TEST_CASE("matches filters by domain and roles") {
  const ActionDescriptor picking{"PickClients", DomainId{"PICKING"}, {}};
  const ActionDescriptor queueing{"Queue", DomainId{"QUEUE"}, {}};

  Norm norm = capacity_norm();  // domain PICKING, no role restriction
  CHECK(matches(norm, picking, {}));
  CHECK_FALSE(matches(norm, queueing, {}));

  norm.domain = DomainId{};  // default domain matches every action
  CHECK(matches(norm, picking, {}));
  CHECK(matches(norm, queueing, {}));

  norm = capacity_norm();
  norm.roles = std::set<RoleId>{RoleId{"DRIVER"}};
  CHECK_FALSE(matches(norm, picking, {}));
  CHECK(matches(norm, picking, {RoleId{"DRIVER"}, RoleId{"UNION"}}));
  CHECK_FALSE(matches(norm, picking, {RoleId{"STATION"}}));
}

TEST_CASE("activation gates the norm") {
  Bindings env{{"taxiCapacity", Value(4.0)},
               {"NumClientsWaiting", Value(6.0)},
               {"hours", Value(9.0)}};
  const EvaluationContext ctx(nullptr, &env, nullptr);

  Norm norm = capacity_norm();
  CHECK(is_active(norm, ctx));  // no activation expression

  norm.activation = parse_source("hours >= 8");
  CHECK(is_active(norm, ctx));
  norm.activation = parse_source("hours >= 10");
  CHECK_FALSE(is_active(norm, ctx));

  norm.activation = parse_source("hours + 1");
  CHECK_THROWS_AS(is_active(norm, ctx), EvaluationError);
}

TEST_CASE("compliance follows the condition") {
  Norm norm = capacity_norm();
  Bindings env{{"taxiCapacity", Value(6.0)}, {"NumClientsWaiting", Value(4.0)}};
  EvaluationContext ctx(nullptr, &env, nullptr);
  CHECK(evaluate_compliance(norm, ctx) == ComplianceOutcome::Complies);

  env["NumClientsWaiting"] = Value(8.0);
  CHECK(evaluate_compliance(norm, ctx) == ComplianceOutcome::Violates);

  norm.condition = parse_source("taxiCapacity");
  CHECK_THROWS_AS(evaluate_compliance(norm, ctx), EvaluationError);
}
