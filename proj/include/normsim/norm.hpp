#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normsim/expr.hpp"
#include "normsim/value.hpp"

namespace normsim {

// Only prohibition and permission are supported.
enum class DeonticType { Prohibition, Permission };

enum class Issuer { Self, Society, Organization };

// Severity order: NotRegulated < Allowed < Forbidden < Inviolable.
enum class RegulatoryStatus { NotRegulated = 0, Allowed, Forbidden, Inviolable };

int severity(RegulatoryStatus status);

const char* to_string(DeonticType t);
const char* to_string(Issuer i);
const char* to_string(RegulatoryStatus s);

struct RoleId {
  std::string name;
  auto operator<=>(const RoleId&) const = default;
};

// Domains cluster norms and actions; the distinguished DEFAULT domain
// matches every action domain.
struct DomainId {
  std::string name = "DEFAULT";
  static DomainId default_domain() { return DomainId{}; }
  bool is_default() const { return name == "DEFAULT"; }
  auto operator<=>(const DomainId&) const = default;
};

// The unit of regulation. Immutable after construction; safe to share
// across threads.
struct Norm {
  std::string id;
  DeonticType deontic_type = DeonticType::Prohibition;
  // Compliance condition: true in every state where performing the action
  // complies with the norm. For prohibitions, states making it false are
  // violations.
  ExprPtr condition;
  // Activation condition; null means always active.
  ExprPtr activation;
  double reward = 0.0;   // >= 0, credited on compliance
  double penalty = 0.0;  // <= 0, applied on violation
  // Absent = all roles. An explicitly empty set fails validation.
  std::optional<std::set<RoleId>> roles;
  DomainId domain = DomainId::default_domain();
  bool inviolable = true;
  Issuer issuer = Issuer::Organization;
};

// Carrier for a proposed regulated action.
struct ActionDescriptor {
  std::string name;
  DomainId domain = DomainId::default_domain();
  std::vector<std::pair<std::string, Value>> params;
};

// Engine verdict. In prohibition mode: status Forbidden/Inviolable iff
// forbidding is non-empty, Inviolable iff some forbidding norm is
// inviolable. In permission mode forbidding is always empty and Forbidden
// means "no permission covers the action".
struct NormativeResponse {
  RegulatoryStatus status = RegulatoryStatus::NotRegulated;
  std::vector<std::string> allowing;    // norm ids whose condition held
  std::vector<std::string> forbidding;  // norm ids violated by the action
  double total_reward = 0.0;
  double total_penalty = 0.0;
};

bool operator==(const NormativeResponse& a, const NormativeResponse& b);

enum class ValueTag { Boolean, Number, String };

// Declared identifiers and host-function signatures a norm's expressions
// may reference.
struct StateSchema {
  std::map<std::string, ValueTag> identifiers;
  std::map<std::string, std::size_t> functions;  // name -> arity
};

struct Diagnostic {
  std::string norm_id;  // empty when not tied to one norm
  std::string message;
  std::optional<std::size_t> offset;  // position in a condition source

  std::string render() const;
};

class ValidationReport {
 public:
  bool empty() const { return diagnostics_.empty(); }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  void add(Diagnostic d) { diagnostics_.push_back(std::move(d)); }
  void add(std::string norm_id, std::string message,
           std::optional<std::size_t> offset = std::nullopt);

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Checks the Norm invariants and resolves every identifier and function in
// condition/activation against the schema. Never throws; problems land in
// the report.
ValidationReport validate_norm(const Norm& norm, const StateSchema& schema);

// Domain/role filter: true iff the norm's domain covers the action's domain
// and the norm's role set intersects the agent's roles (absent roles match
// everyone).
bool matches(const Norm& norm, const ActionDescriptor& action,
             const std::set<RoleId>& agent_roles);

// True when activation is absent or evaluates to true. Throws
// EvaluationError if activation yields a non-boolean.
bool is_active(const Norm& norm, const EvaluationContext& ctx);

enum class ComplianceOutcome { Complies, Violates };

// Precondition: the norm is active under ctx. Complies iff the compliance
// condition evaluates to true; the deontic type does not change how the
// condition is read, only how the engine weighs the outcome.
ComplianceOutcome evaluate_compliance(const Norm& norm,
                                      const EvaluationContext& ctx);

}  // namespace normsim
