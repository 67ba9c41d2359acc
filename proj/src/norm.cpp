#include "normsim/norm.hpp"

#include <cmath>

#include "normsim/errors.hpp"

namespace normsim {

int severity(RegulatoryStatus status) { return static_cast<int>(status); }

const char* to_string(DeonticType t) {
  return t == DeonticType::Prohibition ? "PROHIBITION" : "PERMISSION";
}

const char* to_string(Issuer i) {
  switch (i) {
    case Issuer::Self: return "SELF";
    case Issuer::Society: return "SOCIETY";
    case Issuer::Organization: return "ORGANIZATION";
  }
  return "?";
}

const char* to_string(RegulatoryStatus s) {
  switch (s) {
    case RegulatoryStatus::NotRegulated: return "NOT_REGULATED";
    case RegulatoryStatus::Allowed: return "ALLOWED";
    case RegulatoryStatus::Forbidden: return "FORBIDDEN";
    case RegulatoryStatus::Inviolable: return "INVIOLABLE";
  }
  return "?";
}

bool operator==(const NormativeResponse& a, const NormativeResponse& b) {
  return a.status == b.status && a.allowing == b.allowing &&
         a.forbidding == b.forbidding && a.total_reward == b.total_reward &&
         a.total_penalty == b.total_penalty;
}

std::string Diagnostic::render() const {
  std::string out;
  if (!norm_id.empty()) out += "norm '" + norm_id + "': ";
  out += message;
  if (offset) out += " (at offset " + std::to_string(*offset) + ")";
  return out;
}

void ValidationReport::add(std::string norm_id, std::string message,
                           std::optional<std::size_t> offset) {
  diagnostics_.push_back({std::move(norm_id), std::move(message), offset});
}

namespace {

// Resolves identifiers and function calls against the schema.
void check_expr_against_schema(const Expr& expr, const StateSchema& schema,
                               const std::string& norm_id, const char* which,
                               ValidationReport& report) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Identifier>) {
          if (!schema.identifiers.count(node.name))
            report.add(norm_id,
                       std::string("unresolved identifier in ") + which +
                           ": " + node.name,
                       expr.offset);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          check_expr_against_schema(*node.operand, schema, norm_id, which,
                                    report);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          check_expr_against_schema(*node.lhs, schema, norm_id, which, report);
          check_expr_against_schema(*node.rhs, schema, norm_id, which, report);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          auto it = schema.functions.find(node.function);
          if (it == schema.functions.end()) {
            report.add(norm_id,
                       std::string("unresolved function in ") + which + ": " +
                           node.function,
                       expr.offset);
          } else if (it->second != node.args.size()) {
            report.add(norm_id,
                       std::string("function ") + node.function + " in " +
                           which + " takes " + std::to_string(it->second) +
                           " arguments, got " +
                           std::to_string(node.args.size()),
                       expr.offset);
          }
          for (const ExprPtr& arg : node.args)
            check_expr_against_schema(*arg, schema, norm_id, which, report);
        }
      },
      expr.node);
}

}  // namespace

ValidationReport validate_norm(const Norm& norm, const StateSchema& schema) {
  ValidationReport report;

  if (norm.id.empty()) {
    report.add("", "empty id");
  } else if (norm.id.find_first_of(" \t\r\n") != std::string::npos) {
    report.add(norm.id, "id contains whitespace");
  }

  if (!std::isfinite(norm.reward)) {
    report.add(norm.id, "reward must be finite");
  } else if (norm.reward < 0.0) {
    report.add(norm.id, "reward must be >= 0");
  }
  if (!std::isfinite(norm.penalty)) {
    report.add(norm.id, "penalty must be finite");
  } else if (norm.penalty > 0.0) {
    report.add(norm.id, "penalty must be <= 0");
  }

  if (norm.roles && norm.roles->empty())
    report.add(norm.id, "explicit role set must not be empty");
  if (norm.roles) {
    for (const RoleId& role : *norm.roles)
      if (role.name.empty()) report.add(norm.id, "empty role name");
  }
  if (norm.domain.name.empty()) report.add(norm.id, "empty domain name");

  if (!norm.condition) {
    report.add(norm.id, "missing condition");
  } else {
    check_expr_against_schema(*norm.condition, schema, norm.id, "condition",
                              report);
  }
  if (norm.activation)
    check_expr_against_schema(*norm.activation, schema, norm.id, "activation",
                              report);

  return report;
}

bool matches(const Norm& norm, const ActionDescriptor& action,
             const std::set<RoleId>& agent_roles) {
  if (!norm.domain.is_default() && norm.domain != action.domain) return false;
  if (!norm.roles) return true;
  for (const RoleId& role : *norm.roles)
    if (agent_roles.count(role)) return true;
  return false;
}

bool is_active(const Norm& norm, const EvaluationContext& ctx) {
  if (!norm.activation) return true;
  Value v = evaluate(*norm.activation, ctx);
  if (!v.is_boolean())
    throw EvaluationError(EvalErrorKind::TypeMismatch,
                          "activation of norm '" + norm.id +
                              "' yielded a " + v.tag_name() +
                              ", expected boolean",
                          norm.activation->offset);
  return v.as_boolean();
}

ComplianceOutcome evaluate_compliance(const Norm& norm,
                                      const EvaluationContext& ctx) {
  Value v = evaluate(*norm.condition, ctx);
  if (!v.is_boolean())
    throw EvaluationError(EvalErrorKind::TypeMismatch,
                          "condition of norm '" + norm.id + "' yielded a " +
                              v.tag_name() + ", expected boolean",
                          norm.condition->offset);
  return v.as_boolean() ? ComplianceOutcome::Complies
                        : ComplianceOutcome::Violates;
}

}  // namespace normsim
