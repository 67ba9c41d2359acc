#include "normsim/engine.hpp"

#include <algorithm>

#include "normsim/errors.hpp"

namespace normsim {

const char* to_string(EngineMode m) {
  return m == EngineMode::Prohibition ? "PROHIBITION" : "PERMISSION";
}

DeonticType deontic_type_for(EngineMode m) {
  return m == EngineMode::Prohibition ? DeonticType::Prohibition
                                      : DeonticType::Permission;
}

void NormStore::add_norm(Norm norm) {
  if (norm.deontic_type != deontic_type_for(mode_))
    throw ModeConflictError("mode conflict: store holds " +
                            std::string(to_string(mode_)) + "s, norm '" +
                            norm.id + "' is a " +
                            std::string(to_string(norm.deontic_type)));
  if (find(norm.id))
    throw DuplicateIdError("duplicate norm id '" + norm.id + "'");

  const std::size_t index = master_.size();
  by_domain_[norm.domain.name].push_back(index);
  if (norm.roles) {
    for (const RoleId& role : *norm.roles) by_role_[role].push_back(index);
  } else {
    all_roles_.push_back(index);
  }
  master_.push_back(std::move(norm));
}

void NormStore::register_action(const std::string& name, DomainId domain) {
  auto [it, inserted] = actions_.emplace(name, domain);
  if (!inserted && it->second != domain)
    throw DuplicateActionError("action '" + name +
                               "' already registered in domain " +
                               it->second.name);
}

bool NormStore::is_regulated(const std::string& name) const {
  return actions_.count(name) != 0;
}

std::vector<const Norm*> NormStore::filter_candidates(
    const ActionDescriptor& action, const std::set<RoleId>& agent_roles) const {
  // Gather candidate indexes from the role indexes, then apply the domain
  // test per norm. Merging via a sorted index set restores insertion order.
  std::set<std::size_t> indexes(all_roles_.begin(), all_roles_.end());
  for (const RoleId& role : agent_roles) {
    auto it = by_role_.find(role);
    if (it == by_role_.end()) continue;
    indexes.insert(it->second.begin(), it->second.end());
  }

  std::vector<const Norm*> out;
  for (std::size_t index : indexes) {
    const Norm& norm = master_[index];
    if (!norm.domain.is_default() && norm.domain != action.domain) continue;
    out.push_back(&norm);
  }
  return out;
}

const Norm* NormStore::find(const std::string& id) const {
  for (const Norm& norm : master_)
    if (norm.id == id) return &norm;
  return nullptr;
}

NormativeResponse evaluate_candidates(std::span<const Norm* const> candidates,
                                      EngineMode mode, bool action_regulated,
                                      const EvaluationContext& ctx) {
  NormativeResponse response;
  if (!action_regulated) return response;

  bool any_active = false;
  bool any_inviolable_violated = false;

  for (const Norm* norm : candidates) {
    try {
      if (!is_active(*norm, ctx)) continue;
      any_active = true;

      const ComplianceOutcome outcome = evaluate_compliance(*norm, ctx);
      if (mode == EngineMode::Prohibition) {
        if (outcome == ComplianceOutcome::Violates) {
          response.forbidding.push_back(norm->id);
          response.total_penalty += norm->penalty;
          if (norm->inviolable) any_inviolable_violated = true;
        } else {
          response.allowing.push_back(norm->id);
          response.total_reward += norm->reward;
        }
      } else {
        if (outcome == ComplianceOutcome::Complies) {
          response.allowing.push_back(norm->id);
          response.total_reward += norm->reward;
        }
        // A permission whose condition fails grants nothing; it neither
        // forbids nor costs anything by itself.
      }
    } catch (EvaluationError& err) {
      err.norm_id = norm->id;
      throw;
    }
  }

  if (!any_active) {
    response.status = RegulatoryStatus::NotRegulated;
  } else if (mode == EngineMode::Prohibition) {
    if (any_inviolable_violated)
      response.status = RegulatoryStatus::Inviolable;
    else if (!response.forbidding.empty())
      response.status = RegulatoryStatus::Forbidden;
    else
      response.status = RegulatoryStatus::Allowed;
  } else {
    // Permission mode: the action is admissible only if some active
    // permission's condition holds.
    response.status = response.allowing.empty() ? RegulatoryStatus::Forbidden
                                                : RegulatoryStatus::Allowed;
  }
  return response;
}

NormativeResponse check_action(const NormStore& store,
                               const ActionDescriptor& action,
                               const std::set<RoleId>& agent_roles,
                               const EvaluationContext& ctx) {
  const std::vector<const Norm*> candidates =
      store.filter_candidates(action, agent_roles);
  return evaluate_candidates(candidates, store.mode(),
                             store.is_regulated(action.name), ctx);
}

NormativeResponse brute_force_check(std::span<const Norm> all_norms,
                                    EngineMode mode,
                                    const ActionDescriptor& action,
                                    const std::set<RoleId>& agent_roles,
                                    const EvaluationContext& ctx) {
  std::vector<const Norm*> candidates;
  for (const Norm& norm : all_norms)
    if (matches(norm, action, agent_roles)) candidates.push_back(&norm);
  return evaluate_candidates(candidates, mode, /*action_regulated=*/true, ctx);
}

}  // namespace normsim
