#include "normsim/organization.hpp"

#include <algorithm>

#include "normsim/errors.hpp"

namespace normsim {

Organization::Organization(std::string name, EngineMode mode,
                           std::set<RoleId> roles, StateSchema schema)
    : name_(std::move(name)),
      mode_(mode),
      roles_(std::move(roles)),
      schema_(std::move(schema)),
      store_(mode) {}

std::shared_ptr<Organization> Organization::create(std::string name,
                                                   EngineMode mode,
                                                   std::set<RoleId> roles,
                                                   StateSchema schema) {
  return std::shared_ptr<Organization>(new Organization(
      std::move(name), mode, std::move(roles), std::move(schema)));
}

void Organization::add_norm(Norm norm) {
  ValidationReport report = validate_norm(norm, schema_);
  if (!report.empty()) {
    std::vector<std::string> lines;
    for (const Diagnostic& d : report.diagnostics()) lines.push_back(d.render());
    throw ValidationError("norm '" + norm.id + "' rejected by organization '" +
                              name_ + "'",
                          std::move(lines));
  }
  if (norm.roles) {
    for (const RoleId& role : *norm.roles)
      if (!roles_.count(role))
        throw UnknownRoleError("norm '" + norm.id + "' names role '" +
                               role.name + "' not in organization '" + name_ +
                               "'");
  }
  store_.add_norm(std::move(norm));
}

void Organization::register_action(const std::string& name, DomainId domain) {
  store_.register_action(name, domain);
}

NormativeBackpack Organization::join(const AgentId& agent,
                                     std::set<RoleId> roles) {
  for (const RoleId& role : roles)
    if (!roles_.count(role))
      throw UnknownRoleError("role '" + role.name +
                             "' not in organization '" + name_ + "'");
  if (members_.count(agent))
    throw AlreadyMemberError("agent '" + agent + "' already joined '" + name_ +
                             "'");
  members_.emplace(agent, std::move(roles));
  return NormativeBackpack(shared_from_this(), agent);
}

void Organization::leave(const AgentId& agent) {
  if (!members_.erase(agent))
    throw NotMemberError("agent '" + agent + "' is not a member of '" + name_ +
                         "'");
}

bool Organization::is_member(const AgentId& agent) const {
  return members_.count(agent) != 0;
}

std::set<RoleId> Organization::member_roles(const AgentId& agent) const {
  auto it = members_.find(agent);
  if (it == members_.end())
    throw NotMemberError("agent '" + agent + "' is not a member of '" + name_ +
                         "'");
  return it->second;
}

NormativeBackpack::NormativeBackpack(std::shared_ptr<Organization> org,
                                     AgentId agent)
    : org_(std::move(org)),
      agent_(std::move(agent)),
      reasoner_(make_default_reasoner()) {}

void NormativeBackpack::add_concern(Norm norm) {
  if (norm.issuer != Issuer::Self)
    throw IssuerError("concern '" + norm.id + "' must be issued by SELF, got " +
                      std::string(to_string(norm.issuer)));
  if (norm.deontic_type != deontic_type_for(org_->mode()))
    throw ModeConflictError(
        "mode conflict: organization '" + org_->name() + "' runs in " +
        std::string(to_string(org_->mode())) + " mode, concern '" + norm.id +
        "' is a " + std::string(to_string(norm.deontic_type)));
  if (org_->store().find(norm.id))
    throw DuplicateIdError("concern id '" + norm.id +
                           "' collides with an organization norm");
  for (const Norm& existing : concerns_)
    if (existing.id == norm.id)
      throw DuplicateIdError("duplicate concern id '" + norm.id + "'");
  concerns_.push_back(std::move(norm));
}

const std::map<std::string, DomainId>& NormativeBackpack::regulated_actions()
    const {
  return org_->store().regulated_actions();
}

bool NormativeBackpack::is_action_regulated(const std::string& name) const {
  return org_->store().is_regulated(name);
}

const std::vector<Norm>& NormativeBackpack::organization_norms() const {
  return org_->store().norms();
}

NormativeResponse NormativeBackpack::check(const ActionDescriptor& action,
                                           const EvaluationContext& ctx) const {
  if (!org_->is_member(agent_))
    throw NotMemberError("agent '" + agent_ + "' has left organization '" +
                         org_->name() + "'");
  ++checks_;

  const std::set<RoleId> roles = org_->member_roles(agent_);
  std::vector<const Norm*> candidates =
      org_->store().filter_candidates(action, roles);
  bool regulated = org_->store().is_regulated(action.name);
  for (const Norm& concern : concerns_) {
    if (matches(concern, action, roles)) {
      candidates.push_back(&concern);
      regulated = true;
    }
  }
  return evaluate_candidates(candidates, org_->mode(), regulated, ctx);
}

void NormativeBackpack::note_outcome(Decision decision, bool violated_any) {
  if (decision == Decision::Abstain)
    ++abstentions_;
  else if (violated_any)
    ++violations_;
}

}  // namespace normsim
