#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "normsim/engine.hpp"
#include "normsim/norm.hpp"
#include "normsim/reasoning.hpp"

namespace normsim {

using AgentId = std::string;

class NormativeBackpack;

// A named scope with its own mode, roles, schema, norms and members.
// Mutation (join/leave, norm registration) requires exclusive access;
// backpack checks only read.
class Organization : public std::enable_shared_from_this<Organization> {
 public:
  static std::shared_ptr<Organization> create(std::string name,
                                              EngineMode mode,
                                              std::set<RoleId> roles,
                                              StateSchema schema);

  const std::string& name() const { return name_; }
  EngineMode mode() const { return mode_; }
  const std::set<RoleId>& role_registry() const { return roles_; }
  const StateSchema& schema() const { return schema_; }
  const NormStore& store() const { return store_; }

  // Norm must pass validate_norm against the schema; throws
  // ValidationError otherwise, and the store's mode/id errors pass through.
  void add_norm(Norm norm);
  void register_action(const std::string& name, DomainId domain);

  // Provisions the agent's backpack: organization norms, the regulated
  // action registry, empty concerns, the default reasoner.
  NormativeBackpack join(const AgentId& agent, std::set<RoleId> roles);
  void leave(const AgentId& agent);

  bool is_member(const AgentId& agent) const;
  std::set<RoleId> member_roles(const AgentId& agent) const;
  std::size_t member_count() const { return members_.size(); }

 private:
  Organization(std::string name, EngineMode mode, std::set<RoleId> roles,
               StateSchema schema);

  std::string name_;
  EngineMode mode_;
  std::set<RoleId> roles_;
  StateSchema schema_;
  NormStore store_;
  std::map<AgentId, std::set<RoleId>> members_;

  friend class NormativeBackpack;
};

// Per-agent normative add-on: the organization's norms plus the agent's
// private concerns, checked as a single set. Owned by one agent.
class NormativeBackpack {
 public:
  const AgentId& agent() const { return agent_; }
  std::shared_ptr<const Organization> organization() const { return org_; }

  // Concern: a private norm, issuer Self. Appended after organization
  // norms; ids must not collide with organization norms or prior concerns.
  void add_concern(Norm norm);
  const std::vector<Norm>& concerns() const { return concerns_; }

  // The set of regulated actions the agent was informed about on join.
  const std::map<std::string, DomainId>& regulated_actions() const;
  bool is_action_regulated(const std::string& name) const;

  // Organization norms visible through the backpack.
  const std::vector<Norm>& organization_norms() const;

  // check_action over organization norms ++ concerns with the agent's
  // recorded roles. Throws NotMemberError once the agent has left.
  NormativeResponse check(const ActionDescriptor& action,
                          const EvaluationContext& ctx) const;

  void set_reasoner(Reasoner reasoner) { reasoner_ = std::move(reasoner); }
  const Reasoner& reasoner() const { return reasoner_; }

  // Bookkeeping the runtime feeds after each regulated action.
  void note_outcome(Decision decision, bool violated_any);
  std::uint64_t checks() const { return checks_; }
  std::uint64_t violations() const { return violations_; }
  std::uint64_t abstentions() const { return abstentions_; }

 private:
  NormativeBackpack(std::shared_ptr<Organization> org, AgentId agent);

  std::shared_ptr<Organization> org_;
  AgentId agent_;
  std::vector<Norm> concerns_;
  Reasoner reasoner_;
  mutable std::uint64_t checks_ = 0;
  std::uint64_t violations_ = 0;
  std::uint64_t abstentions_ = 0;

  friend class Organization;
};

}  // namespace normsim
