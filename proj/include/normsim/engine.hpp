#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "normsim/norm.hpp"

namespace normsim {

// A store holds either prohibitions or permissions, never both.
enum class EngineMode { Prohibition, Permission };

const char* to_string(EngineMode m);
DeonticType deontic_type_for(EngineMode m);

// Norm container indexed for domain/role filtering, plus the registry of
// regulated action names. Mode is fixed at construction. Reads may run
// concurrently; mutation requires exclusive access.
class NormStore {
 public:
  explicit NormStore(EngineMode mode) : mode_(mode) {}

  EngineMode mode() const { return mode_; }

  // Throws ModeConflictError if the norm's deontic type contradicts the
  // mode, DuplicateIdError on id collision. Insertion order is preserved.
  void add_norm(Norm norm);

  // Records an action as regulated. Re-registering with the same domain is
  // idempotent; a different domain throws DuplicateActionError.
  void register_action(const std::string& name, DomainId domain);

  bool is_regulated(const std::string& name) const;
  const std::map<std::string, DomainId>& regulated_actions() const {
    return actions_;
  }

  // Norms matching the action's domain and the agent's roles, in insertion
  // order. Activation is not consulted here.
  std::vector<const Norm*> filter_candidates(
      const ActionDescriptor& action,
      const std::set<RoleId>& agent_roles) const;

  const std::vector<Norm>& norms() const { return master_; }
  const Norm* find(const std::string& id) const;

 private:
  EngineMode mode_;
  std::vector<Norm> master_;
  std::map<std::string, std::vector<std::size_t>> by_domain_;
  std::map<RoleId, std::vector<std::size_t>> by_role_;
  std::vector<std::size_t> all_roles_;  // norms with no role restriction
  std::map<std::string, DomainId> actions_;
};

// Verdict for a proposed action. Unregistered actions and actions with no
// active matching norm are NotRegulated. Candidate norms are evaluated in
// insertion order; totals are summed in that order. Evaluation failures
// propagate as EvaluationError with the offending norm id attached.
NormativeResponse check_action(const NormStore& store,
                               const ActionDescriptor& action,
                               const std::set<RoleId>& agent_roles,
                               const EvaluationContext& ctx);

// Same verdict computed by a single unindexed pass; the equivalence oracle
// for check_action. Treats every action name as regulated.
NormativeResponse brute_force_check(std::span<const Norm> all_norms,
                                    EngineMode mode,
                                    const ActionDescriptor& action,
                                    const std::set<RoleId>& agent_roles,
                                    const EvaluationContext& ctx);

// Shared verdict core over an explicit candidate list (already
// domain/role-filtered), used by both check paths and by backpack checks.
NormativeResponse evaluate_candidates(std::span<const Norm* const> candidates,
                                      EngineMode mode, bool action_regulated,
                                      const EvaluationContext& ctx);

}  // namespace normsim
