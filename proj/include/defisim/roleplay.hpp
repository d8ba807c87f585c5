// Role bookkeeping: strategies wrap every state-changing operation in an
// Action tagged with the DeFi role being played. Each action's value delta is
// post-action holdings at post-action prices minus pre-action holdings at
// pre-action prices; consecutive actions share their boundary, so the deltas
// telescope exactly to the whole event's wallet-value change.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "defisim/envservices.hpp"

namespace defisim {

enum class Role {
    Lender = 1,
    Borrower = 2,
    Trader = 3,
    LiquidityProvider = 4,
    YieldFarmer = 5,
    YieldSource = 6,
    Liquidator = 7,
};

const char* role_name(Role r);

struct StepRecord {
    std::string op;
    AgentId agent;
    AssetId asset;
    double amount = 0.0;
    double result = 0.0;  // op-dependent: swap output, shares minted, ...
};

struct Action {
    AgentId actor;
    Role role;
    std::vector<StepRecord> steps;
    std::map<AgentId, double> deltas;  // per tracked agent
};

struct GainsLedger {
    std::map<AgentId, double> total;
    std::map<AgentId, std::map<Role, double>> by_role;

    double gain(const AgentId& agent) const;
    // Sum over a set of attacker-controlled agents.
    double attacker_gain(const std::set<AgentId>& controlled) const;
};

struct RolePlaySummary {
    std::map<AgentId, std::set<Role>> roles;
    std::set<Role> combined;  // union over controlled agents
    bool multi_role = false;  // two or more distinct roles across the set
    double attacker_gain = 0.0;
};

class EventRecorder {
  public:
    // Tracks value deltas for the given agents (usually every non-component
    // agent plus the ones the strategy creates).
    EventRecorder(Env& env, std::vector<AgentId> tracked);

    void begin(const AgentId& actor, Role role);
    void log(StepRecord step);
    void end();

    // Scoped helper: begin + end around a callable.
    template <typename F>
    void act(const AgentId& actor, Role role, F&& body) {
        begin(actor, role);
        body();
        end();
    }

    // True while an action is open. Strategies check this after catching a
    // simulation error so the aborted action still lands in the record and the
    // telescoping identity survives.
    bool in_action() const { return current_.has_value(); }

    const std::vector<Action>& actions() const { return done_; }
    GainsLedger ledger() const;
    RolePlaySummary classify(const std::set<AgentId>& controlled) const;
    // Largest |sum of deltas - (current value - start value)| over tracked
    // agents, relative to scale. Zero up to fp noise by construction.
    double telescoping_error() const;

  private:
    std::map<AgentId, double> values_now() const;

    Env* env_;
    std::vector<AgentId> tracked_;
    std::map<AgentId, double> start_values_;
    std::map<AgentId, double> boundary_;  // values at the last action edge
    std::optional<Action> current_;
    std::vector<Action> done_;
};

}  // namespace defisim
