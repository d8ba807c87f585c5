#include "defisim/roleplay.hpp"

#include <algorithm>
#include <cmath>

namespace defisim {

const char* role_name(Role r) {
    switch (r) {
        case Role::Lender: return "lender";
        case Role::Borrower: return "borrower";
        case Role::Trader: return "trader";
        case Role::LiquidityProvider: return "liquidity_provider";
        case Role::YieldFarmer: return "yield_farmer";
        case Role::YieldSource: return "yield_source";
        case Role::Liquidator: return "liquidator";
    }
    return "?";
}

double GainsLedger::gain(const AgentId& agent) const {
    auto it = total.find(agent);
    return it == total.end() ? 0.0 : it->second;
}

double GainsLedger::attacker_gain(const std::set<AgentId>& controlled) const {
    double g = 0.0;
    for (const auto& agent : controlled) g += gain(agent);
    return g;
}

EventRecorder::EventRecorder(Env& env, std::vector<AgentId> tracked)
    : env_(&env), tracked_(std::move(tracked)) {
    start_values_ = values_now();
    boundary_ = start_values_;
}

std::map<AgentId, double> EventRecorder::values_now() const {
    std::map<AgentId, double> v;
    for (const auto& agent : tracked_) v[agent] = portfolio_value(*env_, agent);
    return v;
}

void EventRecorder::begin(const AgentId& actor, Role role) {
    if (current_) throw std::logic_error("action already open");
    current_ = Action{actor, role, {}, {}};
}

void EventRecorder::log(StepRecord step) {
    if (!current_) throw std::logic_error("no open action");
    current_->steps.push_back(std::move(step));
}

void EventRecorder::end() {
    if (!current_) throw std::logic_error("no open action");
    auto now = values_now();
    for (const auto& agent : tracked_) current_->deltas[agent] = now[agent] - boundary_[agent];
    boundary_ = std::move(now);
    done_.push_back(std::move(*current_));
    current_.reset();
}

GainsLedger EventRecorder::ledger() const {
    GainsLedger ledger;
    for (const auto& action : done_) {
        for (const auto& [agent, delta] : action.deltas) {
            ledger.total[agent] += delta;
            ledger.by_role[agent];  // ensure the agent appears even if flat
        }
        ledger.by_role[action.actor][action.role] += action.deltas.count(action.actor)
                                                         ? action.deltas.at(action.actor)
                                                         : 0.0;
    }
    return ledger;
}

RolePlaySummary EventRecorder::classify(const std::set<AgentId>& controlled) const {
    RolePlaySummary s;
    for (const auto& action : done_) {
        if (!controlled.count(action.actor)) continue;
        s.roles[action.actor].insert(action.role);
        s.combined.insert(action.role);
    }
    s.multi_role = s.combined.size() >= 2;
    s.attacker_gain = ledger().attacker_gain(controlled);
    return s;
}

double EventRecorder::telescoping_error() const {
    if (current_) throw std::logic_error("event still has an open action");
    std::map<AgentId, double> summed;
    for (const auto& action : done_)
        for (const auto& [agent, delta] : action.deltas) summed[agent] += delta;
    auto now = values_now();
    double worst = 0.0;
    for (const auto& agent : tracked_) {
        double direct = now[agent] - start_values_.at(agent);
        double scale = std::max({1.0, std::abs(direct), std::abs(now[agent])});
        worst = std::max(worst, std::abs(summed[agent] - direct) / scale);
    }
    return worst;
}

}  // namespace defisim
