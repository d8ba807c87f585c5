#include "defisim/report.hpp"

#include <cstdio>
#include <fstream>

namespace defisim {

using nlohmann::json;

namespace {

json roles_to_json(const std::set<Role>& roles) {
    json arr = json::array();
    for (Role r : roles) arr.push_back(role_name(r));
    return arr;
}

json ledger_to_json(const GainsLedger& ledger) {
    json by_role = json::object();
    for (const auto& [agent, roles] : ledger.by_role) {
        json per = json::object();
        for (const auto& [role, delta] : roles) per[role_name(role)] = delta;
        by_role[agent] = per;
    }
    return {{"total", ledger.total}, {"by_role", by_role}};
}

json actions_to_json(const std::vector<Action>& actions) {
    json arr = json::array();
    for (const Action& a : actions) {
        json steps = json::array();
        for (const StepRecord& s : a.steps)
            steps.push_back({{"op", s.op},
                             {"agent", s.agent},
                             {"asset", s.asset},
                             {"amount", s.amount},
                             {"result", s.result}});
        arr.push_back({{"actor", a.actor},
                       {"role", role_name(a.role)},
                       {"steps", steps},
                       {"deltas", a.deltas}});
    }
    return arr;
}

}  // namespace

json report_to_json(const AttackReport& r) {
    json roles = json::object();
    for (const auto& [agent, set] : r.roleplay.roles) roles[agent] = roles_to_json(set);
    return {{"strategy", r.strategy},
            {"completed", r.completed},
            {"feasible", r.feasible},
            {"note", r.note},
            {"seeded_budget", r.seeded_budget},
            {"exit_value_before", r.exit_value_before},
            {"exit_value_after", r.exit_value_after},
            {"simulated_profit", r.simulated_profit},
            {"closed_form_profit", r.closed_form_profit},
            {"epsilon_expected", r.epsilon_expected},
            {"epsilon_measured", r.epsilon_measured},
            {"flash_total", r.flash_total},
            {"flash_fee_paid", r.flash_fee_paid},
            {"rounds_executed", r.rounds_executed},
            {"residual_bound", r.residual_bound},
            {"identity_profit", r.identity_profit},
            {"residual_market_stable", r.residual_market_stable},
            {"residual_market_manipulated", r.residual_market_manipulated},
            {"bad_debt", r.bad_debt},
            {"conservation_drift", r.conservation_drift},
            {"telescoping_error", r.telescoping_error},
            {"controlled", r.controlled},
            {"roleplay",
             {{"roles", roles},
              {"combined", roles_to_json(r.roleplay.combined)},
              {"multi_role", r.roleplay.multi_role},
              {"attacker_gain", r.roleplay.attacker_gain}}},
            {"ledger", ledger_to_json(r.ledger)},
            {"actions", actions_to_json(r.actions)}};
}

json report_file(const AttackReport& r, const ScenarioConfig& scenario, const json& params) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(fingerprint(scenario)));
    return {{"tool", {{"name", "defisim"}, {"version", "0.1.0"}}},
            {"scenario", scenario.name},
            {"scenario_fingerprint", buf},
            {"strategy", r.strategy},
            {"params", params},
            {"report", report_to_json(r)}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

}  // namespace defisim
