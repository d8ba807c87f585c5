// Command-line front end: simulate a strategy on a scenario, optimize its
// parameters, print the closed forms, or verify that simulation, closed form
// and search all agree.
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "defisim/optimizer.hpp"
#include "defisim/report.hpp"
#include "defisim/scenario.hpp"
#include "defisim/strategies.hpp"

namespace {

using namespace defisim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        auto pos = kv.find('=');
        if (pos == std::string::npos || pos == 0)
            throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        out[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
    }
    return out;
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    double v = it->second;
    params.erase(it);
    return v;
}

void reject_leftovers(const std::map<std::string, double>& params) {
    if (params.empty()) return;
    std::string keys;
    for (const auto& [k, v] : params) {
        (void)v;
        keys += keys.empty() ? k : ", " + k;
    }
    throw std::invalid_argument("unknown --param key(s): " + keys);
}

bool is_bd(const std::string& strategy) { return strategy == "bd" || strategy == "bd-enhanced"; }

// Fill defaults from the scenario: the single-round swap defaults to its
// closed-form optimum, the donation parameters to their equality point.
BBParams bb_params(const Env& env, std::map<std::string, double>& params,
                   const std::string& strategy) {
    BBParams p;
    double fallback_out = 0.0;
    if (env.pool && env.market) {
        double init_s = env.market->borrowable(env.world, env.pool->stable);
        double cr_m = 0.0;
        if (auto it = env.market->collateral_rate.find(env.pool->manipulated);
            it != env.market->collateral_rate.end())
            cr_m = it->second;
        BBClosedForm cf = bb_single_formula(init_s, cr_m, env.pool->reserve_s(env.world));
        fallback_out = cf.feasible ? cf.out_star : init_s;
    }
    p.out_s = take(params, "out_s", fallback_out);
    p.rounds = static_cast<int>(take(params, "rounds", strategy == "bb-multi" ? 64 : 1));
    return p;
}

BDParams bd_params(const Env& env, std::map<std::string, double>& params, bool enhanced) {
    BDScenarioVars v = bd_vars(env);
    int iter = static_cast<int>(take(params, "iter", 5));
    double init_mint = take(params, "init_mint", v.supply_ib / 10.0);
    BDClosedForm cf = bd_formula(v, iter, init_mint, enhanced);
    BDParams p = bd_params_from_formula(cf, iter, init_mint, enhanced);
    p.collateral_b = take(params, "collateral_b", p.collateral_b);
    p.donate = take(params, "donate", p.donate);
    return p;
}

AttackReport dispatch(Env& env, const std::string& strategy, const BBParams& bbp,
                      const BDParams& bdp) {
    if (strategy == "bb") return bb_single_run(env, bbp);
    if (strategy == "bb-multi") return bb_multi_run(env, bbp);
    if (strategy == "bd") return bd_primitive_run(env, bdp);
    if (strategy == "bd-enhanced") return bd_enhanced_run(env, bdp);
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
}

nlohmann::json params_json(const std::string& strategy, const BBParams& bbp,
                           const BDParams& bdp) {
    if (is_bd(strategy))
        return {{"iter", bdp.iter},
                {"init_mint", bdp.init_mint},
                {"collateral_b", bdp.collateral_b},
                {"donate", bdp.donate}};
    return {{"out_s", bbp.out_s}, {"rounds", bbp.rounds}};
}

std::string roles_line(const RolePlaySummary& s) {
    std::string line;
    for (Role r : s.combined) line += (line.empty() ? "" : ", ") + std::string(role_name(r));
    line += s.multi_role ? " (multi-role)" : " (single-role)";
    return line;
}

double rel_dev(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

void print_report(const AttackReport& r, const ScenarioConfig& scenario) {
    std::printf("strategy             %s\n", r.strategy.c_str());
    std::printf("scenario             %s (0x%016llx)\n", scenario.name.c_str(),
                static_cast<unsigned long long>(fingerprint(scenario)));
    std::printf("completed            %s\n", r.completed ? "yes" : "no");
    std::printf("feasible             %s\n", r.feasible ? "yes" : "no");
    if (!r.note.empty()) std::printf("note                 %s\n", r.note.c_str());
    std::printf("seeded budget        %.6f\n", r.seeded_budget);
    std::printf("simulated profit     %.6f\n", r.simulated_profit);
    std::printf("closed-form profit   %.6f\n", r.closed_form_profit);
    std::printf("rel deviation        %.3e\n", rel_dev(r.simulated_profit, r.closed_form_profit));
    if (is_bd(r.strategy)) {
        std::printf("epsilon expected     %.9f\n", r.epsilon_expected);
        std::printf("epsilon measured     %.9f\n", r.epsilon_measured);
        std::printf("flash borrowed       %.6f (fee paid %.6f)\n", r.flash_total,
                    r.flash_fee_paid);
    }
    if (r.strategy == "bb-multi") {
        std::printf("rounds executed      %d\n", r.rounds_executed);
        std::printf("identity profit      %.6f\n", r.identity_profit);
        std::printf("market residual      %.6f (bound %.6f)\n", r.residual_market_stable,
                    r.residual_bound);
    }
    std::printf("market bad debt      %.6f\n", r.bad_debt);
    std::printf("conservation drift   %.3e\n", r.conservation_drift);
    std::printf("roles played         %s\n", roles_line(r.roleplay).c_str());
    std::printf("attacker role gain   %.6f\n", r.roleplay.attacker_gain);
}

int cmd_simulate(const std::string& scenario_arg, const std::string& strategy,
                 std::map<std::string, double> params, const std::string& out_path) {
    ScenarioConfig cfg = load_scenario(scenario_arg);
    Env env = build_env(cfg);
    BBParams bbp;
    BDParams bdp;
    if (is_bd(strategy))
        bdp = bd_params(env, params, strategy == "bd-enhanced");
    else
        bbp = bb_params(env, params, strategy);
    reject_leftovers(params);
    AttackReport r = dispatch(env, strategy, bbp, bdp);
    print_report(r, cfg);
    if (!out_path.empty())
        write_json(out_path, report_file(r, cfg, params_json(strategy, bbp, bdp)));
    return r.feasible ? kExitOk : kExitInfeasible;
}

int cmd_formula(const std::string& scenario_arg, const std::string& strategy,
                std::map<std::string, double> params, const std::string& out_path) {
    ScenarioConfig cfg = load_scenario(scenario_arg);
    Env env = build_env(cfg);
    nlohmann::json j;
    if (is_bd(strategy)) {
        BDScenarioVars v = bd_vars(env);
        int iter = static_cast<int>(take(params, "iter", 5));
        double init_mint = take(params, "init_mint", v.supply_ib / 10.0);
        reject_leftovers(params);
        BDClosedForm cf = bd_formula(v, iter, init_mint, strategy == "bd-enhanced");
        std::printf("strategy            %s\n", strategy.c_str());
        std::printf("iter                %d\n", iter);
        std::printf("init_mint           %.6f\n", init_mint);
        std::printf("feasible            %s\n", cf.feasible ? "yes" : "no");
        if (!cf.note.empty()) std::printf("note                %s\n", cf.note.c_str());
        std::printf("epsilon             %.9f\n", cf.epsilon);
        std::printf("collateral_b        %.6f\n", cf.collateral_b);
        std::printf("donate              %.6f\n", cf.donate);
        std::printf("flash total         %.6f\n", cf.flash_total);
        std::printf("profit              %.6f\n", cf.profit);
        j = {{"strategy", strategy}, {"iter", iter},
             {"init_mint", init_mint}, {"feasible", cf.feasible},
             {"epsilon", cf.epsilon},  {"collateral_b", cf.collateral_b},
             {"donate", cf.donate},    {"flash_total", cf.flash_total},
             {"profit", cf.profit},    {"note", cf.note}};
        if (!out_path.empty()) write_json(out_path, j);
        return cf.feasible ? kExitOk : kExitInfeasible;
    }
    if (!env.pool || !env.market) throw SimError(Err::BadScenario, "scenario lacks pool/market");
    reject_leftovers(params);
    double init_s = env.market->borrowable(env.world, env.pool->stable);
    double init_m = env.market->borrowable(env.world, env.pool->manipulated);
    double cr_m = 0.0;
    if (auto it = env.market->collateral_rate.find(env.pool->manipulated);
        it != env.market->collateral_rate.end())
        cr_m = it->second;
    double l0 = env.pool->reserve_s(env.world);
    BBClosedForm cf = bb_single_formula(init_s, cr_m, l0);
    BBMultiClosedForm mcf = bb_multi_formula(init_s, init_m, cr_m, l0);
    std::printf("strategy            %s\n", strategy.c_str());
    std::printf("feasible            %s\n", cf.feasible ? "yes" : "no");
    std::printf("optimal swap        %.6f\n", cf.out_star);
    std::printf("single-round profit %.6f\n", cf.profit);
    std::printf("residual bound      %.6f\n", mcf.residual_bound);
    std::printf("multi-round profit  %.6f (at the residual bound)\n", mcf.profit_at_bound);
    j = {{"strategy", strategy},
         {"feasible", cf.feasible},
         {"out_star", cf.out_star},
         {"profit", cf.profit},
         {"residual_bound", mcf.residual_bound},
         {"profit_at_bound", mcf.profit_at_bound}};
    if (!out_path.empty()) write_json(out_path, j);
    return cf.feasible ? kExitOk : kExitInfeasible;
}

int cmd_optimize(const std::string& scenario_arg, const std::string& strategy,
                 std::map<std::string, double> params, const std::string& out_path) {
    ScenarioConfig cfg = load_scenario(scenario_arg);
    Env base = build_env(cfg);
    nlohmann::json j = {{"strategy", strategy}, {"scenario", cfg.name}};

    if (!is_bd(strategy) && (!base.pool || !base.market))
        throw SimError(Err::BadScenario, "scenario lacks pool/market");

    if (strategy == "bb") {
        BBParams seed_p = bb_params(base, params, strategy);
        reject_leftovers(params);
        double hi = std::max(seed_p.out_s * 3.0, 1.0);
        auto eval = [&](double x) {
            Env env = base.snapshot();
            AttackReport r = bb_single_run(env, {x, 1});
            return Eval{r.simulated_profit, r.feasible};
        };
        GridResult grid = grid_oracle({{"out_s", 0.0, hi, false}},
                                      [&](const std::vector<double>& x) { return eval(x[0]); }, 65);
        Refined fine = refine_1d(eval, 0.0, hi);
        std::printf("grid best            out_s=%.6f profit=%.6f%s\n", grid.best.x[0],
                    grid.best.value, grid.any_feasible ? "" : " (nothing feasible)");
        std::printf("refined best         out_s=%.9f profit=%.9f\n", fine.x, fine.value);
        double init_s = base.market->borrowable(base.world, base.pool->stable);
        double cr_m = 0.0;
        if (auto it = base.market->collateral_rate.find(base.pool->manipulated);
            it != base.market->collateral_rate.end())
            cr_m = it->second;
        BBClosedForm cf = bb_single_formula(init_s, cr_m, base.pool->reserve_s(base.world));
        std::printf("closed form          out_s=%.9f profit=%.9f\n", cf.out_star, cf.profit);
        std::printf("argmax deviation     %.3e\n", rel_dev(fine.x, cf.out_star));
        std::printf("value deviation      %.3e\n", rel_dev(fine.value, cf.profit));
        j["grid_best"] = {{"out_s", grid.best.x[0]}, {"profit", grid.best.value}};
        j["refined"] = {{"out_s", fine.x}, {"profit", fine.value}};
        j["closed_form"] = {{"out_s", cf.out_star}, {"profit", cf.profit}};
        if (!out_path.empty()) write_json(out_path, j);
        return grid.any_feasible || fine.feasible ? kExitOk : kExitInfeasible;
    }

    if (strategy == "bb-multi") {
        BBParams seed_p = bb_params(base, params, strategy);
        reject_leftovers(params);
        auto eval = [&](long long rounds) {
            Env env = base.snapshot();
            BBParams p = seed_p;
            p.rounds = static_cast<int>(rounds);
            AttackReport r = bb_multi_run(env, p);
            return Eval{r.simulated_profit, r.feasible};
        };
        IntSweep sweep = integer_sweep(1, seed_p.rounds, eval);
        std::printf("round sweep 1..%d    best=%lld profit=%.9f%s\n", seed_p.rounds, sweep.best,
                    sweep.value, sweep.any_feasible ? "" : " (nothing feasible)");
        j["sweep"] = {{"best_rounds", sweep.best}, {"profit", sweep.value}};
        nlohmann::json prof = nlohmann::json::array();
        for (auto& [k, v] : sweep.profile) prof.push_back({{"rounds", k}, {"profit", v}});
        j["profile"] = prof;
        if (!out_path.empty()) write_json(out_path, j);
        return sweep.any_feasible ? kExitOk : kExitInfeasible;
    }

    const bool enhanced = strategy == "bd-enhanced";
    BDParams seed_p = bd_params(base, params, enhanced);
    reject_leftovers(params);
    auto eval2 = [&](const std::vector<double>& x) {
        Env env = base.snapshot();
        BDParams p = seed_p;
        p.donate = x[0];
        p.collateral_b = x[1];
        AttackReport r = enhanced ? bd_enhanced_run(env, p) : bd_primitive_run(env, p);
        return Eval{r.simulated_profit, r.feasible};
    };
    double dhi = std::max(seed_p.donate * 2.0, 1.0);
    double chi = std::max(seed_p.collateral_b * 2.0, 1.0);
    GridResult grid = grid_oracle({{"donate", 0.0, dhi, false}, {"collateral_b", 0.0, chi, false}},
                                  eval2, 33);
    std::printf("grid best            donate=%.6f collateral_b=%.6f profit=%.6f%s\n",
                grid.best.x[0], grid.best.x[1], grid.best.value,
                grid.any_feasible ? "" : " (nothing feasible)");
    // Two passes of coordinate refinement from the grid incumbent.
    double d = grid.any_feasible ? grid.best.x[0] : seed_p.donate;
    double c = grid.any_feasible ? grid.best.x[1] : seed_p.collateral_b;
    for (int pass = 0; pass < 2; ++pass) {
        Refined rd = refine_1d([&](double x) { return eval2({x, c}); }, 0.0, dhi);
        d = rd.x;
        Refined rc = refine_1d([&](double x) { return eval2({d, x}); }, 0.0, chi);
        c = rc.x;
    }
    Eval at = eval2({d, c});
    std::printf("refined best         donate=%.9f collateral_b=%.9f profit=%.9f\n", d, c,
                at.value);
    std::printf("closed form          donate=%.9f collateral_b=%.9f profit=%.9f\n", seed_p.donate,
                seed_p.collateral_b,
                bd_formula(bd_vars(base), seed_p.iter, seed_p.init_mint, enhanced).profit);
    j["grid_best"] = {{"donate", grid.best.x[0]},
                      {"collateral_b", grid.best.x[1]},
                      {"profit", grid.best.value}};
    j["refined"] = {{"donate", d}, {"collateral_b", c}, {"profit", at.value}};
    j["closed_form"] = {{"donate", seed_p.donate},
                        {"collateral_b", seed_p.collateral_b},
                        {"profit", bd_formula(bd_vars(base), seed_p.iter, seed_p.init_mint,
                                              enhanced)
                                       .profit}};
    if (!out_path.empty()) write_json(out_path, j);
    return grid.any_feasible || at.feasible ? kExitOk : kExitInfeasible;
}

struct VerifyRow {
    std::string strategy;
    std::string scenario;
    double closed_form = 0.0;
    double simulated = 0.0;
    double searched = 0.0;
    double deviation = 0.0;
};

int cmd_verify(const std::string& scenario_arg, const std::string& strategy_filter,
               const std::string& out_path) {
    struct Case {
        std::string strategy;
        std::string scenario;
    };
    std::vector<Case> cases;
    if (!strategy_filter.empty() && !scenario_arg.empty()) {
        cases.push_back({strategy_filter, scenario_arg});
    } else if (!strategy_filter.empty()) {
        cases.push_back({strategy_filter, is_bd(strategy_filter) ? "bd_desk" : "bb_desk"});
    } else if (!scenario_arg.empty()) {
        // Every strategy the scenario's components support.
        Env probe = build_env(load_scenario(scenario_arg));
        if (probe.pool && probe.market) {
            cases.push_back({"bb", scenario_arg});
            cases.push_back({"bb-multi", scenario_arg});
        }
        if (probe.vault && probe.market && probe.flashloan) {
            cases.push_back({"bd", scenario_arg});
            cases.push_back({"bd-enhanced", scenario_arg});
        }
        if (cases.empty())
            throw SimError(Err::BadScenario, "no strategy applies to this scenario");
    } else {
        cases = {{"bb", "bb_desk"},
                 {"bb-multi", "bb_desk"},
                 {"bd", "bd_desk"},
                 {"bd-enhanced", "bd_desk"}};
    }
    std::vector<VerifyRow> rows;
    bool all_ok = true;
    for (const Case& c : cases) {
        ScenarioConfig cfg = load_scenario(c.scenario);
        Env base = build_env(cfg);
        if (!is_bd(c.strategy) && (!base.pool || !base.market))
            throw SimError(Err::BadScenario, "scenario lacks pool/market");
        VerifyRow row;
        row.strategy = c.strategy;
        row.scenario = cfg.name;
        if (is_bd(c.strategy)) {
            const bool enhanced = c.strategy == "bd-enhanced";
            BDScenarioVars v = bd_vars(base);
            BDClosedForm cf = bd_formula(v, 5, v.supply_ib / 10.0, enhanced);
            BDParams p = bd_params_from_formula(cf, 5, v.supply_ib / 10.0, enhanced);
            Env env = base.snapshot();
            AttackReport r = enhanced ? bd_enhanced_run(env, p) : bd_primitive_run(env, p);
            row.closed_form = cf.profit;
            row.simulated = r.simulated_profit;
            // Peak over the donation axis must not beat the equality point.
            auto eval = [&](double x) {
                Env e2 = base.snapshot();
                BDParams q = p;
                q.donate = x;
                AttackReport rr = enhanced ? bd_enhanced_run(e2, q) : bd_primitive_run(e2, q);
                return Eval{rr.simulated_profit, rr.feasible};
            };
            Refined fine = refine_1d(eval, 0.0, std::max(1.0, p.donate * 2.0));
            row.searched = fine.value;
        } else if (c.strategy == "bb") {
            double init_s = base.market->borrowable(base.world, base.pool->stable);
            double cr_m = base.market->collateral_rate.at(base.pool->manipulated);
            BBClosedForm cf =
                bb_single_formula(init_s, cr_m, base.pool->reserve_s(base.world));
            Env env = base.snapshot();
            AttackReport r = bb_single_run(env, {cf.out_star, 1});
            row.closed_form = cf.profit;
            row.simulated = r.simulated_profit;
            auto eval = [&](double x) {
                Env e2 = base.snapshot();
                AttackReport rr = bb_single_run(e2, {x, 1});
                return Eval{rr.simulated_profit, rr.feasible};
            };
            Refined fine = refine_1d(eval, 0.0, std::max(1.0, cf.out_star * 3.0));
            row.searched = fine.value;
        } else {
            Env env = base.snapshot();
            double seed = base.pool->reserve_s(base.world);
            AttackReport r = bb_multi_run(env, {seed, 2000});
            row.closed_form = r.identity_profit;
            row.simulated = r.simulated_profit;
            row.searched = r.residual_market_stable <= r.residual_bound * (1.0 + 1e-6)
                               ? r.simulated_profit
                               : -1.0;
        }
        row.deviation = std::max(rel_dev(row.simulated, row.closed_form),
                                 rel_dev(row.simulated, row.searched));
        all_ok = all_ok && row.deviation <= 1e-6;
        rows.push_back(row);
    }
    std::printf("%-12s %-10s %16s %16s %16s %12s\n", "strategy", "scenario", "closed form",
                "simulated", "searched", "deviation");
    nlohmann::json jrows = nlohmann::json::array();
    for (const VerifyRow& r : rows) {
        std::printf("%-12s %-10s %16.6f %16.6f %16.6f %12.3e\n", r.strategy.c_str(),
                    r.scenario.c_str(), r.closed_form, r.simulated, r.searched, r.deviation);
        jrows.push_back({{"strategy", r.strategy},
                         {"scenario", r.scenario},
                         {"closed_form", r.closed_form},
                         {"simulated", r.simulated},
                         {"searched", r.searched},
                         {"deviation", r.deviation}});
    }
    std::printf("verify: %s\n", all_ok ? "all strategies agree" : "deviation above tolerance");
    if (!out_path.empty()) write_json(out_path, {{"rows", jrows}, {"ok", all_ok}});
    return all_ok ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator for pool/lending/vault attack strategies"};
    app.require_subcommand(1);

    std::string scenario, strategy = "bb", out_path;
    std::vector<std::string> params;
    long long seed = 0;

    auto add_common = [&](CLI::App* cmd, bool scenario_required) {
        auto* s = cmd->add_option("--scenario", scenario, "scenario file path or preset name");
        if (scenario_required) s->required();
        cmd->add_option("--strategy", strategy, "bb | bb-multi | bd | bd-enhanced")
            ->check(CLI::IsMember({"bb", "bb-multi", "bd", "bd-enhanced"}));
        cmd->add_option("--param", params, "strategy parameter key=value (repeatable)");
        cmd->add_option("--out", out_path, "write a JSON report to this path");
        cmd->add_option("--seed", seed, "reserved; runs are deterministic");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one strategy and report the outcome");
    add_common(sim, true);
    CLI::App* opt = app.add_subcommand("optimize", "search strategy parameters for max profit");
    add_common(opt, true);
    CLI::App* form = app.add_subcommand("formula", "print the closed forms for a scenario");
    add_common(form, true);
    CLI::App* ver =
        app.add_subcommand("verify", "check simulation against closed forms and search");
    add_common(ver, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::map<std::string, double> kv = parse_params(params);
        if (sim->parsed()) return cmd_simulate(scenario, strategy, kv, out_path);
        if (opt->parsed()) return cmd_optimize(scenario, strategy, kv, out_path);
        if (form->parsed()) return cmd_formula(scenario, strategy, kv, out_path);
        if (ver->parsed())
            return cmd_verify(scenario, ver->count("--strategy") ? strategy : "", out_path);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
