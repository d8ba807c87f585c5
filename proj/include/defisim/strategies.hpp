// The two attack strategies and their closed forms.
//
// borrow-and-buy (bb): swap stable into the pool to inflate the manipulated
// asset, post the purchased tokens as collateral at the inflated price, borrow
// the market's stable and default. The multi-round variant alternates
// directions, re-deriving the optimal swap against the current state each
// round, so a market seeded with manipulated tokens can be drained too.
//
// borrow-and-donate (bd): flash-fund a two-contract loop that parks vault
// shares as contract A's collateral while contract B carries the matching
// debt, redeem the float, donate to inflate the share price, and borrow (or
// liquidate) everything the inflated collateral now supports.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "defisim/roleplay.hpp"

namespace defisim {

struct BBParams {
    double out_s = 0.0;  // stable budget swapped in round one
    int rounds = 1;      // upper bound; rounds stop early when unprofitable
};

struct BDParams {
    int iter = 1;
    double init_mint = 0.0;
    double collateral_b = 0.0;
    double donate = 0.0;
    bool enhanced = false;

    double flash_total() const { return init_mint + collateral_b + donate; }
};

// ---------- closed forms ----------

struct BBClosedForm {
    bool feasible = false;
    double out_star = 0.0;
    double profit = 0.0;
};

// Optimal single-round swap: the drain point where the attacker's borrowing
// capacity equals the market's whole stable balance.
BBClosedForm bb_single_formula(double init_s, double cr_m, double l0);
// Profit of a single round at a given swap size (capacity capped by init_s).
double bb_single_profit_at(double out_s, double init_s, double cr_m, double l0);
// Swap size draining a market balance of liquidity against a currency-side
// pool reserve of reserve_c, with the bought asset's collateral rate.
double bb_drain_out(double liquidity, double rate, double reserve_c);

struct BBMultiClosedForm {
    double residual_bound = 0.0;   // stable the market retains at most
    double profit_at_bound = 0.0;  // total when the residual meets the bound
};

double bb_residual_bound(double cr_m, double l0, double init_m);
BBMultiClosedForm bb_multi_formula(double init_s, double init_m, double cr_m, double l0);

struct BDScenarioVars {
    double supply_ib = 0.0;
    double borrowable_ib = 0.0;
    double borrowable_s = 0.0;
    double cr_ib = 0.0;
    double cr_s = 0.0;
    double liq_incentive = 0.0;
    double flash_fee = 0.0;
};

BDScenarioVars bd_vars(const Env& env);

struct BDClosedForm {
    bool feasible = false;
    std::string note;
    double epsilon = 0.0;
    double donate = 0.0;
    double collateral_b = 0.0;
    double flash_total = 0.0;
    double profit = 0.0;
};

// Derives the equality-point parameters (collateral sized to the planned debt,
// donation sized so the inflated collateral covers the target) and the
// resulting profit, for the primitive or enhanced sequence.
BDClosedForm bd_formula(const BDScenarioVars& v, int iter, double init_mint, bool enhanced);
BDParams bd_params_from_formula(const BDClosedForm& cf, int iter, double init_mint, bool enhanced);

// ---------- execution ----------

struct AttackReport {
    std::string strategy;
    bool completed = false;  // choreography ran to the end
    bool feasible = false;   // completed with positive profit
    std::string note;

    double seeded_budget = 0.0;
    double exit_value_before = 0.0;
    double exit_value_after = 0.0;
    double simulated_profit = 0.0;  // exit_value_after - exit_value_before
    double closed_form_profit = 0.0;

    // bd detail
    double epsilon_expected = 0.0;
    double epsilon_measured = 0.0;
    double flash_total = 0.0;
    double flash_fee_paid = 0.0;

    // bb multi detail
    int rounds_executed = 0;
    double residual_bound = 0.0;
    double identity_profit = 0.0;  // stable-conservation accounting total

    // end state
    double residual_market_stable = 0.0;
    double residual_market_manipulated = 0.0;
    double bad_debt = 0.0;
    double conservation_drift = 0.0;
    double telescoping_error = 0.0;

    std::set<AgentId> controlled;
    GainsLedger ledger;
    RolePlaySummary roleplay;
    std::vector<Action> actions;
};

AttackReport bb_single_run(Env& env, const BBParams& p);
AttackReport bb_multi_run(Env& env, const BBParams& p);
AttackReport bd_primitive_run(Env& env, const BDParams& p);
AttackReport bd_enhanced_run(Env& env, const BDParams& p);

// Realizable wallet value in stable units: stables and underlying at oracle
// prices, manipulated tokens at the pool's actual dump proceeds, vault shares
// at the (fully backed) share price.
double exit_value(const Env& env, const AgentId& agent);

}  // namespace defisim
