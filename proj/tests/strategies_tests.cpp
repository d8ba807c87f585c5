#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "defisim/scenario.hpp"
#include "defisim/strategies.hpp"

using namespace defisim;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

const std::set<Role> kBuyRoles = {Role::Trader, Role::Lender, Role::Borrower};
const std::set<Role> kDonateRoles = {Role::Lender, Role::Borrower, Role::YieldFarmer,
                                     Role::YieldSource};

// Capacity-capped profit prediction for the donation play at arbitrary
// parameters, written out independently of the runner.
double bd_take_oracle(const BDScenarioVars& v, const BDParams& p) {
    double debt_x = p.iter * (v.borrowable_ib + p.init_mint);
    double collat_a = p.iter * p.init_mint + (p.iter - 1) * v.borrowable_ib;
    double vault_float = v.supply_ib - v.borrowable_ib;
    double eps = vault_float > 0.0 ? 1.0 + p.donate / vault_float : 1.0;
    double take;
    if (p.enhanced) {
        double drain = std::min(v.borrowable_s, std::max(0.0, p.collateral_b * v.cr_s - debt_x));
        double tokens = std::min(debt_x, p.collateral_b * (1.0 - v.liq_incentive) / eps);
        double redeemed = std::min(tokens, collat_a);
        take = drain + tokens * eps * v.liq_incentive / (1.0 - v.liq_incentive) + redeemed * eps;
    } else {
        take = std::min(v.cr_ib * eps * collat_a, v.borrowable_s + p.collateral_b);
    }
    double recovered = v.borrowable_ib + p.init_mint;
    return take + recovered - p.flash_total() / (1.0 - v.flash_fee);
}

}  // namespace

TEST_CASE("single-round closed form on the reference desk") {
    BBClosedForm cf = bb_single_formula(10000.0, 0.9, 1000.0);
    CHECK(cf.feasible);
    CHECK(cf.out_star == doctest::Approx(2870.624736).epsilon(1e-9));
    CHECK(cf.profit == doctest::Approx(7129.375264).epsilon(1e-9));
    CHECK(cf.profit == doctest::Approx(10000.0 - cf.out_star).epsilon(1e-12));
    // The optimum is the drain point: capacity there equals the market.
    CHECK(rel(cf.out_star * (1.0 + cf.out_star / 1000.0) * 0.9, 10000.0) <= 1e-12);
}

TEST_CASE("drain size inverts the borrowing capacity curve") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        double liq = std::uniform_real_distribution<double>(10.0, 1e7)(rng);
        double cr = std::uniform_real_distribution<double>(0.05, 0.99)(rng);
        double reserve = std::uniform_real_distribution<double>(10.0, 1e6)(rng);
        double x = bb_drain_out(liq, cr, reserve);
        // The sqrt cancels for tiny drains, so allow a little slack.
        CHECK(rel(x * (1.0 + x / reserve) * cr, liq) <= 1e-9);
    }
}

TEST_CASE("single-round profit curve peaks at the drain point") {
    const double init = 10000.0, cr = 0.9, l0 = 1000.0;
    BBClosedForm cf = bb_single_formula(init, cr, l0);
    double at_star = bb_single_profit_at(cf.out_star, init, cr, l0);
    CHECK(at_star == doctest::Approx(cf.profit).epsilon(1e-12));
    CHECK(bb_single_profit_at(cf.out_star * 0.9, init, cr, l0) < at_star);
    CHECK(bb_single_profit_at(cf.out_star * 1.1, init, cr, l0) < at_star);
    // Past the drain point the market is the cap, so profit falls linearly.
    double over = cf.out_star * 1.5;
    CHECK(bb_single_profit_at(over, init, cr, l0) ==
          doctest::Approx(init - over).epsilon(1e-12));
}

TEST_CASE("single-round simulation matches the formula across parameters") {
    for (double init : {2000.0, 10000.0, 50000.0}) {
        for (double cr : {0.5, 0.75, 0.9}) {
            for (double l0 : {500.0, 1000.0, 4000.0}) {
                BBClosedForm cf = bb_single_formula(init, cr, l0);
                if (!cf.feasible) continue;
                BBScenarioSpec spec;
                spec.reserve_s = spec.reserve_m = l0;
                spec.market_stable = init;
                spec.cr_m = spec.cr_s = cr;
                Env env = build_env(make_bb_scenario(spec));
                AttackReport r = bb_single_run(env, {cf.out_star, 1});
                REQUIRE(r.completed);
                CHECK(r.feasible);
                CHECK(rel(r.simulated_profit, cf.profit) <= 1e-9);
                CHECK(rel(r.closed_form_profit, cf.profit) <= 1e-12);
                CHECK(r.roleplay.combined == kBuyRoles);
                CHECK(r.roleplay.multi_role);
                CHECK(r.conservation_drift <= 1e-12);
                CHECK(r.telescoping_error <= 1e-9);
                // The drain swap empties the market's stable balance.
                CHECK(r.residual_market_stable <= 1e-6 * init);
            }
        }
    }
}

TEST_CASE("simulation tracks the profit curve away from the optimum") {
    const double init = 10000.0, cr = 0.9, l0 = 1000.0;
    BBClosedForm cf = bb_single_formula(init, cr, l0);
    for (double scale : {0.5, 0.8, 1.3}) {
        Env env = build_env(make_bb_scenario({}));
        double out = cf.out_star * scale;
        AttackReport r = bb_single_run(env, {out, 1});
        CHECK(rel(r.simulated_profit, bb_single_profit_at(out, init, cr, l0)) <= 1e-9);
    }
}

TEST_CASE("multi-round play drains the desk down to the fixed point") {
    Env env = build_env(make_bb_scenario({}));
    AttackReport r = bb_multi_run(env, {2870.624736, 400});
    REQUIRE(r.completed);
    CHECK(r.feasible);
    CHECK(r.rounds_executed > 2);
    // The alternating rounds contract the market's stable balance onto
    // reserve * (1 - cr) / cr, inside the stated retention bound.
    CHECK(r.residual_bound == doctest::Approx(122.222222).epsilon(1e-6));
    CHECK(r.residual_market_stable == doctest::Approx(111.111111).epsilon(1e-6));
    CHECK(r.residual_market_stable <= r.residual_bound * (1.0 + 1e-9));
    CHECK(r.simulated_profit == doctest::Approx(9888.888889).epsilon(1e-6));
    CHECK(rel(r.identity_profit, r.simulated_profit) <= 1e-9);
    CHECK(r.roleplay.combined == kBuyRoles);
    CHECK(r.conservation_drift <= 1e-12);
    CHECK(r.bad_debt > 0.0);
}

TEST_CASE("multi-round play also recycles manipulated tokens seeded in the market") {
    BBScenarioSpec spec;
    spec.market_manipulated = 600.0;
    Env multi_env = build_env(make_bb_scenario(spec));
    AttackReport multi = bb_multi_run(multi_env, {2870.624736, 400});
    REQUIRE(multi.completed);
    double bound = bb_residual_bound(0.9, 1000.0, 600.0);
    CHECK(multi.residual_bound == doctest::Approx(bound).epsilon(1e-12));
    CHECK(multi.residual_market_stable <= bound * (1.0 + 1e-9));
    // Fixed point with the seeded tokens absorbed into the pool.
    CHECK(multi.residual_market_stable ==
          doctest::Approx((0.1 / 0.9) * 1000.0 * 1000.0 / 1600.0).epsilon(1e-4));
    CHECK(rel(multi.identity_profit, multi.simulated_profit) <= 1e-9);

    Env single_env = build_env(make_bb_scenario(spec));
    AttackReport single = bb_single_run(single_env, {2870.624736, 1});
    CHECK(multi.simulated_profit > single.simulated_profit + 1.0);
}

TEST_CASE("donation closed forms on the reference desk") {
    BDScenarioVars v{1000.0, 400.0, 5000.0, 0.9, 0.9, 0.1, 0.0};

    BDClosedForm prim = bd_formula(v, 5, 100.0, false);
    REQUIRE(prim.feasible);
    CHECK(prim.collateral_b == doctest::Approx(2777.777778).epsilon(1e-9));
    CHECK(prim.epsilon == doctest::Approx(4.115226337).epsilon(1e-9));
    CHECK(prim.donate == doctest::Approx(1869.135802).epsilon(1e-9));
    CHECK(prim.flash_total == doctest::Approx(4746.913580).epsilon(1e-9));
    CHECK(prim.profit == doctest::Approx(3530.864198).epsilon(1e-9));
    // Equality point: the donated price lets A's collateral cover exactly the
    // market's stable plus B's buffer.
    double collat_a = 5 * 100.0 + 4 * 400.0;
    CHECK(rel(v.cr_ib * prim.epsilon * collat_a, v.borrowable_s + prim.collateral_b) <= 1e-12);
    CHECK(rel(prim.donate, (prim.epsilon - 1.0) * (v.supply_ib - v.borrowable_ib)) <= 1e-12);

    BDClosedForm enh = bd_formula(v, 5, 100.0, true);
    REQUIRE(enh.feasible);
    CHECK(enh.collateral_b == doctest::Approx(8333.333333).epsilon(1e-9));
    CHECK(enh.epsilon == doctest::Approx(3.571428571).epsilon(1e-9));
    CHECK(enh.donate == doctest::Approx(1542.857143).epsilon(1e-9));
    CHECK(enh.profit == doctest::Approx(3857.142857).epsilon(1e-9));
    // Equality point: B's discounted collateral retires exactly A's parked
    // shares through the liquidation loop.
    CHECK(rel(enh.collateral_b * (1.0 - v.liq_incentive) / enh.epsilon, collat_a) <= 1e-12);

    // The flash fee only drags the financing leg.
    BDScenarioVars vf = v;
    vf.flash_fee = 0.0009;
    BDClosedForm prim_fee = bd_formula(vf, 5, 100.0, false);
    CHECK(prim_fee.profit == doctest::Approx(3526.588127).epsilon(1e-9));
    BDClosedForm enh_fee = bd_formula(vf, 5, 100.0, true);
    CHECK(enh_fee.profit == doctest::Approx(3848.156198).epsilon(1e-9));
}

TEST_CASE("donation simulation matches the formula on the desk") {
    BDScenarioSpec spec;  // flash fee zero
    for (bool enhanced : {false, true}) {
        Env env = build_env(make_bd_scenario(spec));
        BDScenarioVars v = bd_vars(env);
        BDClosedForm cf = bd_formula(v, 5, 100.0, enhanced);
        REQUIRE(cf.feasible);
        BDParams p = bd_params_from_formula(cf, 5, 100.0, enhanced);
        AttackReport r = enhanced ? bd_enhanced_run(env, p) : bd_primitive_run(env, p);
        REQUIRE(r.completed);
        CHECK(r.note.empty());
        CHECK(r.feasible);
        CHECK(rel(r.simulated_profit, cf.profit) <= 1e-9);
        CHECK(rel(r.closed_form_profit, cf.profit) <= 1e-12);
        CHECK(rel(r.epsilon_measured, r.epsilon_expected) <= 1e-12);
        CHECK(rel(r.epsilon_expected, cf.epsilon) <= 1e-12);
        CHECK(r.controlled == std::set<AgentId>{"contract_a", "contract_b"});
        CHECK(r.conservation_drift <= 1e-12);
        CHECK(r.telescoping_error <= 1e-9);
        CHECK(r.bad_debt > 0.0);
        // Primitive: B walks away from its full share debt. Enhanced: the
        // liquidation loop retires all but the slice A's collateral cannot
        // back, which is exactly the market's original float.
        double b_share_debt =
            env.market->positions.at("contract_b").debt.at(env.vault->share);
        if (enhanced)
            CHECK(b_share_debt == doctest::Approx(400.0).epsilon(1e-9));
        else
            CHECK(b_share_debt == doctest::Approx(5 * (400.0 + 100.0)).epsilon(1e-9));
        std::set<Role> expect = kDonateRoles;
        if (enhanced) expect.insert(Role::Liquidator);
        CHECK(r.roleplay.combined == expect);
    }
}

TEST_CASE("donation simulation pays the flash fee when one is charged") {
    BDScenarioSpec spec;
    spec.flash_fee = 0.0009;
    for (bool enhanced : {false, true}) {
        Env env = build_env(make_bd_scenario(spec));
        BDClosedForm cf = bd_formula(bd_vars(env), 5, 100.0, enhanced);
        AttackReport r = enhanced
                             ? bd_enhanced_run(env, bd_params_from_formula(cf, 5, 100.0, true))
                             : bd_primitive_run(env, bd_params_from_formula(cf, 5, 100.0, false));
        REQUIRE(r.completed);
        CHECK(rel(r.simulated_profit, cf.profit) <= 1e-9);
        CHECK(r.flash_fee_paid ==
              doctest::Approx(cf.flash_total * (1.0 / (1.0 - 0.0009) - 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("off-equality parameters still match the capacity-capped prediction") {
    struct Case {
        bool enhanced;
        double donate_scale;
        double collb_scale;
    };
    // Collateral below the full-pass requirement would cut the iteration loop
    // short, which the fixed-pass prediction does not model; scales stay at or
    // above one for the primitive's buffer.
    for (const Case& c : {Case{false, 0.8, 1.0}, Case{false, 1.0, 1.2}, Case{false, 1.3, 1.0},
                          Case{true, 1.15, 1.0}, Case{true, 1.0, 0.9}}) {
        Env env = build_env(make_bd_scenario({}));
        BDScenarioVars v = bd_vars(env);
        BDClosedForm cf = bd_formula(v, 5, 100.0, c.enhanced);
        BDParams p = bd_params_from_formula(cf, 5, 100.0, c.enhanced);
        p.donate *= c.donate_scale;
        p.collateral_b *= c.collb_scale;
        AttackReport r = c.enhanced ? bd_enhanced_run(env, p) : bd_primitive_run(env, p);
        REQUIRE(r.completed);
        double predicted = bd_take_oracle(v, p);
        CHECK(rel(r.closed_form_profit, predicted) <= 1e-12);
        CHECK(rel(r.simulated_profit, predicted) <= 1e-9);
    }
}

TEST_CASE("running out of borrowing capacity ends the loop early with a note") {
    // Parameters sized for ten passes but asked to run sixty: the extra
    // passes find no capacity and the run says so instead of spinning.
    Env env = build_env(make_bd_scenario({}));
    BDScenarioVars v = bd_vars(env);
    BDClosedForm cf = bd_formula(v, 10, 100.0, false);
    REQUIRE(cf.feasible);
    BDParams p = bd_params_from_formula(cf, 10, 100.0, false);
    p.iter = 60;
    AttackReport r = bd_primitive_run(env, p);
    CHECK(r.completed);
    CHECK(r.note.find("exhausted after 10 passes") != std::string::npos);
}

TEST_CASE("infeasible configurations are reported, not run blind") {
    BDScenarioVars v{1000.0, 400.0, 5000.0, 0.9, 0.9, 0.1, 0.6};
    BDClosedForm cf = bd_formula(v, 5, 100.0, false);
    CHECK(!cf.feasible);
    CHECK(!cf.note.empty());

    BDScenarioVars all_lent = v;
    all_lent.flash_fee = 0.0;
    all_lent.borrowable_ib = 1000.0;  // no float outside the market
    CHECK(!bd_formula(all_lent, 5, 100.0, false).feasible);

    CHECK(!bb_single_formula(0.0, 0.9, 1000.0).feasible);

    // Swapping three times the market's worth completes but loses money.
    Env env = build_env(make_bb_scenario({}));
    AttackReport r = bb_single_run(env, {30000.0, 1});
    CHECK(r.completed);
    CHECK(!r.feasible);
    CHECK(r.simulated_profit < 0.0);
}

TEST_CASE("strategies refuse an environment missing their components") {
    Env bare;
    bare.world.register_asset("USD", AssetClass::Stable);
    bare.world.register_agent("alice");
    CHECK_THROWS_AS(bb_single_run(bare, {1.0, 1}), SimError);
    CHECK_THROWS_AS(bb_multi_run(bare, {1.0, 2}), SimError);
    BDParams p;
    p.iter = 1;
    CHECK_THROWS_AS(bd_primitive_run(bare, p), SimError);
    CHECK_THROWS_AS(bd_enhanced_run(bare, p), SimError);
}
