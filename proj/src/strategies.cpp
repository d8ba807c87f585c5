#include "defisim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace defisim {

namespace {

double rel_eps(double scale) { return 1e-9 * std::max(1.0, std::fabs(scale)); }

void ensure_agent(World& w, const AgentId& id) {
    if (!w.has_agent(id)) w.register_agent(id);
}

double rate_or_zero(const LendingMarket& m, const AssetId& asset) {
    auto it = m.collateral_rate.find(asset);
    return it == m.collateral_rate.end() ? 0.0 : it->second;
}

std::vector<AgentId> tracked_agents(const Env& env) {
    // Track everyone, components included, so the ledger shows counterparty
    // losses next to attacker gains.
    std::vector<AgentId> out;
    for (const auto& [agent, wallet] : env.world.holdings()) {
        (void)wallet;
        out.push_back(agent);
    }
    return out;
}

double exit_total(const Env& env, const std::set<AgentId>& agents) {
    double total = 0.0;
    for (const auto& a : agents) total += exit_value(env, a);
    return total;
}

void fill_end_state(AttackReport& r, const Env& env, EventRecorder& rec) {
    if (rec.in_action()) rec.end();
    if (env.market) {
        if (env.pool) {
            r.residual_market_stable = env.market->borrowable(env.world, env.pool->stable);
            r.residual_market_manipulated =
                env.market->borrowable(env.world, env.pool->manipulated);
        } else if (env.vault) {
            r.residual_market_stable = env.market->borrowable(env.world, env.vault->underlying);
            r.residual_market_manipulated = env.market->borrowable(env.world, env.vault->share);
        }
        r.bad_debt = env.market->bad_debt(price_fn(env));
    }
    r.exit_value_after = exit_total(env, r.controlled);
    r.simulated_profit = r.exit_value_after - r.exit_value_before;
    r.feasible = r.completed && r.simulated_profit > rel_eps(r.exit_value_before);
    r.conservation_drift = env.world.conservation_drift();
    r.telescoping_error = rec.telescoping_error();
    r.ledger = rec.ledger();
    r.roleplay = rec.classify(r.controlled);
    r.actions = rec.actions();
}

}  // namespace

// ---------- closed forms ----------

double bb_drain_out(double liquidity, double rate, double reserve_c) {
    if (liquidity <= 0.0 || rate <= 0.0 || reserve_c <= 0.0) return 0.0;
    // Smallest x with x (1 + x / reserve_c) rate = liquidity.
    return 0.5 * reserve_c * (std::sqrt(1.0 + 4.0 * liquidity / (rate * reserve_c)) - 1.0);
}

BBClosedForm bb_single_formula(double init_s, double cr_m, double l0) {
    BBClosedForm cf;
    if (init_s <= 0.0 || cr_m <= 0.0 || l0 <= 0.0) return cf;
    cf.out_star = bb_drain_out(init_s, cr_m, l0);
    cf.profit = init_s - cf.out_star;
    cf.feasible = cf.profit > 0.0;
    return cf;
}

double bb_single_profit_at(double out_s, double init_s, double cr_m, double l0) {
    if (out_s <= 0.0 || l0 <= 0.0) return 0.0;
    double capacity = out_s * (1.0 + out_s / l0) * cr_m;
    return std::min(capacity, std::max(init_s, 0.0)) - out_s;
}

double bb_residual_bound(double cr_m, double l0, double init_m) {
    if (cr_m <= 0.0 || l0 <= 0.0) return 0.0;
    return (1.0 - cr_m) * (2.0 - cr_m) / cr_m * l0 * l0 / (l0 + init_m);
}

BBMultiClosedForm bb_multi_formula(double init_s, double init_m, double cr_m, double l0) {
    BBMultiClosedForm cf;
    cf.residual_bound = bb_residual_bound(cr_m, l0, init_m);
    if (l0 + init_m > 0.0)
        cf.profit_at_bound = init_s + l0 * init_m / (l0 + init_m) - cf.residual_bound;
    return cf;
}

BDScenarioVars bd_vars(const Env& env) {
    if (!env.market || !env.vault || !env.flashloan)
        throw SimError(Err::BadScenario, "donation strategy needs market, vault and flashloan");
    BDScenarioVars v;
    v.supply_ib = env.vault->share_supply;
    v.borrowable_ib = env.market->borrowable(env.world, env.vault->share);
    v.borrowable_s = env.market->borrowable(env.world, env.vault->underlying);
    v.cr_ib = rate_or_zero(*env.market, env.vault->share);
    v.cr_s = rate_or_zero(*env.market, env.vault->underlying);
    v.liq_incentive = env.market->liq_incentive;
    v.flash_fee = env.flashloan->fee;
    return v;
}

BDClosedForm bd_formula(const BDScenarioVars& v, int iter, double init_mint, bool enhanced) {
    BDClosedForm cf;
    if (iter < 1 || init_mint < 0.0) {
        cf.note = "iteration count must be at least 1 and the initial mint nonnegative";
        return cf;
    }
    const double bib = v.borrowable_ib;
    const double bs = v.borrowable_s;
    const double debt_x = iter * (bib + init_mint);
    const double collat_a = iter * init_mint + (iter - 1) * bib;
    const double vault_float = v.supply_ib - bib;
    if (debt_x <= 0.0 || collat_a <= 0.0) {
        cf.note = "no collateral remains for the donation to inflate";
        return cf;
    }
    if (vault_float <= 0.0) {
        cf.note = "no vault shares outside the market, donation has no lever";
        return cf;
    }
    if (v.cr_s <= 0.0 || (!enhanced && v.cr_ib <= 0.0)) {
        cf.note = "required collateral rate is zero";
        return cf;
    }
    if (enhanced) {
        cf.collateral_b = (debt_x + bs) / v.cr_s;
        cf.epsilon = (1.0 - v.liq_incentive) * cf.collateral_b / collat_a;
    } else {
        cf.collateral_b = debt_x / v.cr_s;
        cf.epsilon = (bs + cf.collateral_b) / (v.cr_ib * collat_a);
    }
    if (cf.epsilon < 1.0) {
        cf.note = "target price ratio is below one, donation cannot reach it";
        return cf;
    }
    cf.donate = (cf.epsilon - 1.0) * vault_float;
    cf.flash_total = init_mint + cf.collateral_b + cf.donate;
    cf.profit =
        bs + cf.collateral_b + bib + init_mint - cf.flash_total / (1.0 - v.flash_fee);
    cf.feasible = cf.profit > 0.0;
    if (!cf.feasible) cf.note = "flash fee exceeds the extracted value";
    return cf;
}

BDParams bd_params_from_formula(const BDClosedForm& cf, int iter, double init_mint,
                                bool enhanced) {
    BDParams p;
    p.iter = iter;
    p.init_mint = init_mint;
    p.collateral_b = cf.collateral_b;
    p.donate = cf.donate;
    p.enhanced = enhanced;
    return p;
}

// ---------- exit valuation ----------

double exit_value(const Env& env, const AgentId& agent) {
    double total = 0.0;
    for (const auto& [asset, cls] : env.world.assets()) {
        double bal = env.world.balance(agent, asset);
        if (bal <= 0.0) continue;
        switch (cls) {
            case AssetClass::Manipulated:
                // Worth what the pool actually pays for dumping it, not the
                // spot mark.
                if (env.pool && env.pool->trades(asset))
                    total += env.pool->quote(env.world, asset, bal);
                break;
            case AssetClass::InterestBearing:
                if (env.vault && env.vault->share == asset && env.vault->share_supply > 0.0)
                    total += bal * env.vault->share_price(env.world);
                break;
            default:
                total += bal * price(env, asset);
                break;
        }
    }
    return total;
}

// ---------- borrow-and-buy ----------

AttackReport bb_single_run(Env& env, const BBParams& p) {
    AttackReport r;
    r.strategy = "bb";
    if (!env.pool || !env.market)
        throw SimError(Err::BadScenario, "buy strategy needs pool and market");
    World& w = env.world;
    const AssetId stable = env.pool->stable;
    const AssetId manip = env.pool->manipulated;
    const AgentId attacker = "attacker";
    ensure_agent(w, attacker);
    r.controlled = {attacker};

    const double init_s = env.market->borrowable(w, stable);
    const double l0 = env.pool->reserve_s(w);
    const double cr_m = rate_or_zero(*env.market, manip);
    r.closed_form_profit = bb_single_profit_at(p.out_s, init_s, cr_m, l0);

    if (p.out_s < 0.0) throw SimError(Err::NegativeAmount, "swap budget");
    w.seed(attacker, stable, p.out_s);
    r.seeded_budget = p.out_s;

    EventRecorder rec(env, tracked_agents(env));
    r.exit_value_before = exit_total(env, r.controlled);
    try {
        if (p.out_s > 0.0) {
            rec.act(attacker, Role::Trader, [&] {
                double got = env.pool->swap(w, attacker, stable, p.out_s);
                rec.log({"swap", attacker, stable, p.out_s, got});
            });
        }
        double bought = w.balance(attacker, manip);
        if (bought > 0.0) {
            rec.act(attacker, Role::Lender, [&] {
                env.market->deposit(w, attacker, manip, bought);
                rec.log({"deposit", attacker, manip, bought, bought});
            });
        }
        double amt = env.market->max_borrow(w, price_fn(env), attacker, stable);
        if (amt > 0.0) {
            rec.act(attacker, Role::Borrower, [&] {
                env.market->borrow(w, price_fn(env), attacker, stable, amt);
                rec.log({"borrow", attacker, stable, amt, amt});
            });
        }
        r.completed = true;
    } catch (const SimError& e) {
        r.note = e.what();
    }
    fill_end_state(r, env, rec);
    return r;
}

namespace {

// One drain round of the alternating multi-round play. Pays up to target of
// pay_asset into the pool (funding further payments by borrowing pay_asset as
// collateral accrues), deposits everything bought, then tops up with a final
// max borrow and reclaims whatever collateral the debt does not pin.
struct RoundOutcome {
    bool stalled = false;
    double paid = 0.0;
};

RoundOutcome run_round(Env& env, EventRecorder& rec, const AgentId& agent,
                       const AgentId& prev_agent, const AssetId& pay, const AssetId& buy,
                       double target) {
    World& w = env.world;
    LendingMarket& market = *env.market;
    ConstantProductPool& pool = *env.pool;
    RoundOutcome out;

    rec.act(agent, Role::Lender, [&] {
        if (agent != prev_agent) {
            for (const AssetId& a : {pool.stable, pool.manipulated}) {
                double bal = w.balance(prev_agent, a);
                if (bal <= 0.0) continue;
                w.transfer(prev_agent, agent, a, bal);
                rec.log({"handoff", agent, a, bal, bal});
            }
        }
        // Bootstrap: everything already held of the bought-side asset backs
        // the round's borrowing; reclaimed at round end.
        double bal = w.balance(agent, buy);
        if (bal > 0.0) {
            market.deposit(w, agent, buy, bal);
            rec.log({"deposit", agent, buy, bal, bal});
        }
    });

    const double pay_floor = 1e-12 * std::max(1.0, target);
    int guard = 0;
    while (out.paid < target - rel_eps(target) && guard++ < 10000) {
        double tranche = std::min(w.balance(agent, pay), target - out.paid);
        if (tranche > pay_floor) {
            rec.act(agent, Role::Trader, [&] {
                double got = pool.swap(w, agent, pay, tranche);
                rec.log({"swap", agent, pay, tranche, got});
            });
            out.paid += tranche;
            rec.act(agent, Role::Lender, [&] {
                double bal = w.balance(agent, buy);
                market.deposit(w, agent, buy, bal);
                rec.log({"deposit", agent, buy, bal, bal});
            });
            continue;
        }
        double borrow = std::min(market.max_borrow(w, price_fn(env), agent, pay),
                                 target - out.paid);
        if (borrow <= pay_floor) {
            out.stalled = true;
            return out;
        }
        rec.act(agent, Role::Borrower, [&] {
            market.borrow(w, price_fn(env), agent, pay, borrow);
            rec.log({"borrow", agent, pay, borrow, borrow});
        });
    }

    // Drain whatever the just-priced collateral supports.
    double final_borrow = market.max_borrow(w, price_fn(env), agent, pay);
    if (final_borrow > pay_floor) {
        rec.act(agent, Role::Borrower, [&] {
            market.borrow(w, price_fn(env), agent, pay, final_borrow);
            rec.log({"borrow", agent, pay, final_borrow, final_borrow});
        });
    }
    // Backward rounds dump the borrowed tokens before reclaiming collateral:
    // the dump lowers the debt's mark and frees more of the bootstrap.
    if (pay == pool.manipulated) {
        double bal = w.balance(agent, pay);
        if (bal > pay_floor) {
            rec.act(agent, Role::Trader, [&] {
                double got = pool.swap(w, agent, pay, bal);
                rec.log({"swap", agent, pay, bal, got});
            });
        }
    }
    double reclaim = market.max_withdraw(w, price_fn(env), agent, buy);
    if (reclaim > rel_eps(reclaim)) {
        rec.act(agent, Role::Lender, [&] {
            market.withdraw(w, price_fn(env), agent, buy, reclaim);
            rec.log({"withdraw", agent, buy, reclaim, reclaim});
        });
    }
    return out;
}

}  // namespace

AttackReport bb_multi_run(Env& env, const BBParams& p) {
    AttackReport r;
    r.strategy = "bb-multi";
    if (!env.pool || !env.market)
        throw SimError(Err::BadScenario, "buy strategy needs pool and market");
    World& w = env.world;
    const AssetId stable = env.pool->stable;
    const AssetId manip = env.pool->manipulated;
    const double cr_m = rate_or_zero(*env.market, manip);
    const double cr_s = rate_or_zero(*env.market, stable);

    const double init_s0 = env.market->borrowable(w, stable);
    const double init_m0 = env.market->borrowable(w, manip);
    const double l0_s = env.pool->reserve_s(w);
    const double l0_m = env.pool->reserve_m(w);
    r.residual_bound = bb_residual_bound(cr_m, l0_s, init_m0);

    const int max_rounds = std::max(1, p.rounds);
    std::vector<AgentId> agents;
    for (int k = 1; k <= max_rounds; ++k) {
        AgentId id = k == 1 ? AgentId("attacker") : "attacker_r" + std::to_string(k);
        ensure_agent(w, id);
        agents.push_back(id);
        r.controlled.insert(id);
    }
    if (p.out_s < 0.0) throw SimError(Err::NegativeAmount, "swap budget");
    w.seed(agents.front(), stable, p.out_s);
    r.seeded_budget = p.out_s;

    EventRecorder rec(env, tracked_agents(env));
    r.exit_value_before = exit_total(env, r.controlled);
    try {
        int idle = 0;
        AgentId prev = agents.front();
        for (int k = 1; k <= max_rounds && idle < 2; ++k) {
            const bool forward = (k % 2 == 1);
            const AgentId& agent = agents[static_cast<size_t>(k - 1)];
            bool execute = false;
            double target = 0.0;
            if (forward && cr_m > 0.0) {
                double liq = env.market->borrowable(w, stable);
                target = bb_drain_out(liq, cr_m, env.pool->reserve_s(w));
                execute = liq - target > rel_eps(liq);
            } else if (!forward && cr_s > 0.0) {
                double liq = env.market->borrowable(w, manip);
                double rs = env.pool->reserve_s(w);
                double rm = env.pool->reserve_m(w);
                if (liq > 0.0 && rm > 0.0) {
                    // Dump-everything payoff: stable bought minus the
                    // collateral the leftover debt pins at the new price.
                    double bought = rs * liq / (rm + liq);
                    double pinned = rs * rm * liq / (cr_s * (rm + liq) * (rm + liq));
                    target = liq;
                    execute = bought - pinned > rel_eps(bought);
                }
            }
            if (!execute) {
                ++idle;
                continue;
            }
            idle = 0;
            RoundOutcome out = run_round(env, rec, agent, prev, forward ? stable : manip,
                                         forward ? manip : stable, target);
            prev = agent;
            ++r.rounds_executed;
            if (out.stalled) {
                r.note = "round " + std::to_string(k) + " stalled before its drain target";
                break;
            }
        }
        r.completed = true;
    } catch (const SimError& e) {
        r.note = e.what();
    }
    fill_end_state(r, env, rec);
    // Stable-conservation identity: whatever the market and pool no longer
    // hold, the attacker does (seed cancels on both sides).
    r.identity_profit =
        init_s0 + (l0_s - env.pool->reserve_s(w)) - r.residual_market_stable;
    r.closed_form_profit =
        bb_multi_formula(init_s0, init_m0, cr_m, (l0_s + l0_m) / 2.0).profit_at_bound;
    return r;
}

// ---------- borrow-and-donate ----------

namespace {

AttackReport bd_run(Env& env, const BDParams& p) {
    AttackReport r;
    r.strategy = p.enhanced ? "bd-enhanced" : "bd";
    const BDScenarioVars v = bd_vars(env);
    World& w = env.world;
    LendingMarket& market = *env.market;
    InterestBearingVault& vault = *env.vault;
    const AssetId stable = vault.underlying;
    const AssetId share = vault.share;
    const AgentId a = "contract_a";
    const AgentId b = "contract_b";
    ensure_agent(w, a);
    ensure_agent(w, b);
    r.controlled = {a, b};
    r.flash_total = p.flash_total();

    if (p.iter < 1) throw SimError(Err::BadScenario, "iteration count must be at least 1");
    if (p.init_mint < 0.0 || p.collateral_b < 0.0 || p.donate < 0.0)
        throw SimError(Err::NegativeAmount, "strategy parameter");

    // Closed-form prediction at these exact parameters, capacity and float
    // capped the way the market will cap them.
    {
        const double debt_x = p.iter * (v.borrowable_ib + p.init_mint);
        const double collat_a = p.iter * p.init_mint + (p.iter - 1) * v.borrowable_ib;
        const double vault_float = v.supply_ib - v.borrowable_ib;
        const double eps = vault_float > 0.0 ? 1.0 + p.donate / vault_float : 1.0;
        r.epsilon_expected = eps;
        const double recovered = v.borrowable_ib + p.init_mint;
        double take;
        if (p.enhanced) {
            double drain =
                std::min(v.borrowable_s, std::max(0.0, p.collateral_b * v.cr_s - debt_x));
            // Repaid tokens are capped by B's debt and seizable collateral;
            // only the slice backed by A's parked shares also round-trips
            // through withdraw + redeem.
            double tokens =
                std::min(debt_x, p.collateral_b * (1.0 - v.liq_incentive) / eps);
            double redeemed = std::min(tokens, collat_a);
            take = drain + tokens * eps * v.liq_incentive / (1.0 - v.liq_incentive) +
                   redeemed * eps;
        } else {
            take = std::min(v.cr_ib * eps * collat_a, v.borrowable_s + p.collateral_b);
        }
        r.closed_form_profit = take + recovered - r.flash_total / (1.0 - v.flash_fee);
    }

    EventRecorder rec(env, tracked_agents(env));
    r.exit_value_before = exit_total(env, r.controlled);
    std::uint64_t loan = 0;
    try {
        rec.act(a, Role::Borrower, [&] {
            loan = env.flashloan->borrow(w, a, stable, r.flash_total);
            rec.log({"flash_borrow", a, stable, r.flash_total, env.flashloan->owed(loan)});
            if (p.collateral_b > 0.0) {
                w.transfer(a, b, stable, p.collateral_b);
                rec.log({"fund", b, stable, p.collateral_b, p.collateral_b});
            }
        });
        if (p.init_mint > 0.0) {
            rec.act(a, Role::YieldFarmer, [&] {
                double shares = vault.mint(w, a, p.init_mint);
                rec.log({"mint", a, share, p.init_mint, shares});
            });
            rec.act(a, Role::Lender, [&] {
                double bal = w.balance(a, share);
                market.deposit(w, a, share, bal);
                rec.log({"deposit", a, share, bal, bal});
            });
        }
        if (p.collateral_b > 0.0) {
            rec.act(b, Role::Lender, [&] {
                market.deposit(w, b, stable, p.collateral_b);
                rec.log({"deposit", b, stable, p.collateral_b, p.collateral_b});
            });
        }

        // Round-trip the market's share float through B's debt into A's
        // collateral; every pass adds the float plus the initial mint.
        for (int k = 0; k < p.iter; ++k) {
            double avail = market.max_borrow(w, price_fn(env), b, share);
            if (avail <= rel_eps(avail)) {
                r.note = "iterations exhausted after " + std::to_string(k) + " passes";
                break;
            }
            rec.act(b, Role::Borrower, [&] {
                market.borrow(w, price_fn(env), b, share, avail);
                rec.log({"borrow", b, share, avail, avail});
                w.transfer(b, a, share, avail);
                rec.log({"fund", a, share, avail, avail});
            });
            rec.act(a, Role::Lender, [&] {
                market.deposit(w, a, share, avail);
                rec.log({"deposit", a, share, avail, avail});
            });
        }

        if (p.enhanced) {
            // B also walks out with every stable the market still lends.
            double drain = market.max_borrow(w, price_fn(env), b, stable);
            if (drain > rel_eps(drain)) {
                rec.act(b, Role::Borrower, [&] {
                    market.borrow(w, price_fn(env), b, stable, drain);
                    rec.log({"borrow", b, stable, drain, drain});
                    w.transfer(b, a, stable, drain);
                    rec.log({"fund", a, stable, drain, drain});
                });
            }
        }

        // Pull the unborrowed share float back out and cash it at par.
        double reclaim = market.max_withdraw(w, price_fn(env), a, share);
        if (reclaim > rel_eps(reclaim)) {
            rec.act(a, Role::Lender, [&] {
                market.withdraw(w, price_fn(env), a, share, reclaim);
                rec.log({"withdraw", a, share, reclaim, reclaim});
            });
            rec.act(a, Role::YieldFarmer, [&] {
                double got = vault.redeem(w, a, reclaim);
                rec.log({"redeem", a, share, reclaim, got});
            });
        }

        double px_before = vault.share_price(w);
        if (p.donate > 0.0) {
            rec.act(a, Role::YieldSource, [&] {
                double px_after = vault.donate(w, a, p.donate);
                rec.log({"donate", a, stable, p.donate, px_after});
                r.epsilon_measured = px_after / px_before;
            });
        } else {
            r.epsilon_measured = 1.0;
        }

        if (p.enhanced) {
            // Mint at the inflated price, retire B's share debt for the
            // incentive-boosted slice of B's stable collateral, and recycle
            // the freed shares through withdraw + redeem. Net per pass is the
            // liquidation bonus on top of the minted value.
            int guard = 0;
            while (guard++ < 64) {
                auto it = market.positions.find(b);
                if (it == market.positions.end()) break;
                if (market.healthy(price_fn(env), b)) break;
                double debt_b = 0.0, collat_b = 0.0;
                if (auto d = it->second.debt.find(share); d != it->second.debt.end())
                    debt_b = d->second;
                if (auto c = it->second.collateral.find(stable);
                    c != it->second.collateral.end())
                    collat_b = c->second;
                double px = price(env, share);
                double tokens = std::min({debt_b, collat_b * (1.0 - market.liq_incentive) / px,
                                          w.balance(a, stable) / px});
                if (tokens <= 1e-12 * std::max(1.0, debt_b)) break;
                double minted = 0.0;
                rec.act(a, Role::YieldFarmer, [&] {
                    minted = vault.mint(w, a, tokens * px);
                    rec.log({"mint", a, share, tokens * px, minted});
                });
                rec.act(a, Role::Liquidator, [&] {
                    auto seized = market.liquidate(w, price_fn(env), a, b, share, minted);
                    rec.log({"liquidate", a, share, minted, seized.value});
                });
                double freed = market.max_withdraw(w, price_fn(env), a, share);
                if (freed > rel_eps(freed)) {
                    rec.act(a, Role::Lender, [&] {
                        market.withdraw(w, price_fn(env), a, share, freed);
                        rec.log({"withdraw", a, share, freed, freed});
                    });
                    rec.act(a, Role::YieldFarmer, [&] {
                        double got = vault.redeem(w, a, freed);
                        rec.log({"redeem", a, share, freed, got});
                    });
                }
            }
        } else {
            // Borrow against the re-marked share collateral.
            double amt = market.max_borrow(w, price_fn(env), a, stable);
            if (amt > rel_eps(amt)) {
                rec.act(a, Role::Borrower, [&] {
                    market.borrow(w, price_fn(env), a, stable, amt);
                    rec.log({"borrow", a, stable, amt, amt});
                });
            }
        }

        rec.act(a, Role::Borrower, [&] {
            double owed = env.flashloan->owed(loan);
            r.flash_fee_paid = env.flashloan->repay(w, loan);
            rec.log({"flash_repay", a, stable, owed, r.flash_fee_paid});
        });
        r.completed = true;
    } catch (const SimError& e) {
        r.note = e.what();
    }
    if (r.completed && !env.flashloan->open().empty())
        throw std::logic_error("flash loan left open after a completed run");
    fill_end_state(r, env, rec);
    return r;
}

}  // namespace

AttackReport bd_primitive_run(Env& env, const BDParams& p) {
    BDParams q = p;
    q.enhanced = false;
    return bd_run(env, q);
}

AttackReport bd_enhanced_run(Env& env, const BDParams& p) {
    BDParams q = p;
    q.enhanced = true;
    return bd_run(env, q);
}

}  // namespace defisim
