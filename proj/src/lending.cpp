#include "defisim/lending.hpp"

#include <algorithm>
#include <cmath>

namespace defisim {

namespace {

// Health and repayment comparisons allow fp drift relative to the value scale;
// equality-seeking strategies land exactly on these boundaries.
double slack(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

double checked_price(const PriceFn& price, const AssetId& asset) {
    double px = price(asset);
    if (!(px >= 0.0) || !std::isfinite(px))
        throw SimError(Err::UnpricedAsset, asset + " has no usable price");
    return px;
}

}  // namespace

LendingMarket LendingMarket::create(World& w, const AgentId& account,
                                    const std::map<AssetId, double>& rates, double liq_incentive,
                                    const std::map<AssetId, Amount>& seeded_liquidity) {
    for (const auto& [asset, rate] : rates)
        if (rate < 0.0 || rate > 1.0)
            throw SimError(Err::BadScenario, "collateral rate out of [0,1] for " + asset);
    if (liq_incentive < 0.0 || liq_incentive >= 1.0)
        throw SimError(Err::BadScenario, "liquidation incentive out of [0,1)");
    LendingMarket m;
    m.account = account;
    m.collateral_rate = rates;
    m.liq_incentive = liq_incentive;
    w.register_agent(account);
    for (const auto& [asset, amt] : seeded_liquidity) {
        w.seed(account, asset, amt);
        m.supplied[asset] += amt;
    }
    return m;
}

const AccountPosition* LendingMarket::find_pos(const AgentId& agent) const {
    auto it = positions.find(agent);
    return it == positions.end() ? nullptr : &it->second;
}

void LendingMarket::deposit(World& w, const AgentId& agent, const AssetId& asset, Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "deposit");
    w.transfer(agent, account, asset, amt);
    pos(agent).collateral[asset] += amt;
    supplied[asset] += amt;
}

void LendingMarket::withdraw(World& w, const PriceFn& price, const AgentId& agent,
                             const AssetId& asset, Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "withdraw");
    AccountPosition& p = pos(agent);
    Amount held = p.collateral[asset];
    if (amt > held + slack(held))
        throw SimError(Err::InsufficientBalance, agent + " has only " + std::to_string(held) +
                                                     " " + asset + " deposited");
    if (amt > borrowable(w, asset) + slack(amt))
        throw SimError(Err::LiquidityExhausted, "market cannot pay out " + asset);
    // Post-withdraw health, at current prices.
    double px = checked_price(price, asset);
    auto rate_it = collateral_rate.find(asset);
    double rate = rate_it == collateral_rate.end() ? 0.0 : rate_it->second;
    double weighted_after = weighted_collateral(price, agent) - amt * px * rate;
    double debt = debt_value(price, agent);
    if (debt > weighted_after + slack(weighted_after))
        throw SimError(Err::UnhealthyWithdraw, agent + " would become undercollateralized");
    p.collateral[asset] = std::max(0.0, held - amt);
    supplied[asset] = std::max(0.0, supplied[asset] - amt);
    w.transfer(account, agent, asset, amt);
}

void LendingMarket::borrow(World& w, const PriceFn& price, const AgentId& agent,
                           const AssetId& asset, Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "borrow");
    Amount liquidity = borrowable(w, asset);
    // On a simultaneous breach the liquidity error wins; capacity is the
    // account's problem, liquidity is the market's.
    if (amt > liquidity + slack(liquidity))
        throw SimError(Err::LiquidityExhausted, "market holds " + std::to_string(liquidity) +
                                                    " " + asset + ", asked " + std::to_string(amt));
    double px = checked_price(price, asset);
    double debt_after = debt_value(price, agent) + amt * px;
    double capacity = weighted_collateral(price, agent);
    if (debt_after > capacity + slack(capacity))
        throw SimError(Err::CapacityExceeded,
                       agent + " capacity " + std::to_string(capacity) + ", debt would be " +
                           std::to_string(debt_after));
    pos(agent).debt[asset] += amt;
    total_debt[asset] += amt;
    w.transfer(account, agent, asset, amt);
}

void LendingMarket::repay(World& w, const AgentId& agent, const AssetId& asset, Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "repay");
    AccountPosition& p = pos(agent);
    Amount owed = p.debt[asset];
    if (amt > owed + slack(owed))
        throw SimError(Err::Overpay, agent + " owes only " + std::to_string(owed) + " " + asset);
    w.transfer(agent, account, asset, amt);
    p.debt[asset] = std::max(0.0, owed - amt);
    total_debt[asset] = std::max(0.0, total_debt[asset] - amt);
}

Amount LendingMarket::max_borrow(const World& w, const PriceFn& price, const AgentId& agent,
                                 const AssetId& asset) const {
    double px = checked_price(price, asset);
    if (!(px > 0.0)) return 0.0;
    double headroom = weighted_collateral(price, agent) - debt_value(price, agent);
    return std::max(0.0, std::min(headroom / px, borrowable(w, asset)));
}

Amount LendingMarket::max_withdraw(const World& w, const PriceFn& price, const AgentId& agent,
                                   const AssetId& asset) const {
    const AccountPosition* p = find_pos(agent);
    if (!p) return 0.0;
    auto held_it = p->collateral.find(asset);
    Amount held = held_it == p->collateral.end() ? 0.0 : held_it->second;
    Amount cap = std::min(held, borrowable(w, asset));
    auto rate_it = collateral_rate.find(asset);
    double rate = rate_it == collateral_rate.end() ? 0.0 : rate_it->second;
    double px = checked_price(price, asset);
    if (rate * px > 0.0) {
        double headroom = weighted_collateral(price, agent) - debt_value(price, agent);
        cap = std::min(cap, std::max(0.0, headroom / (px * rate)));
    }
    return cap;
}

LendingMarket::Seizure LendingMarket::liquidate(World& w, const PriceFn& price,
                                                const AgentId& liquidator, const AgentId& target,
                                                const AssetId& repay_asset, Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "liquidation repay");
    if (healthy(price, target))
        throw SimError(Err::TargetHealthy, target + " cannot be liquidated");
    AccountPosition& p = pos(target);
    Amount owed = p.debt[repay_asset];
    if (amt > owed + slack(owed))
        throw SimError(Err::Overpay, "target owes only " + std::to_string(owed) + " " +
                                         repay_asset);
    double repaid_value = amt * checked_price(price, repay_asset);
    double target_value = repaid_value / (1.0 - liq_incentive);
    if (target_value > collateral_value(price, target) + slack(target_value))
        throw SimError(Err::SeizureExceedsCollateral,
                       "collateral short of " + std::to_string(target_value));

    w.transfer(liquidator, account, repay_asset, amt);
    p.debt[repay_asset] = std::max(0.0, owed - amt);
    total_debt[repay_asset] = std::max(0.0, total_debt[repay_asset] - amt);

    Seizure seized;
    double remaining = target_value;
    for (auto& [asset, held] : p.collateral) {
        if (remaining <= 0.0 || held <= 0.0) continue;
        double px = checked_price(price, asset);
        if (!(px > 0.0)) continue;
        Amount take = std::min(held, remaining / px);
        if (take >= held - slack(held) / px) take = held;  // absorb fp drift at full seizure
        p.collateral[asset] = held - take;
        supplied[asset] = std::max(0.0, supplied[asset] - take);
        w.transfer(account, liquidator, asset, take);
        seized.amounts[asset] += take;
        seized.value += take * px;
        remaining -= take * px;
    }
    return seized;
}

double LendingMarket::collateral_value(const PriceFn& price, const AgentId& agent) const {
    const AccountPosition* p = find_pos(agent);
    if (!p) return 0.0;
    double v = 0.0;
    for (const auto& [asset, amt] : p->collateral) v += amt * checked_price(price, asset);
    return v;
}

double LendingMarket::weighted_collateral(const PriceFn& price, const AgentId& agent) const {
    const AccountPosition* p = find_pos(agent);
    if (!p) return 0.0;
    double v = 0.0;
    for (const auto& [asset, amt] : p->collateral) {
        auto it = collateral_rate.find(asset);
        if (it == collateral_rate.end()) continue;
        v += amt * checked_price(price, asset) * it->second;
    }
    return v;
}

double LendingMarket::debt_value(const PriceFn& price, const AgentId& agent) const {
    const AccountPosition* p = find_pos(agent);
    if (!p) return 0.0;
    double v = 0.0;
    for (const auto& [asset, amt] : p->debt) v += amt * checked_price(price, asset);
    return v;
}

bool LendingMarket::healthy(const PriceFn& price, const AgentId& agent) const {
    double weighted = weighted_collateral(price, agent);
    return debt_value(price, agent) <= weighted + slack(weighted);
}

Amount LendingMarket::bad_debt(const PriceFn& price) const {
    Amount total = 0.0;
    for (const auto& [agent, p] : positions) {
        (void)p;
        if (healthy(price, agent)) continue;
        total += std::max(0.0, debt_value(price, agent) - collateral_value(price, agent));
    }
    return total;
}

}  // namespace defisim
