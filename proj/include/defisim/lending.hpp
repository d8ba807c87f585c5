// Collateralized lending market. Deposited collateral sits in the market's
// ledger account and is itself lendable; health checks always use the prices
// passed in at call time, so an oracle move immediately re-rates every
// position. No interest accrues: attacks complete atomically.
#pragma once

#include <functional>

#include "defisim/world.hpp"

namespace defisim {

// Live price lookup, stable units per token.
using PriceFn = std::function<double(const AssetId&)>;

struct AccountPosition {
    std::map<AssetId, Amount> collateral;
    std::map<AssetId, Amount> debt;
};

class LendingMarket {
  public:
    AgentId account;
    // Per-asset collateral rate in [0, 1]; an asset's deposit supports
    // rate * value of debt. Assets missing from the map cannot collateralize.
    std::map<AssetId, double> collateral_rate;
    // Bonus granted to liquidators: repaying v of debt seizes v/(1-incentive)
    // of collateral value.
    double liq_incentive = 0.0;

    std::map<AgentId, AccountPosition> positions;
    std::map<AssetId, Amount> supplied;    // deposits + seeded liquidity
    std::map<AssetId, Amount> total_debt;  // outstanding borrows per asset

    static LendingMarket create(World& w, const AgentId& account,
                                const std::map<AssetId, double>& rates, double liq_incentive,
                                const std::map<AssetId, Amount>& seeded_liquidity);

    // Un-lent tokens available to borrow or withdraw right now.
    Amount borrowable(const World& w, const AssetId& asset) const {
        return w.balance(account, asset);
    }

    void deposit(World& w, const AgentId& agent, const AssetId& asset, Amount amt);
    void withdraw(World& w, const PriceFn& price, const AgentId& agent, const AssetId& asset,
                  Amount amt);
    void borrow(World& w, const PriceFn& price, const AgentId& agent, const AssetId& asset,
                Amount amt);
    void repay(World& w, const AgentId& agent, const AssetId& asset, Amount amt);
    Amount max_borrow(const World& w, const PriceFn& price, const AgentId& agent,
                      const AssetId& asset) const;
    // Largest collateral withdrawal keeping the account healthy, capped by the
    // market's free liquidity.
    Amount max_withdraw(const World& w, const PriceFn& price, const AgentId& agent,
                        const AssetId& asset) const;

    struct Seizure {
        Amount value = 0.0;                    // stable-unit value seized
        std::map<AssetId, Amount> amounts;     // per-asset tokens handed over
    };
    // Repays amt of the target's repay_asset debt from the liquidator's wallet
    // and hands over collateral worth repaid/(1-liq_incentive).
    Seizure liquidate(World& w, const PriceFn& price, const AgentId& liquidator,
                      const AgentId& target, const AssetId& repay_asset, Amount amt);

    double collateral_value(const PriceFn& price, const AgentId& agent) const;
    double weighted_collateral(const PriceFn& price, const AgentId& agent) const;
    double debt_value(const PriceFn& price, const AgentId& agent) const;
    bool healthy(const PriceFn& price, const AgentId& agent) const;
    // Sum over unhealthy accounts of debt value beyond raw collateral value.
    Amount bad_debt(const PriceFn& price) const;

  private:
    AccountPosition& pos(const AgentId& agent) { return positions[agent]; }
    const AccountPosition* find_pos(const AgentId& agent) const;
};

}  // namespace defisim
