// Constant-product pool between the stable asset and the manipulated asset.
// Reserves live in the world ledger under the pool's own account, so swaps are
// plain transfers and conservation holds by construction.
#pragma once

#include "defisim/world.hpp"

namespace defisim {

class ConstantProductPool {
  public:
    AgentId account;
    AssetId stable;
    AssetId manipulated;
    // Swap fee retained by the pool. The strategy formulas assume 0; nonzero is
    // supported for sensitivity runs only.
    double fee = 0.0;

    static ConstantProductPool create(World& w, const AgentId& account, const AssetId& stable,
                                      const AssetId& manipulated, Amount reserve_s,
                                      Amount reserve_m, double fee = 0.0);

    Amount reserve_s(const World& w) const { return w.balance(account, stable); }
    Amount reserve_m(const World& w) const { return w.balance(account, manipulated); }

    bool trades(const AssetId& asset) const { return asset == stable || asset == manipulated; }
    const AssetId& other_side(const AssetId& asset) const;

    // Output for paying pay_amt of pay_asset into the pool. Pure.
    Amount quote(const World& w, const AssetId& pay_asset, Amount pay_amt) const;
    // Executes the swap against the trader's wallet; returns the output amount.
    Amount swap(World& w, const AgentId& trader, const AssetId& pay_asset, Amount pay_amt);

    // Stable per unit of the manipulated asset.
    double spot_price_m(const World& w) const;
};

}  // namespace defisim
