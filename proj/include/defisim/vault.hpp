// Interest-bearing vault: share tokens redeemable for a pro-rata slice of the
// underlying it holds. share_price = underlying / share_supply. Donations add
// underlying without minting shares, which is the price-inflation channel the
// donation attack leans on.
#pragma once

#include "defisim/world.hpp"

namespace defisim {

class InterestBearingVault {
  public:
    AgentId account;
    AssetId share;
    AssetId underlying;
    // Total shares outstanding across all holders. The world's expected supply
    // of the share asset tracks this; the vault is the only mint authority.
    Amount share_supply = 0.0;

    static InterestBearingVault create(World& w, const AgentId& account, const AssetId& share,
                                       const AssetId& underlying, Amount underlying0,
                                       const std::map<AgentId, Amount>& share_holders);

    Amount underlying_balance(const World& w) const { return w.balance(account, underlying); }
    double share_price(const World& w) const;

    // Deposit underlying, receive shares at the current price.
    Amount mint(World& w, const AgentId& agent, Amount underlying_amt);
    // Burn shares, receive underlying at the current price.
    Amount redeem(World& w, const AgentId& agent, Amount shares);
    // Destroy shares without returning underlying; raises the share price.
    void burn(World& w, const AgentId& agent, Amount shares);
    // Add underlying without minting; returns the new share price.
    double donate(World& w, const AgentId& agent, Amount underlying_amt);
};

}  // namespace defisim
