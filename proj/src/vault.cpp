#include "defisim/vault.hpp"

namespace defisim {

InterestBearingVault InterestBearingVault::create(World& w, const AgentId& account,
                                                  const AssetId& share, const AssetId& underlying,
                                                  Amount underlying0,
                                                  const std::map<AgentId, Amount>& share_holders) {
    if (share == underlying) throw SimError(Err::BadScenario, "share and underlying must differ");
    InterestBearingVault v;
    v.account = account;
    v.share = share;
    v.underlying = underlying;
    w.register_agent(account);
    w.seed(account, underlying, underlying0);
    for (const auto& [holder, amt] : share_holders) {
        if (!(amt >= 0.0)) throw SimError(Err::BadScenario, "negative share holding");
        w.seed(holder, share, amt);
        v.share_supply += amt;
    }
    if (!(v.share_supply > 0.0)) throw SimError(Err::BadScenario, "vault needs initial shares");
    return v;
}

double InterestBearingVault::share_price(const World& w) const {
    if (!(share_supply > 0.0)) throw SimError(Err::EmptyVault, "no shares outstanding");
    return underlying_balance(w) / share_supply;
}

Amount InterestBearingVault::mint(World& w, const AgentId& agent, Amount underlying_amt) {
    if (!(underlying_amt >= 0.0)) throw SimError(Err::NegativeAmount, "mint amount");
    double px = share_price(w);
    if (!(px > 0.0)) throw SimError(Err::EmptyVault, "share price is zero");
    Amount shares = underlying_amt / px;
    w.transfer(agent, account, underlying, underlying_amt);
    w.mint_supply(agent, share, shares);
    share_supply += shares;
    return shares;
}

Amount InterestBearingVault::redeem(World& w, const AgentId& agent, Amount shares) {
    if (!(shares >= 0.0)) throw SimError(Err::NegativeAmount, "redeem shares");
    Amount out = shares * share_price(w);
    w.burn_supply(agent, share, shares);
    share_supply -= shares;
    w.transfer(account, agent, underlying, out);
    return out;
}

void InterestBearingVault::burn(World& w, const AgentId& agent, Amount shares) {
    if (!(shares >= 0.0)) throw SimError(Err::NegativeAmount, "burn shares");
    if (!(share_supply - shares > 0.0))
        throw SimError(Err::EmptyVault, "burn would leave no shares outstanding");
    w.burn_supply(agent, share, shares);
    share_supply -= shares;
}

double InterestBearingVault::donate(World& w, const AgentId& agent, Amount underlying_amt) {
    if (!(underlying_amt >= 0.0)) throw SimError(Err::NegativeAmount, "donation");
    w.transfer(agent, account, underlying, underlying_amt);
    return share_price(w);
}

}  // namespace defisim
