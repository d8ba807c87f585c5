#include "defisim/amm.hpp"

namespace defisim {

ConstantProductPool ConstantProductPool::create(World& w, const AgentId& account,
                                                const AssetId& stable, const AssetId& manipulated,
                                                Amount reserve_s, Amount reserve_m, double fee) {
    if (stable == manipulated) throw SimError(Err::BadScenario, "pool needs two distinct assets");
    if (!(reserve_s > 0.0) || !(reserve_m > 0.0))
        throw SimError(Err::BadScenario, "pool reserves must be positive");
    if (fee < 0.0 || fee >= 1.0) throw SimError(Err::BadScenario, "pool fee out of range");
    ConstantProductPool p;
    p.account = account;
    p.stable = stable;
    p.manipulated = manipulated;
    p.fee = fee;
    w.register_agent(account);
    w.seed(account, stable, reserve_s);
    w.seed(account, manipulated, reserve_m);
    return p;
}

const AssetId& ConstantProductPool::other_side(const AssetId& asset) const {
    if (asset == stable) return manipulated;
    if (asset == manipulated) return stable;
    throw SimError(Err::UnknownAsset, "pool does not trade " + asset);
}

Amount ConstantProductPool::quote(const World& w, const AssetId& pay_asset, Amount pay_amt) const {
    if (!(pay_amt >= 0.0)) throw SimError(Err::NegativeAmount, "swap amount");
    const AssetId& out_asset = other_side(pay_asset);
    Amount r_in = w.balance(account, pay_asset);
    Amount r_out = w.balance(account, out_asset);
    Amount effective = pay_amt * (1.0 - fee);
    return r_out * effective / (r_in + effective);
}

Amount ConstantProductPool::swap(World& w, const AgentId& trader, const AssetId& pay_asset,
                                 Amount pay_amt) {
    Amount out = quote(w, pay_asset, pay_amt);
    w.transfer(trader, account, pay_asset, pay_amt);
    w.transfer(account, trader, other_side(pay_asset), out);
    return out;
}

double ConstantProductPool::spot_price_m(const World& w) const {
    Amount rm = reserve_m(w);
    if (!(rm > 0.0)) throw SimError(Err::LiquidityExhausted, "pool manipulated reserve is empty");
    return reserve_s(w) / rm;
}

}  // namespace defisim
