#include "defisim/envservices.hpp"

#include <algorithm>
#include <cmath>

namespace defisim {

const PriceSource& Oracle::source(const AssetId& asset) const {
    auto it = sources_.find(asset);
    if (it == sources_.end()) throw SimError(Err::UnpricedAsset, asset);
    return it->second;
}

FlashloanProvider FlashloanProvider::create(World& w, const AgentId& account, double fee,
                                            const std::map<AssetId, Amount>& liquidity) {
    if (fee < 0.0 || fee >= 1.0) throw SimError(Err::BadScenario, "flash fee out of [0,1)");
    FlashloanProvider f;
    f.account = account;
    f.fee = fee;
    w.register_agent(account);
    for (const auto& [asset, amt] : liquidity) w.seed(account, asset, amt);
    return f;
}

std::uint64_t FlashloanProvider::borrow(World& w, const AgentId& agent, const AssetId& asset,
                                        Amount amt) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, "flash borrow");
    Amount avail = liquidity(w, asset);
    if (amt > avail)
        throw SimError(Err::FlashLiquidity, "provider holds " + std::to_string(avail) + " " +
                                                asset + ", asked " + std::to_string(amt));
    w.transfer(account, agent, asset, amt);
    open_.push_back({next_id_++, agent, asset, amt});
    return open_.back().id;
}

Amount FlashloanProvider::owed(std::uint64_t loan_id) const {
    for (const auto& loan : open_)
        if (loan.id == loan_id) return loan.principal / (1.0 - fee);
    throw SimError(Err::UnknownLoan, "loan " + std::to_string(loan_id));
}

Amount FlashloanProvider::repay(World& w, std::uint64_t loan_id) {
    auto it = std::find_if(open_.begin(), open_.end(),
                           [&](const FlashLoan& l) { return l.id == loan_id; });
    if (it == open_.end()) throw SimError(Err::UnknownLoan, "loan " + std::to_string(loan_id));
    Amount due = it->principal / (1.0 - fee);
    Amount held = w.balance(it->borrower, it->asset);
    if (due > held + 1e-9 * std::max(1.0, held))
        throw SimError(Err::FlashUnrepayable, it->borrower + " holds " + std::to_string(held) +
                                                  " " + it->asset + ", owes " +
                                                  std::to_string(due));
    w.transfer(it->borrower, account, it->asset, due);
    Amount fee_paid = due - it->principal;
    open_.erase(it);
    return fee_paid;
}

double price(const Env& env, const AssetId& asset) {
    if (!env.world.has_asset(asset)) throw SimError(Err::UnknownAsset, asset);
    const PriceSource& src = env.oracle.source(asset);
    switch (src.kind) {
        case PriceSource::Kind::Fixed:
            return src.value;
        case PriceSource::Kind::AmmSpot:
            if (!env.pool) throw SimError(Err::BadScenario, "amm_spot price without a pool");
            if (asset != env.pool->manipulated)
                throw SimError(Err::BadScenario,
                               "amm_spot prices the pool's manipulated asset, not " + asset);
            return env.pool->spot_price_m(env.world);
        case PriceSource::Kind::VaultShare:
            if (!env.vault) throw SimError(Err::BadScenario, "vault_price without a vault");
            if (asset != env.vault->share)
                throw SimError(Err::BadScenario,
                               "vault_price prices the vault's share asset, not " + asset);
            return env.vault->share_price(env.world);
    }
    throw SimError(Err::UnpricedAsset, asset);
}

PriceFn price_fn(const Env& env) {
    return [&env](const AssetId& asset) { return price(env, asset); };
}

double portfolio_value(const Env& env, const AgentId& agent) {
    double v = 0.0;
    for (const auto& [asset, cls] : env.world.assets()) {
        (void)cls;
        Amount held = env.world.balance(agent, asset);
        if (held > 0.0) v += held * price(env, asset);
    }
    return v;
}

}  // namespace defisim
