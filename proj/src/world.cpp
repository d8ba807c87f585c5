#include "defisim/world.hpp"

#include <algorithm>
#include <cmath>

namespace defisim {

const char* asset_class_name(AssetClass c) {
    switch (c) {
        case AssetClass::Stable: return "stable";
        case AssetClass::Manipulated: return "manipulated";
        case AssetClass::InterestBearing: return "interest_bearing";
        case AssetClass::Underlying: return "underlying";
    }
    return "?";
}

AssetClass asset_class_from_name(const std::string& name) {
    if (name == "stable") return AssetClass::Stable;
    if (name == "manipulated") return AssetClass::Manipulated;
    if (name == "interest_bearing") return AssetClass::InterestBearing;
    if (name == "underlying") return AssetClass::Underlying;
    throw SimError(Err::BadScenario, "unknown asset class '" + name + "'");
}

const char* err_name(Err e) {
    switch (e) {
        case Err::DuplicateAsset: return "duplicate-asset";
        case Err::DuplicateAgent: return "duplicate-agent";
        case Err::UnknownAsset: return "unknown-asset";
        case Err::UnknownAgent: return "unknown-agent";
        case Err::NegativeAmount: return "negative-amount";
        case Err::InsufficientBalance: return "insufficient-balance";
        case Err::CapacityExceeded: return "capacity-exceeded";
        case Err::LiquidityExhausted: return "liquidity-exhausted";
        case Err::Overpay: return "overpay";
        case Err::UnhealthyWithdraw: return "unhealthy-withdraw";
        case Err::TargetHealthy: return "target-healthy";
        case Err::SeizureExceedsCollateral: return "seizure-exceeds-collateral";
        case Err::UnpricedAsset: return "unpriced-asset";
        case Err::FlashLiquidity: return "flash-liquidity";
        case Err::FlashUnrepayable: return "flash-unrepayable";
        case Err::UnknownLoan: return "unknown-loan";
        case Err::OpenFlashLoan: return "open-flash-loan";
        case Err::EmptyVault: return "empty-vault";
        case Err::Infeasible: return "infeasible";
        case Err::BadScenario: return "bad-scenario";
    }
    return "?";
}

namespace {

// Overdraft slack: fp drift from long op chains, relative to balance scale.
double debit_slack(Amount bal) { return 1e-9 * std::max(1.0, bal); }

void require_nonneg(Amount amt, const char* what) {
    if (!(amt >= 0.0)) throw SimError(Err::NegativeAmount, std::string(what) + " must be >= 0");
}

}  // namespace

void World::register_asset(const AssetId& asset, AssetClass cls) {
    if (has_asset(asset)) throw SimError(Err::DuplicateAsset, asset);
    assets_[asset] = cls;
    expected_[asset] = 0.0;
}

void World::register_agent(const AgentId& agent) {
    if (has_agent(agent)) throw SimError(Err::DuplicateAgent, agent);
    balances_[agent];
}

AssetClass World::asset_class(const AssetId& asset) const {
    auto it = assets_.find(asset);
    if (it == assets_.end()) throw SimError(Err::UnknownAsset, asset);
    return it->second;
}

void World::require_known(const AgentId& agent, const AssetId& asset) const {
    if (!has_asset(asset)) throw SimError(Err::UnknownAsset, asset);
    if (!has_agent(agent)) throw SimError(Err::UnknownAgent, agent);
}

Amount& World::slot(const AgentId& agent, const AssetId& asset) {
    require_known(agent, asset);
    return balances_[agent][asset];
}

Amount World::balance(const AgentId& agent, const AssetId& asset) const {
    require_known(agent, asset);
    auto& per_asset = balances_.at(agent);
    auto it = per_asset.find(asset);
    return it == per_asset.end() ? 0.0 : it->second;
}

void World::credit(const AgentId& agent, const AssetId& asset, Amount amt) {
    require_nonneg(amt, "credit");
    slot(agent, asset) += amt;
    ++step_;
}

void World::debit(const AgentId& agent, const AssetId& asset, Amount amt) {
    require_nonneg(amt, "debit");
    Amount& bal = slot(agent, asset);
    if (amt > bal + debit_slack(bal))
        throw SimError(Err::InsufficientBalance,
                       agent + " holds " + std::to_string(bal) + " " + asset + ", needs " +
                           std::to_string(amt));
    bal = std::max(0.0, bal - amt);
    ++step_;
}

void World::transfer(const AgentId& from, const AgentId& to, const AssetId& asset, Amount amt) {
    debit(from, asset, amt);
    credit(to, asset, amt);
}

void World::seed(const AgentId& agent, const AssetId& asset, Amount amt) {
    require_nonneg(amt, "seed");
    slot(agent, asset) += amt;
    expected_[asset] += amt;
    ++step_;
}

void World::mint_supply(const AgentId& agent, const AssetId& asset, Amount amt) {
    require_nonneg(amt, "mint");
    slot(agent, asset) += amt;
    expected_[asset] += amt;
    ++step_;
}

void World::burn_supply(const AgentId& agent, const AssetId& asset, Amount amt) {
    debit(agent, asset, amt);
    expected_[asset] -= amt;
}

Amount World::total_supply(const AssetId& asset) const {
    if (!has_asset(asset)) throw SimError(Err::UnknownAsset, asset);
    Amount total = 0.0;
    for (const auto& [agent, per_asset] : balances_) {
        (void)agent;
        auto it = per_asset.find(asset);
        if (it != per_asset.end()) total += it->second;
    }
    return total;
}

Amount World::expected_supply(const AssetId& asset) const {
    auto it = expected_.find(asset);
    if (it == expected_.end()) throw SimError(Err::UnknownAsset, asset);
    return it->second;
}

double World::conservation_drift() const {
    double worst = 0.0;
    for (const auto& [asset, expected] : expected_) {
        double drift = std::abs(total_supply(asset) - expected) / std::max(1.0, std::abs(expected));
        worst = std::max(worst, drift);
    }
    return worst;
}

}  // namespace defisim
