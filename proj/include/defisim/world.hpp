// Balance ledger shared by every agent and protocol component. Asset totals
// only move through the audited seed/mint/burn entry points, so conservation
// is checkable after any sequence of operations.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace defisim {

using AgentId = std::string;
using AssetId = std::string;
using Amount = double;

enum class AssetClass { Stable, Manipulated, InterestBearing, Underlying };

const char* asset_class_name(AssetClass c);
AssetClass asset_class_from_name(const std::string& name);

enum class Err {
    DuplicateAsset,
    DuplicateAgent,
    UnknownAsset,
    UnknownAgent,
    NegativeAmount,
    InsufficientBalance,
    CapacityExceeded,
    LiquidityExhausted,
    Overpay,
    UnhealthyWithdraw,
    TargetHealthy,
    SeizureExceedsCollateral,
    UnpricedAsset,
    FlashLiquidity,
    FlashUnrepayable,
    UnknownLoan,
    OpenFlashLoan,
    EmptyVault,
    Infeasible,
    BadScenario,
};

const char* err_name(Err e);

class SimError : public std::runtime_error {
  public:
    SimError(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

class World {
  public:
    void register_asset(const AssetId& asset, AssetClass cls);
    void register_agent(const AgentId& agent);
    bool has_asset(const AssetId& asset) const { return assets_.count(asset) > 0; }
    bool has_agent(const AgentId& agent) const { return balances_.count(agent) > 0; }
    AssetClass asset_class(const AssetId& asset) const;
    const std::map<AssetId, AssetClass>& assets() const { return assets_; }
    const std::map<AgentId, std::map<AssetId, Amount>>& holdings() const { return balances_; }

    Amount balance(const AgentId& agent, const AssetId& asset) const;
    void credit(const AgentId& agent, const AssetId& asset, Amount amt);
    void debit(const AgentId& agent, const AssetId& asset, Amount amt);
    void transfer(const AgentId& from, const AgentId& to, const AssetId& asset, Amount amt);

    // Supply-changing entries. seed() is scenario setup; mint/burn are for the
    // vault's share issuance. Each adjusts the expected total the conservation
    // check is measured against.
    void seed(const AgentId& agent, const AssetId& asset, Amount amt);
    void mint_supply(const AgentId& agent, const AssetId& asset, Amount amt);
    void burn_supply(const AgentId& agent, const AssetId& asset, Amount amt);

    Amount total_supply(const AssetId& asset) const;     // sum over all holders
    Amount expected_supply(const AssetId& asset) const;  // seeded + minted - burned
    // Largest relative |total - expected| over all assets.
    double conservation_drift() const;

    std::uint64_t step() const { return step_; }

    World snapshot() const { return *this; }
    void restore(const World& snap) { *this = snap; }

  private:
    Amount& slot(const AgentId& agent, const AssetId& asset);
    void require_known(const AgentId& agent, const AssetId& asset) const;

    std::map<AssetId, AssetClass> assets_;
    std::map<AgentId, std::map<AssetId, Amount>> balances_;
    std::map<AssetId, Amount> expected_;
    std::uint64_t step_ = 0;
};

}  // namespace defisim
