// Scenario files describe a complete environment: assets, wallets, the pool,
// the market, the vault, the flashloan provider, and the oracle policy. A
// config round-trips through JSON unchanged and builds into a live Env.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "defisim/envservices.hpp"

namespace defisim {

struct ScenarioConfig {
    std::string name;

    std::vector<std::pair<AssetId, AssetClass>> assets;
    std::map<AgentId, std::map<AssetId, Amount>> agents;

    struct PoolCfg {
        bool present = false;
        AgentId account = "pool";
        AssetId stable;
        AssetId manipulated;
        Amount reserve_s = 0.0;
        Amount reserve_m = 0.0;
        double fee = 0.0;
    } pool;

    struct MarketCfg {
        bool present = false;
        AgentId account = "market";
        std::map<AssetId, double> collateral_rates;
        double liq_incentive = 0.0;
        std::map<AssetId, Amount> supplied;
    } market;

    struct VaultCfg {
        bool present = false;
        AgentId account = "vault";
        AssetId share;
        AssetId underlying;
        Amount underlying_balance = 0.0;
        std::map<AgentId, Amount> share_holders;
    } vault;

    struct FlashCfg {
        bool present = false;
        AgentId account = "flashloan";
        double fee = 0.0;
        std::map<AssetId, Amount> liquidity;
    } flash;

    std::map<AssetId, PriceSource> oracle;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Accepts a filesystem path or a bare preset name; names resolve against
// $DEFISIM_SCENARIOS, ./scenarios, then the build-time scenario directory.
std::string resolve_scenario_path(const std::string& name_or_path);
ScenarioConfig load_scenario(const std::string& name_or_path);

Env build_env(const ScenarioConfig& cfg);

// FNV-1a over the canonical JSON dump; stable across runs and platforms.
std::uint64_t fingerprint(const ScenarioConfig& cfg);

// Parametrized families used by tests and sweeps.
struct BBScenarioSpec {
    double reserve_s = 1000.0;
    double reserve_m = 1000.0;
    double market_stable = 10000.0;
    double market_manipulated = 0.0;
    double cr_m = 0.9;
    double cr_s = 0.9;
    double pool_fee = 0.0;
    double liq_incentive = 0.0;
};
ScenarioConfig make_bb_scenario(const BBScenarioSpec& s);

struct BDScenarioSpec {
    double share_supply = 1000.0;
    double market_shares = 400.0;
    double market_stable = 5000.0;
    double cr_ib = 0.9;
    double cr_s = 0.9;
    double liq_incentive = 0.1;
    double flash_fee = 0.0;
    double flash_liquidity = 1e9;
};
ScenarioConfig make_bd_scenario(const BDScenarioSpec& s);

}  // namespace defisim
