#include "defisim/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace defisim {

using nlohmann::json;

namespace {

PriceSource source_from_json(const json& j) {
    const std::string kind = j.at("source").get<std::string>();
    if (kind == "fixed") return PriceSource::fixed(j.at("value").get<double>());
    if (kind == "amm_spot") return PriceSource::amm_spot();
    if (kind == "vault_price") return PriceSource::vault_share();
    throw SimError(Err::BadScenario, "unknown price source '" + kind + "'");
}

json source_to_json(const PriceSource& s) {
    switch (s.kind) {
        case PriceSource::Kind::Fixed:
            return {{"source", "fixed"}, {"value", s.value}};
        case PriceSource::Kind::AmmSpot:
            return {{"source", "amm_spot"}};
        case PriceSource::Kind::VaultShare:
            return {{"source", "vault_price"}};
    }
    throw std::logic_error("unhandled price source kind");
}

template <typename T>
std::map<std::string, T> string_map(const json& j) {
    std::map<std::string, T> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<T>();
    return out;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig cfg;
    cfg.name = j.value("name", "");
    for (const json& a : j.at("assets"))
        cfg.assets.emplace_back(a.at("id").get<std::string>(),
                                asset_class_from_name(a.at("class").get<std::string>()));
    if (j.contains("agents"))
        for (auto it = j.at("agents").begin(); it != j.at("agents").end(); ++it)
            cfg.agents[it.key()] = string_map<Amount>(it.value());

    if (j.contains("pool")) {
        const json& p = j.at("pool");
        cfg.pool.present = true;
        cfg.pool.account = p.value("account", "pool");
        cfg.pool.stable = p.at("stable").get<std::string>();
        cfg.pool.manipulated = p.at("manipulated").get<std::string>();
        cfg.pool.reserve_s = p.at("reserve_stable").get<double>();
        cfg.pool.reserve_m = p.at("reserve_manipulated").get<double>();
        cfg.pool.fee = p.value("fee", 0.0);
    }
    if (j.contains("market")) {
        const json& m = j.at("market");
        cfg.market.present = true;
        cfg.market.account = m.value("account", "market");
        cfg.market.collateral_rates = string_map<double>(m.at("collateral_rates"));
        cfg.market.liq_incentive = m.value("liq_incentive", 0.0);
        if (m.contains("supplied")) cfg.market.supplied = string_map<Amount>(m.at("supplied"));
    }
    if (j.contains("vault")) {
        const json& v = j.at("vault");
        cfg.vault.present = true;
        cfg.vault.account = v.value("account", "vault");
        cfg.vault.share = v.at("share").get<std::string>();
        cfg.vault.underlying = v.at("underlying").get<std::string>();
        cfg.vault.underlying_balance = v.at("underlying_balance").get<double>();
        cfg.vault.share_holders = string_map<Amount>(v.at("share_holders"));
    }
    if (j.contains("flashloan")) {
        const json& f = j.at("flashloan");
        cfg.flash.present = true;
        cfg.flash.account = f.value("account", "flashloan");
        cfg.flash.fee = f.value("fee", 0.0);
        cfg.flash.liquidity = string_map<Amount>(f.at("liquidity"));
    }
    if (j.contains("oracle"))
        for (auto it = j.at("oracle").begin(); it != j.at("oracle").end(); ++it)
            cfg.oracle[it.key()] = source_from_json(it.value());
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    if (!cfg.name.empty()) j["name"] = cfg.name;
    j["assets"] = json::array();
    for (const auto& [id, cls] : cfg.assets)
        j["assets"].push_back({{"id", id}, {"class", asset_class_name(cls)}});
    if (!cfg.agents.empty()) j["agents"] = cfg.agents;
    if (cfg.pool.present)
        j["pool"] = {{"account", cfg.pool.account},
                     {"stable", cfg.pool.stable},
                     {"manipulated", cfg.pool.manipulated},
                     {"reserve_stable", cfg.pool.reserve_s},
                     {"reserve_manipulated", cfg.pool.reserve_m},
                     {"fee", cfg.pool.fee}};
    if (cfg.market.present)
        j["market"] = {{"account", cfg.market.account},
                       {"collateral_rates", cfg.market.collateral_rates},
                       {"liq_incentive", cfg.market.liq_incentive},
                       {"supplied", cfg.market.supplied}};
    if (cfg.vault.present)
        j["vault"] = {{"account", cfg.vault.account},
                      {"share", cfg.vault.share},
                      {"underlying", cfg.vault.underlying},
                      {"underlying_balance", cfg.vault.underlying_balance},
                      {"share_holders", cfg.vault.share_holders}};
    if (cfg.flash.present)
        j["flashloan"] = {{"account", cfg.flash.account},
                          {"fee", cfg.flash.fee},
                          {"liquidity", cfg.flash.liquidity}};
    if (!cfg.oracle.empty()) {
        json o = json::object();
        for (const auto& [asset, src] : cfg.oracle) o[asset] = source_to_json(src);
        j["oracle"] = o;
    }
    return j;
}

std::string resolve_scenario_path(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path)) return name_or_path;
    std::vector<std::string> roots;
    if (const char* env = std::getenv("DEFISIM_SCENARIOS")) roots.push_back(env);
    roots.push_back("scenarios");
#ifdef DEFISIM_SCENARIO_DIR
    roots.push_back(DEFISIM_SCENARIO_DIR);
#endif
    for (const std::string& root : roots) {
        fs::path candidate = fs::path(root) / (name_or_path + ".json");
        if (fs::exists(candidate)) return candidate.string();
    }
    throw SimError(Err::BadScenario, "scenario '" + name_or_path + "' not found");
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
    const std::string path = resolve_scenario_path(name_or_path);
    std::ifstream in(path);
    ScenarioConfig cfg;
    try {
        json j;
        in >> j;
        cfg = scenario_from_json(j);
    } catch (const json::exception& e) {
        throw SimError(Err::BadScenario, path + ": " + e.what());
    }
    if (cfg.name.empty()) cfg.name = std::filesystem::path(name_or_path).stem().string();
    return cfg;
}

Env build_env(const ScenarioConfig& cfg) {
    Env env;
    World& w = env.world;
    for (const auto& [id, cls] : cfg.assets) w.register_asset(id, cls);
    for (const auto& [agent, wallet] : cfg.agents) {
        w.register_agent(agent);
        for (const auto& [asset, amt] : wallet) w.seed(agent, asset, amt);
    }
    if (cfg.pool.present)
        env.pool = ConstantProductPool::create(w, cfg.pool.account, cfg.pool.stable,
                                               cfg.pool.manipulated, cfg.pool.reserve_s,
                                               cfg.pool.reserve_m, cfg.pool.fee);
    if (cfg.market.present)
        env.market = LendingMarket::create(w, cfg.market.account, cfg.market.collateral_rates,
                                           cfg.market.liq_incentive, cfg.market.supplied);
    if (cfg.vault.present) {
        for (const auto& [holder, amt] : cfg.vault.share_holders) {
            (void)amt;
            if (!w.has_agent(holder)) w.register_agent(holder);
        }
        env.vault = InterestBearingVault::create(w, cfg.vault.account, cfg.vault.share,
                                                 cfg.vault.underlying,
                                                 cfg.vault.underlying_balance,
                                                 cfg.vault.share_holders);
        // Shares seeded straight into the market account are lendable float;
        // keep the market's supply bookkeeping in step with its balance.
        if (env.market) {
            auto it = cfg.vault.share_holders.find(cfg.market.account);
            if (it != cfg.vault.share_holders.end())
                env.market->supplied[cfg.vault.share] += it->second;
        }
    }
    if (cfg.flash.present)
        env.flashloan =
            FlashloanProvider::create(w, cfg.flash.account, cfg.flash.fee, cfg.flash.liquidity);
    for (const auto& [asset, src] : cfg.oracle) env.oracle.set(asset, src);
    // Fail fast on dangling references instead of at first use.
    for (const auto& [asset, src] : cfg.oracle) {
        (void)src;
        if (!w.has_asset(asset))
            throw SimError(Err::BadScenario, "oracle prices unknown asset " + asset);
        price(env, asset);
    }
    return env;
}

std::uint64_t fingerprint(const ScenarioConfig& cfg) {
    const std::string dump = scenario_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ScenarioConfig make_bb_scenario(const BBScenarioSpec& s) {
    ScenarioConfig cfg;
    cfg.name = "bb_family";
    cfg.assets = {{"USD", AssetClass::Stable}, {"TKM", AssetClass::Manipulated}};
    cfg.pool.present = true;
    cfg.pool.stable = "USD";
    cfg.pool.manipulated = "TKM";
    cfg.pool.reserve_s = s.reserve_s;
    cfg.pool.reserve_m = s.reserve_m;
    cfg.pool.fee = s.pool_fee;
    cfg.market.present = true;
    cfg.market.collateral_rates = {{"USD", s.cr_s}, {"TKM", s.cr_m}};
    cfg.market.liq_incentive = s.liq_incentive;
    cfg.market.supplied["USD"] = s.market_stable;
    if (s.market_manipulated > 0.0) cfg.market.supplied["TKM"] = s.market_manipulated;
    cfg.oracle["USD"] = PriceSource::fixed(1.0);
    cfg.oracle["TKM"] = PriceSource::amm_spot();
    return cfg;
}

ScenarioConfig make_bd_scenario(const BDScenarioSpec& s) {
    ScenarioConfig cfg;
    cfg.name = "bd_family";
    cfg.assets = {{"USD", AssetClass::Stable}, {"IBT", AssetClass::InterestBearing}};
    cfg.market.present = true;
    cfg.market.collateral_rates = {{"USD", s.cr_s}, {"IBT", s.cr_ib}};
    cfg.market.liq_incentive = s.liq_incentive;
    cfg.market.supplied["USD"] = s.market_stable;
    cfg.vault.present = true;
    cfg.vault.share = "IBT";
    cfg.vault.underlying = "USD";
    cfg.vault.underlying_balance = s.share_supply;
    cfg.vault.share_holders["market"] = s.market_shares;
    cfg.vault.share_holders["others"] = s.share_supply - s.market_shares;
    cfg.flash.present = true;
    cfg.flash.fee = s.flash_fee;
    cfg.flash.liquidity["USD"] = s.flash_liquidity;
    cfg.oracle["USD"] = PriceSource::fixed(1.0);
    cfg.oracle["IBT"] = PriceSource::vault_share();
    return cfg;
}

}  // namespace defisim
