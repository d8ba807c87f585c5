// Environment services: the price oracle, the flashloan provider, and the Env
// aggregate that bundles the world with every protocol component. Env has
// plain value semantics; snapshot/restore is copy-assignment, which is what
// the optimizer leans on.
#pragma once

#include <optional>
#include <vector>

#include "defisim/amm.hpp"
#include "defisim/lending.hpp"
#include "defisim/vault.hpp"
#include "defisim/world.hpp"

namespace defisim {

struct PriceSource {
    enum class Kind { Fixed, AmmSpot, VaultShare };
    Kind kind = Kind::Fixed;
    double value = 1.0;  // only for Fixed

    static PriceSource fixed(double v) { return {Kind::Fixed, v}; }
    static PriceSource amm_spot() { return {Kind::AmmSpot, 0.0}; }
    static PriceSource vault_share() { return {Kind::VaultShare, 0.0}; }
};

// Per-asset price policy. Spot sources read the live pool/vault state each
// call; there is no caching and no update delay.
class Oracle {
  public:
    void set(const AssetId& asset, PriceSource src) { sources_[asset] = src; }
    const PriceSource& source(const AssetId& asset) const;
    const std::map<AssetId, PriceSource>& sources() const { return sources_; }

  private:
    std::map<AssetId, PriceSource> sources_;
};

struct FlashLoan {
    std::uint64_t id = 0;
    AgentId borrower;
    AssetId asset;
    Amount principal = 0.0;
};

class FlashloanProvider {
  public:
    AgentId account;
    double fee = 0.0;  // repay = principal / (1 - fee)

    static FlashloanProvider create(World& w, const AgentId& account, double fee,
                                    const std::map<AssetId, Amount>& liquidity);

    Amount liquidity(const World& w, const AssetId& asset) const {
        return w.balance(account, asset);
    }
    std::uint64_t borrow(World& w, const AgentId& agent, const AssetId& asset, Amount amt);
    // Returns the fee paid. Throws FlashUnrepayable if the borrower's wallet
    // cannot cover principal / (1 - fee).
    Amount repay(World& w, std::uint64_t loan_id);
    Amount owed(std::uint64_t loan_id) const;
    const std::vector<FlashLoan>& open() const { return open_; }

  private:
    std::vector<FlashLoan> open_;
    std::uint64_t next_id_ = 1;
};

struct Env {
    World world;
    std::optional<ConstantProductPool> pool;
    std::optional<LendingMarket> market;
    std::optional<InterestBearingVault> vault;
    std::optional<FlashloanProvider> flashloan;
    Oracle oracle;

    Env snapshot() const { return *this; }
    void restore(const Env& snap) { *this = snap; }
};

double price(const Env& env, const AssetId& asset);
// Adapter for LendingMarket calls. The returned closure points at env; use it
// immediately, not across snapshot/restore.
PriceFn price_fn(const Env& env);
// Wallet holdings valued at current oracle prices.
double portfolio_value(const Env& env, const AgentId& agent);

}  // namespace defisim
