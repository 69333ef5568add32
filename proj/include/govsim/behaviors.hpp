#pragma once

#include <memory>
#include <vector>

#include "govsim/contracts.hpp"

namespace govsim::behaviors {

// Storage layouts:
//   collateral_vault_v1  owner
//   asset_registry_v1    owner, assets {symbol: "listed"|"frozen"}
//   lending_market_v1    operator, token, debt {account: units}
//   meta_index_v1        operator, index_token, host_governor,
//                        tally:<id> {for, against}, voted:<id> [accounts], relayed:<id>

/// Holds tokens at the proxy address. Only `owner` moves them.
std::shared_ptr<const Behavior> collateral_vault_v1();

/// Listing registry a governor administers.
std::shared_ptr<const Behavior> asset_registry_v1();

/// Lends a token out of its own balance; debt grows by the interest rate and
/// borrowers are paid rewards minted in the same token.
std::shared_ptr<const Behavior> lending_market_v1();

/// Contract that holds a host platform's governance tokens and votes them as
/// a block according to an internal tally of its own index-token holders.
/// A tied tally abstains.
std::shared_ptr<const Behavior> meta_index_v1();

std::vector<std::shared_ptr<const Behavior>> all();

/// Code book holding every builtin behavior; what replay of a scenario log needs.
CodeBook code_book();

}  // namespace govsim::behaviors
