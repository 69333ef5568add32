#include "govsim/scenarios.hpp"

#include <algorithm>
#include <tuple>

#include "govsim/behaviors.hpp"

namespace govsim::scenarios {

namespace {

constexpr Units native_float = 1'000'000'000'000'000;

const json chain_defaults = {{"genesis_time", 0}, {"block_interval", 12}, {"gas_per_call", 1}};
const json gas_defaults = {{"kind", "constant"}, {"price", 1}};

json with_common(json params) {
    return json{{"seed", 0}, {"chain", chain_defaults}, {"gas", gas_defaults}, {"params", std::move(params)}};
}

/// Owns the world for one scenario and keeps the boilerplate of scripted
/// transactions out of the scenario bodies.
class Script {
public:
    explicit Script(const json& cfg)
        : world(ChainParams{cfg.at("chain").at("genesis_time").get<Timestamp>(),
                            cfg.at("chain").at("block_interval").get<Timestamp>(),
                            cfg.at("chain").at("gas_per_call").get<Units>()},
                parse_gas_descriptor(cfg.at("gas"))) {
        account(harness);
    }

    WorldState world;
    const Address harness{"harness"};

    void account(const Address& a) {
        if (!world.has_account(a)) world.create_account(a, native_float);
    }

    TxOutcome as(const Address& who, const std::function<void(TxContext&)>& body, std::uint64_t calls = 1) {
        account(who);
        return world.run(who, body, calls);
    }

    void must(const Address& who, const std::function<void(TxContext&)>& body, const std::string& what) {
        const auto out = as(who, body);
        if (!committed(out)) throw PreconditionError(what + " failed: " + revert_reason(out));
    }

    TxOutcome call(const Address& who, const Address& target, const std::string& op, json args) {
        account(who);
        return world.execute_atomic(TxScript{who, {Call{target, op, std::move(args), 0}}, std::nullopt});
    }

    void at(BlockHeight b) { world.advance_to(b); }

    /// First block whose timestamp is at or after t.
    BlockHeight block_at_or_after(Timestamp t) const {
        const auto& c = world.chain();
        if (t <= c.genesis_time) return 0;
        return static_cast<BlockHeight>((t - c.genesis_time + c.block_interval - 1) / c.block_interval);
    }
};

/// Events scheduled by block, run in block order and then insertion order.
class Plan {
public:
    void at(BlockHeight b, std::function<void()> step) { steps_.emplace_back(b, steps_.size(), std::move(step)); }

    void run(Script& s) {
        std::stable_sort(steps_.begin(), steps_.end(),
                         [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
        for (auto& [block, seq, step] : steps_) {
            s.at(std::max(block, s.world.height()));
            step();
        }
    }

private:
    std::vector<std::tuple<BlockHeight, std::size_t, std::function<void()>>> steps_;
};

std::vector<Units> split_evenly(Units total, std::size_t n) {
    std::vector<Units> out(n, n == 0 ? 0 : total / static_cast<Units>(n));
    if (n > 0) out[0] += total - out[0] * static_cast<Units>(n);
    return out;
}

Address numbered(const std::string& stem, std::size_t i) { return Address{stem + "_" + std::to_string(i + 1)}; }

ScenarioRun finish(Script& s, ScenarioReport report, std::vector<Address> attackers, const json& cfg) {
    report.seed = cfg.at("seed").get<std::uint64_t>();
    report.timeline = timeline_of(s.world.log());
    report.metrics = analytics::summarize(s.world.log());
    return ScenarioRun{std::move(report), std::move(s.world), std::move(attackers), cfg};
}

json outcome_json(const TxOutcome& o) {
    if (committed(o)) return json{{"committed", true}};
    return json{{"committed", false}, {"reason", revert_reason(o)}};
}

std::uint64_t u64(const json& p, const char* key) { return p.at(key).get<std::uint64_t>(); }
Units units(const json& p, const char* key) { return p.at(key).get<Units>(); }

}  // namespace

json merge(json base, const json& overrides) {
    if (!base.is_object() || !overrides.is_object()) return overrides;
    for (const auto& [k, v] : overrides.items()) {
        if (base.contains(k) && base[k].is_object() && v.is_object())
            base[k] = merge(base[k], v);
        else
            base[k] = v;
    }
    return base;
}

Units balance_delta(const EventLog& log, std::size_t from, const std::string& token, const std::vector<Address>& accounts) {
    auto mine = [&](const Address& a) { return std::find(accounts.begin(), accounts.end(), a) != accounts.end(); };
    Units delta = 0;
    for (std::size_t i = from; i < log.size(); ++i) {
        const auto& e = log[i];
        if (const auto* m = std::get_if<events::Minted>(&e); m && m->token == token && mine(m->to)) delta += m->amount;
        if (const auto* b = std::get_if<events::Burned>(&e); b && b->token == token && mine(b->from)) delta -= b->amount;
        if (const auto* t = std::get_if<events::Transferred>(&e); t && t->token == token) {
            if (mine(t->from)) delta -= t->amount;
            if (mine(t->to)) delta += t->amount;
        }
    }
    return delta;
}

Units minted_to(const EventLog& log, std::size_t from, const std::string& token, const std::vector<Address>& accounts) {
    Units total = 0;
    for (std::size_t i = from; i < log.size(); ++i)
        if (const auto* m = std::get_if<events::Minted>(&log[i]);
            m && m->token == token && std::find(accounts.begin(), accounts.end(), m->to) != accounts.end())
            total += m->amount;
    return total;
}

std::vector<TimelineEntry> timeline_of(const EventLog& log) {
    std::vector<TimelineEntry> out;
    const auto heights = event_heights(log);
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (std::holds_alternative<events::BlocksAdvanced>(log[i]) || std::holds_alternative<events::TxCommitted>(log[i]))
            continue;
        json j = log[i];
        j.erase("type");
        out.push_back({heights[i], event_name(log[i]), j.dump()});
    }
    return out;
}

// ---- beanstalk_flashloan ----

ScenarioRun run_beanstalk_flashloan(const json& cfg) {
    const json& p = cfg.at("params");
    const bool instant = p.at("instant_execution").get<bool>();
    const Units supply = units(p, "supply");
    const Units pool_bps = units(p, "pool_liquidity_bps");
    const Units stake_bps = units(p, "attacker_stake_bps");
    const Units quorum_bps = units(p, "quorum_bps");
    const Units collateral = units(p, "collateral_value");
    if (supply <= 0) throw PreconditionError("params.supply must be positive");
    if (pool_bps < 0 || stake_bps < 0 || pool_bps + stake_bps > bps_denominator)
        throw PreconditionError("params.pool_liquidity_bps + params.attacker_stake_bps must be within [0, 10000]");
    if (quorum_bps <= 0 || quorum_bps > bps_denominator) throw PreconditionError("params.quorum_bps out of range");

    Script s(cfg);
    const Address attacker{"attacker"}, pool{"bean_flash_pool"}, gov{"beanstalk_gov"}, silo{"silo"};
    const std::string bean = "BEAN", usd = "COLLATERAL";
    const std::size_t n_community = std::max<std::size_t>(1, u64(p, "community_holders"));
    std::vector<Address> community;
    for (std::size_t i = 0; i < n_community; ++i) community.push_back(numbered("holder", i));

    const Units liquidity = apply_bps(supply, pool_bps);
    const Units stake = apply_bps(supply, stake_bps);

    GovernorParams params;
    params.source.token = bean;
    params.proposal_threshold = Quantity::of_supply_bps(units(p, "proposal_threshold_bps"));
    params.voting_delay = instant ? 0 : u64(p, "voting_delay");
    params.voting_period = u64(p, "voting_period");
    params.quorum = Quantity::of_supply_bps(quorum_bps);
    params.timelock_delay = instant ? 0 : u64(p, "timelock_delay");
    params.grace_period = 14 * blocks_per_day(s.world.chain().block_interval);
    params.emergency_commit_bps = instant ? quorum_bps : 0;

    s.account(attacker);
    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, bean, {s.harness});
        ledger::create_token(tx, usd, {s.harness});
        ledger::mint(tx, bean, pool, liquidity);
        ledger::mint(tx, bean, attacker, stake);
        const auto rest = split_evenly(supply - liquidity - stake, community.size());
        for (std::size_t i = 0; i < community.size(); ++i) ledger::mint(tx, bean, community[i], rest[i]);
        ledger::create_flash_pool(tx, pool, bean, units(p, "flash_fee_bps"));
        governor::create_governor(tx, gov, params);
        const auto impl = contracts::register_implementation(tx, behaviors::collateral_vault_v1());
        contracts::deploy_proxy(tx, silo, gov, impl, {{"owner", json(gov)}});
        ledger::mint(tx, usd, silo, collateral);
    }, "beanstalk setup");

    s.at(u64(p, "attack_block"));
    const std::size_t mark = s.world.log().size();
    const std::uint64_t id = s.world.governor(gov).next_proposal_id();
    const Units fee = s.world.flash_pool(pool).fee_for(liquidity);
    const Action sweep{silo, "sweep", {{"token", usd}, {"to", attacker}}, p.at("action_label").get<std::string>(), {}};

    std::vector<Call> calls{
        {pool, "flash_borrow", {{"amount", liquidity}}, 0},
        {gov, "propose", {{"actions", json::array({sweep})}, {"metadata_hash", "bip-18"}}, 0},
        {gov, "cast_vote", {{"id", id}, {"support", true}}, 0},
    };
    if (instant) {
        calls.push_back({gov, "emergency_commit", {{"id", id}}, 0});
    } else {
        calls.push_back({gov, "queue", {{"id", id}}, 0});
        calls.push_back({gov, "execute", {{"id", id}}, 0});
    }
    calls.push_back({Address{bean}, "transfer", {{"to", pool}, {"amount", liquidity + fee}}, 0});
    const auto outcome = s.world.execute_atomic(TxScript{attacker, calls, std::nullopt});

    const auto& log = s.world.log();
    ScenarioReport r;
    r.scenario = "beanstalk_flashloan";
    r.succeeded = committed(outcome);
    r.attacker_profit = balance_delta(log, mark, bean, {attacker}) + balance_delta(log, mark, usd, {attacker});
    r.platform_loss = -balance_delta(log, mark, usd, {silo});
    r.details = {{"instant_execution", instant},
                 {"attack", outcome_json(outcome)},
                 {"borrowed", liquidity},
                 {"flash_fee", fee},
                 {"attacker_stake", stake},
                 {"quorum_needed", apply_bps(supply, quorum_bps)},
                 {"collateral_before", collateral},
                 {"collateral_after", s.world.token(usd).balance(silo)},
                 {"action_label", sweep.label},
                 {"action_actual", "sweep " + usd + " to " + attacker.str()},
                 {"proposals", s.world.governor(gov).proposal_count()}};
    return finish(s, std::move(r), {attacker}, cfg);
}

// ---- humpy_gauge ----

ScenarioRun run_humpy_gauge(const json& cfg) {
    const json& p = cfg.at("params");
    const Units total_locked = units(p, "total_locked");
    const Units fraction_bps = units(p, "attacker_ve_fraction_bps");
    const std::size_t n_attackers = u64(p, "n_attacker_addresses");
    const std::size_t n_community = u64(p, "n_community");
    const std::size_t n_gauges = u64(p, "community_gauges");
    const std::uint64_t epochs = u64(p, "epochs");
    const std::string response = p.at("community_response").get<std::string>();
    if (fraction_bps < 0 || fraction_bps > bps_denominator)
        throw PreconditionError("params.attacker_ve_fraction_bps must be in [0, 10000]");
    if (n_attackers == 0 || n_community == 0 || n_gauges == 0)
        throw PreconditionError("params.n_attacker_addresses, n_community and community_gauges must be positive");
    if (response != "none" && response != "kill_gauge" && response != "peace_treaty")
        throw PreconditionError("params.community_response must be none, kill_gauge or peace_treaty");

    Script s(cfg);
    const std::string bal = "BAL";
    const Address vebal{"vebal"}, gov{"balancer_gov"}, lp{"lp_provider"};
    std::vector<Address> attackers, community;
    for (std::size_t i = 0; i < n_attackers; ++i) attackers.push_back(numbered("humpy", i));
    for (std::size_t i = 0; i < n_community; ++i) community.push_back(numbered("community", i));
    const auto attacker_amounts = split_evenly(apply_bps(total_locked, fraction_bps), n_attackers);
    const auto community_amounts = split_evenly(total_locked - apply_bps(total_locked, fraction_bps), n_community);

    EscrowParams ep;
    ep.token = bal;
    ep.max_lock_duration = p.at("max_lock_weeks").get<Timestamp>() * seconds_per_week;
    ep.epoch_length = seconds_per_week;
    ep.tokens_per_epoch = units(p, "tokens_per_epoch");
    ep.protocol_fee_share_bps = units(p, "protocol_fee_share_bps");
    ep.governance = gov;

    GovernorParams gp;
    gp.source.escrow = vebal;
    gp.proposal_threshold = Quantity::absolute(0);
    gp.voting_delay = 1;
    gp.voting_period = 100;
    gp.quorum = Quantity::of_supply_bps(2000);
    gp.timelock_delay = 10;
    gp.grace_period = 1000;

    for (const auto& a : attackers) s.account(a);
    for (const auto& c : community) s.account(c);
    s.account(lp);

    std::uint64_t attacker_pool = 0, attacker_gauge = 0;
    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, bal, {s.harness});
        for (std::size_t i = 0; i < n_attackers; ++i) ledger::mint(tx, bal, attackers[i], attacker_amounts[i]);
        for (std::size_t i = 0; i < n_community; ++i) ledger::mint(tx, bal, community[i], community_amounts[i]);
        escrow::create_escrow(tx, vebal, ep);
        ledger::grant_authority(tx, bal, vebal);
        governor::create_governor(tx, gov, gp);
    }, "humpy setup");
    s.must(lp, [&](TxContext& tx) {
        for (std::size_t g = 0; g < n_gauges; ++g) {
            const auto pool = escrow::create_pool(tx, vebal, units(p, "community_pool_fee_bps"));
            escrow::set_lp_shares(tx, vebal, pool, lp, 1);
            escrow::add_gauge(tx, vebal, pool);
        }
    }, "community pools");
    s.must(attackers.front(), [&](TxContext& tx) {
        attacker_pool = escrow::create_pool(tx, vebal, units(p, "pool_fee_bps"));
        for (const auto& a : attackers) escrow::set_lp_shares(tx, vebal, attacker_pool, a, 1);
        attacker_gauge = escrow::add_gauge(tx, vebal, attacker_pool);
    }, "attacker pool");

    s.at(1);
    const std::size_t mark = s.world.log().size();
    const Timestamp now = s.world.timestamp();
    auto lock_and_vote = [&](const Address& who, Units amount, std::uint64_t gauge) {
        s.must(who, [&](TxContext& tx) {
            if (amount > 0) escrow::create_lock(tx, vebal, amount, now + ep.max_lock_duration);
            escrow::vote_gauge_weight(tx, vebal, {{gauge, bps_denominator}});
        }, "lock and vote");
    };
    for (std::size_t i = 0; i < n_attackers; ++i) lock_and_vote(attackers[i], attacker_amounts[i], attacker_gauge);
    for (std::size_t i = 0; i < n_community; ++i) lock_and_vote(community[i], community_amounts[i], 1 + i % n_gauges);

    // Re-read on every use: a reverted transaction restores the world wholesale.
    auto escrow_state = [&]() -> const Escrow& { return s.world.escrow(vebal); };
    const std::uint64_t first = escrow_state().epoch_of(now) + 1;
    const std::uint64_t response_epoch = first + u64(p, "response_epoch") - 1;
    const auto trace = p.at("volume_trace").get<std::vector<Units>>();

    ScenarioReport r;
    r.scenario = "humpy_gauge";
    Series per_epoch, cumulative, revenue_series;
    Units attacker_total = 0, revenue_total = 0, post_attacker = 0, post_total = 0;
    json epochs_json = json::array();
    json response_json = nullptr;

    for (std::uint64_t k = 0; k < epochs; ++k) {
        const std::uint64_t e = first + k;
        s.at(std::max(s.world.height(), s.block_at_or_after(escrow_state().epoch_start(e))));
        if (response != "none" && e == response_epoch) {
            const Action act = response == "kill_gauge"
                                   ? Action{vebal, "kill_gauge", {{"gauge", attacker_gauge}}, "Kill CREAM/WETH Gauge", {}}
                                   : Action{vebal, "set_fixed_share",
                                            {{"gauge", attacker_gauge}, {"bps", units(p, "peace_treaty_bps")}},
                                            "Peace treaty", {}};
            std::uint64_t id = 0;
            s.must(community.front(), [&](TxContext& tx) { id = governor::propose(tx, gov, {act}, "bip-" + response); },
                   "response proposal");
            const auto start = s.world.governor(gov).proposal(id).start;
            const auto end = s.world.governor(gov).proposal(id).end;
            s.at(start);
            for (const auto& c : community) s.call(c, gov, "cast_vote", {{"id", id}, {"support", true}});
            for (const auto& a : attackers)
                s.call(a, gov, "cast_vote", {{"id", id}, {"support", response == "peace_treaty"}});
            s.at(end + 1);
            s.call(s.harness, gov, "queue", {{"id", id}});
            const auto queued = s.world.governor(gov).proposal(id).eta;
            if (queued) s.at(*queued);
            const auto executed = s.call(s.harness, gov, "execute", {{"id", id}});
            response_json = {{"kind", response},
                             {"epoch", e},
                             {"proposal", id},
                             {"state", to_string(governor::state(s.world, gov, id))},
                             {"execute", outcome_json(executed)}};
        }
        const Units volume = k < trace.size() ? trace[k] : 0;
        s.must(attackers.front(), [&](TxContext& tx) { escrow::record_swap_volume(tx, vebal, attacker_pool, volume); },
               "swap volume");
        s.at(s.block_at_or_after(escrow_state().epoch_start(e + 1)));
        const std::size_t before = s.world.log().size();
        std::map<std::uint64_t, Units> per_gauge;
        s.must(s.harness, [&](TxContext& tx) { per_gauge = escrow::distribute_emissions(tx, vebal, e); }, "emissions");
        const Units got = minted_to(s.world.log(), before, bal, attackers);
        const Units minted = minted_to(s.world.log(), before, bal, [&] {
            std::vector<Address> all(attackers);
            all.push_back(lp);
            return all;
        }());
        const Units revenue = s.world.escrow(vebal).pool(attacker_pool).protocol_revenue - revenue_total;
        attacker_total += got;
        revenue_total += revenue;
        if (response != "none" && e >= response_epoch) {
            post_attacker += got;
            post_total += minted;
        }
        per_epoch.emplace_back(static_cast<double>(e), static_cast<double>(got));
        cumulative.emplace_back(static_cast<double>(e), static_cast<double>(attacker_total));
        revenue_series.emplace_back(static_cast<double>(e), static_cast<double>(revenue));
        epochs_json.push_back({{"epoch", e}, {"attacker_emissions", got}, {"emitted", minted}, {"pool_revenue", revenue}});
    }

    // Emissions the attacker received, priced 1:1 with the pool's protocol revenue.
    r.attacker_profit = minted_to(s.world.log(), mark, bal, attackers);
    r.platform_loss = r.attacker_profit - revenue_total;
    r.succeeded = r.attacker_profit > revenue_total;
    const Units ve_attacker = [&] {
        Units v = 0;
        for (const auto& a : attackers) v += escrow_state().ve_power(a, escrow_state().epoch_start(first));
        return v;
    }();
    const Units ve_total = escrow_state().total_ve_power(escrow_state().epoch_start(first));
    r.details = {{"attacker_ve", ve_attacker},
                 {"total_ve", ve_total},
                 {"attacker_ve_fraction", ve_total == 0 ? 0.0 : static_cast<double>(ve_attacker) / ve_total},
                 {"attacker_emissions", attacker_total},
                 {"pool_revenue", revenue_total},
                 {"profit_to_revenue", revenue_total == 0 ? 0.0 : static_cast<double>(attacker_total) / revenue_total},
                 {"epochs", epochs_json},
                 {"response", response_json},
                 {"post_response_attacker", post_attacker},
                 {"post_response_emitted", post_total},
                 {"post_response_share", post_total == 0 ? 0.0 : static_cast<double>(post_attacker) / post_total},
                 {"gauges", s.world.escrow(vebal).gauges().size()}};
    r.series["attacker_emissions"] = std::move(per_epoch);
    r.series["attacker_cumulative"] = std::move(cumulative);
    r.series["pool_revenue"] = std::move(revenue_series);
    return finish(s, std::move(r), attackers, cfg);
}

// ---- snapshot_proposer ----

ScenarioRun run_snapshot_proposer(const json& cfg) {
    const json& p = cfg.at("params");
    const Units supply = units(p, "supply");
    const Units attacker_weight = units(p, "attacker_weight");
    const Units others = units(p, "other_for_votes");
    const Units against = units(p, "against_votes");
    const std::size_t n_others = std::max<std::size_t>(1, u64(p, "n_other_voters"));
    const bool disguised = p.at("disguised_mint").get<bool>();
    if (attacker_weight < 0 || others < 0 || against < 0 || attacker_weight + others + against > supply)
        throw PreconditionError("params.attacker_weight + other_for_votes + against_votes must fit in params.supply");

    Script s(cfg);
    const std::string aave = "AAVE";
    const Address attacker{"attacker"}, market{"market"}, treasury{"treasury"}, opponent{"opponent"},
        watcher{"watcher"}, gov{"aave_gov"}, configurator{"pool_configurator"};
    std::vector<Address> voters;
    for (std::size_t i = 0; i < n_others; ++i) voters.push_back(numbered("voter", i));

    json gp_json = governor::preset_governor(p.at("preset").get<std::string>(), supply, s.world.chain().block_interval);
    gp_json = merge(gp_json, p.at("governor_overrides"));
    auto gp = gp_json.get<GovernorParams>();
    gp.source = PowerSource{aave, {}};
    governor::validate(gp, supply);

    for (const auto& a : {attacker, market, treasury, opponent, watcher}) s.account(a);
    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, aave, {s.harness});
        ledger::mint(tx, aave, market, attacker_weight);
        const auto shares = split_evenly(others, n_others);
        for (std::size_t i = 0; i < n_others; ++i) ledger::mint(tx, aave, voters[i], shares[i]);
        ledger::mint(tx, aave, opponent, against);
        ledger::mint(tx, aave, treasury, supply - attacker_weight - others - against);
        governor::create_governor(tx, gov, gp);
        if (disguised) ledger::grant_authority(tx, aave, gov);
        const auto impl = contracts::register_implementation(tx, behaviors::asset_registry_v1());
        contracts::deploy_proxy(tx, configurator, gov, impl, {{"owner", json(gov)}});
    }, "snapshot_proposer setup");

    const BlockHeight propose_block = u64(p, "propose_block");
    const auto acquire_offset = p.at("acquire_block_offset").get<std::int64_t>();
    const auto dump_offset = p.at("dump_block_offset").get<std::int64_t>();
    const auto offset = [](BlockHeight b, std::int64_t d) {
        return static_cast<BlockHeight>(std::max<std::int64_t>(1, static_cast<std::int64_t>(b) + d));
    };
    const BlockHeight start = propose_block + gp.voting_delay;
    const BlockHeight end = start + gp.voting_period;
    const BlockHeight queue_block = end + 1;
    const BlockHeight eta = queue_block + gp.timelock_delay;
    const BlockHeight dump_block = offset(eta, dump_offset);
    const std::string symbol = p.at("symbol").get<std::string>();

    std::vector<Action> actions{{configurator, "add_asset", {{"symbol", symbol}}, "Add " + symbol + " to the market", {}}};
    if (disguised)
        actions.push_back({Address{aave}, "mint", {{"to", attacker}, {"amount", units(p, "disguised_mint_amount")}},
                           "Update reserve factor", {}});

    std::uint64_t id = 0;
    json outcomes = json::object();
    Plan plan;
    plan.at(offset(propose_block, acquire_offset),
            [&] { outcomes["acquire"] = outcome_json(s.call(market, aave, "transfer", {{"to", attacker}, {"amount", attacker_weight}})); });
    plan.at(propose_block, [&] {
        outcomes["propose"] = outcome_json(s.as(attacker, [&](TxContext& tx) { id = governor::propose(tx, gov, actions, "QmUnverified"); }));
    });
    plan.at(start, [&] { s.call(attacker, gov, "cast_vote", {{"id", id}, {"support", true}}); });
    if (against > 0) plan.at(start, [&] { s.call(opponent, gov, "cast_vote", {{"id", id}, {"support", false}}); });
    for (std::size_t i = 0; i < n_others; ++i)
        plan.at(start + 1 + i, [&, i] { s.call(voters[i], gov, "cast_vote", {{"id", id}, {"support", true}}); });
    const bool dump_first = dump_block < eta;
    if (dump_first) plan.at(dump_block + 1, [&] {
        outcomes["cancel"] = outcome_json(s.call(watcher, gov, "cancel", {{"id", id}, {"signatures", json::array()}}));
    });
    plan.at(queue_block, [&] { outcomes["queue"] = outcome_json(s.call(watcher, gov, "queue", {{"id", id}})); });
    plan.at(eta, [&] { outcomes["execute"] = outcome_json(s.call(watcher, gov, "execute", {{"id", id}})); });
    plan.at(dump_block, [&] {
        const Units held = s.world.token(aave).balance(attacker);
        outcomes["dump"] = outcome_json(s.call(attacker, aave, "transfer", {{"to", market}, {"amount", held}}));
    });
    plan.at(std::max(eta, dump_block) + 2, [] {});
    plan.run(s);

    const auto& log = s.world.log();
    ScenarioReport r;
    r.scenario = "snapshot_proposer";
    json details = {{"outcomes", outcomes}, {"preset", p.at("preset")}};
    if (id != 0) {
        const auto& prop = s.world.governor(gov).proposal(id);
        const auto st = governor::state(s.world, gov, id);
        const Units weight = prop.receipts.contains(attacker) ? prop.receipts.at(attacker).weight : 0;
        const auto records = analytics::fold_proposals(log);
        const auto& rec = records.at(id - 1);
        r.succeeded = st == ProposalState::Executed;
        details["proposal"] = id;
        details["state"] = to_string(st);
        details["attacker_weight"] = weight;
        details["for_votes"] = prop.for_votes;
        details["against_votes"] = prop.against_votes;
        details["attacker_share"] = prop.for_votes == 0 ? 0.0 : static_cast<double>(weight) / prop.for_votes;
        details["created"] = prop.created;
        details["snapshot"] = prop.snapshot;
        details["end"] = prop.end;
        details["eta"] = prop.eta ? json(*prop.eta) : json(nullptr);
        details["executed_at"] = rec.executed_at ? json(*rec.executed_at) : json(nullptr);
        details["canceled_at"] = rec.canceled_at ? json(*rec.canceled_at) : json(nullptr);
        json labels = json::array();
        for (const auto& a : prop.actions) labels.push_back({{"label", a.label}, {"target", a.target}, {"op", a.op}});
        details["actions"] = labels;
        const auto listed = s.world.registry().proxy(configurator).storage;
        details["listed"] = listed.contains("assets") && listed.at("assets").value(symbol, "") == "listed";

        const auto intervals = analytics::holding_duration(log, aave, attacker);
        json hold = json::array();
        for (const auto& iv : intervals) {
            json h = {{"acquired", iv.acquired},
                      {"disposed", iv.disposed ? json(*iv.disposed) : json(nullptr)},
                      {"proposed", iv.proposed},
                      {"voted", iv.voted},
                      {"overlapped", iv.overlapped},
                      {"single_proposal_holder", iv.single_proposal_holder()}};
            if (iv.disposed) h["blocks"] = *iv.disposed - iv.acquired;
            hold.push_back(h);
        }
        details["holding"] = hold;
        if (rec.executed_at && intervals.size() == 1 && intervals[0].disposed) {
            details["lifecycle_blocks"] = *rec.executed_at - rec.created;
            details["within_lifecycle"] =
                intervals[0].acquired + 1 >= rec.created && *intervals[0].disposed <= *rec.executed_at + 1;
        }
    }
    r.details = std::move(details);
    r.attacker_profit = balance_delta(log, 0, aave, {attacker});
    r.platform_loss = minted_to(log, 0, aave, {attacker});
    return finish(s, std::move(r), {attacker}, cfg);
}

// ---- negative_interest ----

ScenarioRun run_negative_interest(const json& cfg) {
    const json& p = cfg.at("params");
    const Units supply = units(p, "supply");
    const Units liquidity = units(p, "market_liquidity");
    const Units borrow = units(p, "borrow_amount");
    const Units interest = units(p, "borrow_interest_bps_per_epoch");
    const Units reward = units(p, "reward_bps_per_epoch");
    const std::uint64_t epochs = u64(p, "epochs");
    const BlockHeight epoch_blocks = u64(p, "epoch_blocks");
    if (liquidity > supply || borrow > liquidity || borrow <= 0)
        throw PreconditionError("need 0 < params.borrow_amount <= params.market_liquidity <= params.supply");
    if (epoch_blocks == 0) throw PreconditionError("params.epoch_blocks must be positive");

    Script s(cfg);
    const std::string comp = "COMP";
    const Address borrower{"borrower"}, op{"market_operator"}, market{"comp_market"}, holders{"comp_holders"};
    for (const auto& a : {borrower, op, holders}) s.account(a);
    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, comp, {s.harness});
        ledger::mint(tx, comp, market, liquidity);
        ledger::mint(tx, comp, holders, supply - liquidity);
        const auto impl = contracts::register_implementation(tx, behaviors::lending_market_v1());
        contracts::deploy_proxy(tx, market, s.harness, impl, {{"operator", json(op)}, {"token", comp}});
        ledger::grant_authority(tx, comp, market);
    }, "negative_interest setup");

    s.at(1);
    const std::size_t mark = s.world.log().size();
    const auto borrowed = s.call(borrower, market, "borrow", {{"amount", borrow}});
    if (!committed(borrowed)) throw PreconditionError("borrow failed: " + revert_reason(borrowed));

    auto debt_of = [&] {
        const auto& storage = s.world.registry().proxy(market).storage;
        auto it = storage.find("debt");
        return it == storage.end() ? Units{0} : it->second.value(borrower.str(), Units{0});
    };
    Series power, debt;
    power.emplace_back(0, static_cast<double>(s.world.token(comp).power(borrower, PowerKind::Voting)));
    debt.emplace_back(0, static_cast<double>(debt_of()));
    bool strictly_increasing = true;
    for (std::uint64_t e = 1; e <= epochs; ++e) {
        s.at(1 + e * epoch_blocks);
        const auto out = s.world.execute_atomic(TxScript{
            op,
            {Call{market, "accrue_interest", {{"bps", interest}}, 0}, Call{market, "distribute_rewards", {{"bps", reward}}, 0}},
            std::nullopt});
        if (!committed(out)) throw PreconditionError("epoch settlement failed: " + revert_reason(out));
        const double now = static_cast<double>(s.world.token(comp).power_at(borrower, PowerKind::Voting, s.world.height()));
        strictly_increasing = strictly_increasing && now > power.back().second;
        power.emplace_back(static_cast<double>(e), now);
        debt.emplace_back(static_cast<double>(e), static_cast<double>(debt_of()));
    }

    const auto& log = s.world.log();
    const Units rewards = minted_to(log, mark, comp, {borrower});
    const Units accrued = debt_of() - borrow;
    ScenarioReport r;
    r.scenario = "negative_interest";
    r.succeeded = interest - reward < 0;
    r.attacker_profit = rewards - accrued;
    r.platform_loss = rewards;
    r.details = {{"net_rate_bps_per_epoch", interest - reward},
                 {"interest_bps_per_epoch", interest},
                 {"reward_bps_per_epoch", reward},
                 {"borrowed", borrow},
                 {"final_debt", debt_of()},
                 {"interest_accrued", accrued},
                 {"rewards_received", rewards},
                 {"voting_power_start", static_cast<Units>(power.front().second)},
                 {"voting_power_end", static_cast<Units>(power.back().second)},
                 {"power_strictly_increasing", strictly_increasing},
                 {"power_share_end", static_cast<double>(power.back().second) / s.world.token(comp).total_supply()}};
    r.series["voting_power"] = std::move(power);
    r.series["debt"] = std::move(debt);
    return finish(s, std::move(r), {borrower}, cfg);
}

// ---- meta_governance ----

ScenarioRun run_meta_governance(const json& cfg) {
    const json& p = cfg.at("params");
    const Units host_supply = units(p, "host_supply");
    const Units index_bps = units(p, "index_holdings_bps");
    const Units whale_bps = units(p, "community_freeze_bps");
    const std::size_t n_holders = std::max<std::size_t>(1, u64(p, "index_holders"));
    const std::size_t n_for = u64(p, "index_for_holders");
    const bool freeze = p.at("freeze").get<bool>();
    const std::string symbol = p.at("index_token_symbol").get<std::string>();
    if (index_bps < 0 || whale_bps < 0 || index_bps + whale_bps > bps_denominator)
        throw PreconditionError("params.index_holdings_bps + community_freeze_bps must be within [0, 10000]");
    if (n_for > n_holders) throw PreconditionError("params.index_for_holders exceeds params.index_holders");

    Script s(cfg);
    const std::string host = "HOST";
    const Address gov{"host_gov"}, markets{"host_markets"}, index{"dpi_index"}, operator_{"index_operator"},
        whale{"community_whale"}, treasury{"host_treasury"};
    std::vector<Address> holders;
    for (std::size_t i = 0; i < n_holders; ++i) holders.push_back(numbered("dpi_holder", i));
    for (const auto& a : {operator_, whale, treasury}) s.account(a);
    for (const auto& h : holders) s.account(h);

    auto gp = governor::preset_governor(p.at("host_preset").get<std::string>(), host_supply, s.world.chain().block_interval);
    gp.source = PowerSource{host, {}};
    const Units index_holdings = apply_bps(host_supply, index_bps);
    const Units whale_holdings = apply_bps(host_supply, whale_bps);

    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, host, {s.harness});
        ledger::create_token(tx, symbol, {s.harness});
        ledger::mint(tx, host, index, index_holdings);
        ledger::mint(tx, host, whale, whale_holdings);
        ledger::mint(tx, host, treasury, host_supply - index_holdings - whale_holdings);
        const auto dpi = split_evenly(units(p, "index_supply"), n_holders);
        for (std::size_t i = 0; i < n_holders; ++i) ledger::mint(tx, symbol, holders[i], dpi[i]);
        governor::create_governor(tx, gov, gp);
        const auto registry = contracts::register_implementation(tx, behaviors::asset_registry_v1());
        contracts::deploy_proxy(tx, markets, gov, registry, {{"owner", json(gov)}});
        const auto meta = contracts::register_implementation(tx, behaviors::meta_index_v1());
        contracts::deploy_proxy(tx, index, operator_, meta,
                                {{"operator", json(operator_)}, {"index_token", symbol}, {"host_governor", json(gov)}});
    }, "meta_governance setup");
    json outcomes = json::object();

    auto lifecycle = [&](const std::string& key, const std::function<std::uint64_t()>& propose,
                         const std::function<void(std::uint64_t)>& vote) -> std::optional<std::uint64_t> {
        const auto id = propose();
        if (id == 0) return std::nullopt;
        const auto prop = s.world.governor(gov).proposal(id);
        s.at(prop.start);
        vote(id);
        s.at(prop.end + 1);
        outcomes[key + "_queue"] = outcome_json(s.call(s.harness, gov, "queue", {{"id", id}}));
        const auto eta = s.world.governor(gov).proposal(id).eta;
        if (eta) {
            s.at(*eta);
            outcomes[key + "_execute"] = outcome_json(s.call(s.harness, gov, "execute", {{"id", id}}));
        }
        return id;
    };

    auto index_votes = [&](std::uint64_t id, bool listing) {
        for (std::size_t i = 0; i < n_holders; ++i) {
            const bool support = listing ? i < n_for : false;
            s.call(holders[i], index, "internal_vote", {{"host_id", id}, {"support", support}});
        }
        s.at(s.world.height() + 1);
        std::string cast = "none";
        s.as(operator_, [&](TxContext& tx) {
            cast = contracts::handle_proxy_call(tx, index, "pass_through", {{"host_id", id}}).get<std::string>();
        });
        return cast;
    };

    s.at(10);
    std::string listing_vote = "none";
    const Action list{markets, "add_asset", {{"symbol", symbol}}, "Onboard " + symbol, {}};
    const auto listing = lifecycle(
        "listing",
        [&] {
            std::uint64_t id = 0;
            const auto out = s.as(operator_, [&](TxContext& tx) {
                id = contracts::handle_proxy_call(tx, index, "relay_propose",
                                                  {{"actions", json::array({list})}, {"metadata_hash", "onboard-dpi"}})
                         .get<std::uint64_t>();
            });
            outcomes["listing_propose"] = outcome_json(out);
            return committed(out) ? id : 0;
        },
        [&](std::uint64_t id) { listing_vote = index_votes(id, true); });

    auto state_of = [&](const std::optional<std::uint64_t>& id) -> json {
        return id ? json(to_string(governor::state(s.world, gov, *id))) : json(nullptr);
    };
    auto listed = [&] {
        const auto& st = s.world.registry().proxy(markets).storage;
        return st.contains("assets") && st.at("assets").value(symbol, "") == "listed";
    };
    const bool listed_after_listing = listed();

    std::optional<std::uint64_t> freeze_id;
    std::string freeze_vote = "none";
    if (freeze && listed_after_listing) {
        s.at(s.world.height() + 10);
        const Action fr{markets, "freeze_asset", {{"symbol", symbol}}, "Freeze " + symbol, {}};
        freeze_id = lifecycle(
            "freeze",
            [&] {
                std::uint64_t id = 0;
                const auto out = s.as(whale, [&](TxContext& tx) { id = governor::propose(tx, gov, {fr}, "freeze-dpi"); });
                outcomes["freeze_propose"] = outcome_json(out);
                return committed(out) ? id : 0;
            },
            [&](std::uint64_t id) {
                s.call(whale, gov, "cast_vote", {{"id", id}, {"support", true}});
                freeze_vote = index_votes(id, false);
            });
    }
    s.at(s.world.height() + 1);

    ScenarioReport r;
    r.scenario = "meta_governance";
    r.succeeded = listing && governor::state(s.world, gov, *listing) == ProposalState::Executed;
    r.details = {{"host_preset", p.at("host_preset")},
                 {"index_holdings", index_holdings},
                 {"index_holdings_fraction", static_cast<double>(index_holdings) / host_supply},
                 {"listing_proposal", listing ? json(*listing) : json(nullptr)},
                 {"listing_state", state_of(listing)},
                 {"listing_index_vote", listing_vote},
                 {"listed_after_listing", listed_after_listing},
                 {"freeze_proposal", freeze_id ? json(*freeze_id) : json(nullptr)},
                 {"freeze_state", state_of(freeze_id)},
                 {"freeze_index_vote", freeze_vote},
                 {"listed_final", listed()},
                 {"outcomes", outcomes}};
    return finish(s, std::move(r), {index, operator_}, cfg);
}

// ---- accidental_delegation ----

ScenarioRun run_accidental_delegation(const json& cfg) {
    const json& p = cfg.at("params");
    const Units supply = units(p, "supply");
    const Units amount = units(p, "transfer_amount");
    const bool self_delegated = p.at("recipient_has_standing_self_delegation").get<bool>();
    const auto delegate_powers = p.at("delegates").get<std::vector<Units>>();
    Units spoken = amount;
    for (Units d : delegate_powers) spoken += d;
    if (amount <= 0 || spoken > supply) throw PreconditionError("params.transfer_amount + delegates must fit in params.supply");

    Script s(cfg);
    const std::string uni = "UNI";
    const Address hot{"exchange_hot"}, cold{"exchange_cold"}, treasury{"uni_treasury"};
    std::vector<Address> delegates, delegators;
    for (std::size_t i = 0; i < delegate_powers.size(); ++i) {
        delegates.push_back(numbered("delegate", i));
        delegators.push_back(numbered("delegator", i));
    }
    for (const auto& a : {hot, cold, treasury}) s.account(a);
    for (const auto& a : delegates) s.account(a);
    for (const auto& a : delegators) s.account(a);

    s.must(s.harness, [&](TxContext& tx) {
        ledger::create_token(tx, uni, {s.harness});
        ledger::mint(tx, uni, hot, amount);
        ledger::mint(tx, uni, treasury, supply - spoken);
        for (std::size_t i = 0; i < delegators.size(); ++i) ledger::mint(tx, uni, delegators[i], delegate_powers[i]);
    }, "accidental_delegation setup");
    s.must(hot, [&](TxContext& tx) { ledger::delegate(tx, uni, Address::null(), PowerKind::Voting); }, "hot delegation");
    s.must(treasury, [&](TxContext& tx) { ledger::delegate(tx, uni, Address::null(), PowerKind::Voting); }, "treasury");
    if (!self_delegated)
        s.must(cold, [&](TxContext& tx) { ledger::delegate(tx, uni, Address::null(), PowerKind::Voting); }, "cold");
    for (std::size_t i = 0; i < delegators.size(); ++i)
        s.must(delegators[i], [&](TxContext& tx) { ledger::delegate(tx, uni, delegates[i], PowerKind::Voting); },
               "delegation");

    const BlockHeight block = std::max<BlockHeight>(1, u64(p, "transfer_block"));
    s.at(block);
    const auto moved = s.call(hot, uni, "transfer", {{"to", cold}, {"amount", amount}});
    s.at(block + 1);

    const auto& led = s.world.token(uni);
    const Units before = led.power_at(cold, PowerKind::Voting, block - 1);
    const Units after = led.power_at(cold, PowerKind::Voting, block);
    std::vector<std::pair<Units, Address>> ranking;
    for (const auto& a : led.power_holders(PowerKind::Voting)) {
        if (a == Address::null()) continue;
        const Units v = led.power_at(a, PowerKind::Voting, block);
        if (v > 0) ranking.emplace_back(v, a);
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    json ranks = json::array();
    std::size_t rank = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        ranks.push_back({{"rank", i + 1}, {"delegate", ranking[i].second}, {"power", ranking[i].first}});
        if (ranking[i].second == cold) rank = i + 1;
    }
    std::size_t votes = 0;
    for (const auto& e : s.world.log()) votes += std::holds_alternative<events::VoteCast>(e) ? 1 : 0;

    ScenarioReport r;
    r.scenario = "accidental_delegation";
    r.succeeded = after > before;
    r.details = {{"transfer", outcome_json(moved)},
                 {"transfer_block", block},
                 {"recipient_self_delegated", self_delegated},
                 {"recipient_power_before", before},
                 {"recipient_power_after", after},
                 {"recipient_power_delta", after - before},
                 {"null_sink_power", led.power_at(Address::null(), PowerKind::Voting, block)},
                 {"recipient_rank", rank},
                 {"ranking", ranks},
                 {"votes_cast", votes}};
    return finish(s, std::move(r), {cold}, cfg);
}

// ---- turnout ----

ScenarioRun run_turnout(const json& cfg) {
    const json& p = cfg.at("params");
    analytics::TurnoutSetup setup;
    setup.chain = ChainParams{cfg.at("chain").at("genesis_time").get<Timestamp>(),
                              cfg.at("chain").at("block_interval").get<Timestamp>(),
                              cfg.at("chain").at("gas_per_call").get<Units>()};
    setup.proposals = u64(p, "proposals");
    setup.voting_delay = u64(p, "voting_delay");
    setup.voting_period = u64(p, "voting_period");
    setup.gap = u64(p, "gap");
    setup.seed = cfg.at("seed").get<std::uint64_t>();

    const std::size_t n = u64(p, "agents");
    const double vmin = p.at("value_min").get<double>(), vmax = p.at("value_max").get<double>();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = n == 1 ? vmin : vmin + (vmax - vmin) * static_cast<double>(i) / static_cast<double>(n - 1);
        setup.agents.push_back({numbered("agent", i), units(p, "stake"), v, p.at("alignment").get<double>()});
    }

    const std::string pattern = p.at("gas_pattern").get<std::string>();
    if (pattern == "alternating") {
        // One segment per proposal, starting at its creation block.
        PiecewiseGas g;
        g.segments.emplace_back(0, units(p, "gas_low"));
        BlockHeight created = 1;
        for (std::size_t k = 0; k < setup.proposals; ++k) {
            g.segments.emplace_back(created, k % 2 == 0 ? units(p, "gas_low") : units(p, "gas_high"));
            created += setup.voting_delay + setup.voting_period + 1 + setup.gap;
        }
        setup.gas = g;
    } else if (pattern == "config") {
        setup.gas = parse_gas_descriptor(cfg.at("gas"));
    } else {
        throw PreconditionError("params.gas_pattern must be alternating or config");
    }

    auto sim = analytics::simulate_turnout(setup);
    ScenarioReport r;
    r.scenario = "turnout";
    r.succeeded = sim.summary.turnout_gas_corr < 0;
    json rows = json::array();
    Series gas_votes;
    for (const auto& t : sim.proposals) {
        rows.push_back({{"proposal", t.id},
                        {"start", t.start},
                        {"end", t.end},
                        {"mean_gas", t.mean_gas},
                        {"votes", t.votes},
                        {"for", t.for_votes},
                        {"against", t.against_votes}});
        gas_votes.emplace_back(t.mean_gas, static_cast<double>(t.votes));
    }
    r.details = {{"agents", n}, {"proposals", rows}, {"turnout_gas_corr", sim.summary.turnout_gas_corr}};
    r.series["gas_vs_votes"] = std::move(gas_votes);

    ScenarioRun run{std::move(r), std::move(sim.world), {}, cfg};
    run.report.seed = setup.seed;
    run.report.timeline = timeline_of(run.world.log());
    run.report.metrics = sim.summary;
    return run;
}

// ---- registry ----

const std::vector<ScenarioInfo>& registry() {
    static const std::vector<ScenarioInfo> all = [] {
        std::vector<ScenarioInfo> v{
            {"accidental_delegation",
             "internal exchange transfer lands on a self-delegated wallet and makes it a top delegate",
             with_common({{"supply", 1'000'000'000},
                          {"transfer_amount", 13'000'000},
                          {"recipient_has_standing_self_delegation", true},
                          {"delegates", {12'000'000, 9'000'000, 7'000'000, 5'000'000, 3'000'000}},
                          {"transfer_block", 100}}),
             run_accidental_delegation},
            {"beanstalk_flashloan",
             "flash-borrowed majority proposes, votes and executes a mislabeled collateral sweep in one transaction",
             with_common({{"instant_execution", true},
                          {"supply", 100'000'000},
                          {"pool_liquidity_bps", 6700},
                          {"attacker_stake_bps", 100},
                          {"quorum_bps", 5000},
                          {"proposal_threshold_bps", 10},
                          {"flash_fee_bps", 9},
                          {"collateral_value", 182'000'000},
                          {"voting_delay", 1},
                          {"voting_period", 7200},
                          {"timelock_delay", 14'400},
                          {"community_holders", 4},
                          {"attack_block", 10},
                          {"action_label", "Donate to Ukraine"}}),
             run_beanstalk_flashloan},
            {"humpy_gauge",
             "vote-escrow whale steers emissions to its own high-fee pool; optional kill or peace-treaty response",
             with_common({{"attacker_ve_fraction_bps", 3500},
                          {"n_attacker_addresses", 5},
                          {"total_locked", 5'200'000},
                          {"n_community", 4},
                          {"community_gauges", 2},
                          {"pool_fee_bps", 1000},
                          {"community_pool_fee_bps", 30},
                          {"volume_trace", std::vector<Units>(10, 17'000)},
                          {"epochs", 10},
                          {"tokens_per_epoch", 514'286},
                          {"max_lock_weeks", 52},
                          {"protocol_fee_share_bps", 10'000},
                          {"community_response", "none"},
                          {"response_epoch", 5},
                          {"peace_treaty_bps", 1750}}),
             run_humpy_gauge},
            {"meta_governance",
             "index contract votes its treasury of host tokens as a block to list itself, later frozen by the community",
             with_common({{"host_preset", "compound"},
                          {"host_supply", 10'000'000},
                          {"index_holdings_bps", 600},
                          {"community_freeze_bps", 800},
                          {"index_supply", 1'000'000},
                          {"index_holders", 4},
                          {"index_for_holders", 4},
                          {"freeze", true},
                          {"index_token_symbol", "DPI"}}),
             run_meta_governance},
            {"negative_interest",
             "borrowing the governance token pays more in minted rewards than it costs in interest",
             with_common({{"supply", 10'000'000},
                          {"market_liquidity", 5'000'000},
                          {"borrow_amount", 1'000'000},
                          {"borrow_interest_bps_per_epoch", 10},
                          {"reward_bps_per_epoch", 25},
                          {"epochs", 10},
                          {"epoch_blocks", 7200}}),
             run_negative_interest},
            {"snapshot_proposer",
             "outsider buys power just before proposing a self-serving listing, votes it through, dumps after",
             with_common({{"preset", "aave_short"},
                          {"governor_overrides", json::object()},
                          {"supply", 16'000'000},
                          {"attacker_weight", 230'900},
                          {"other_for_votes", 256'800},
                          {"n_other_voters", 3},
                          {"against_votes", 0},
                          {"propose_block", 100},
                          {"acquire_block_offset", -1},
                          {"dump_block_offset", 1},
                          {"symbol", "UST"},
                          {"disguised_mint", false},
                          {"disguised_mint_amount", 1'000'000}}),
             run_snapshot_proposer},
            {"turnout",
             "cost-threshold voters across proposals under a gas series; turnout against gas price",
             with_common({{"agents", 20},
                          {"value_min", 5.0},
                          {"value_max", 100.0},
                          {"stake", 1000},
                          {"alignment", 0.8},
                          {"proposals", 40},
                          {"voting_delay", 1},
                          {"voting_period", 20},
                          {"gap", 1},
                          {"gas_pattern", "alternating"},
                          {"gas_low", 10},
                          {"gas_high", 60}}),
             run_turnout},
        };
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    }();
    return all;
}

const ScenarioInfo* find(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return &s;
    return nullptr;
}

ScenarioRun run(const std::string& name, const json& overrides, std::uint64_t seed) {
    const auto* info = find(name);
    if (info == nullptr) throw PreconditionError("unknown scenario: " + name);
    json resolved = merge(info->defaults, overrides);
    // A gas generator is replaced whole: keys of one kind mean nothing to another.
    if (overrides.contains("gas")) resolved["gas"] = overrides.at("gas");
    resolved["scenario"] = name;
    resolved["seed"] = seed;
    return info->run(resolved);
}

}  // namespace govsim::scenarios
