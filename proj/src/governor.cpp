#include "govsim/governor.hpp"

#include <algorithm>

#include "govsim/world.hpp"

namespace govsim {

const char* to_string(ProposalState s) {
    switch (s) {
        case ProposalState::Pending: return "Pending";
        case ProposalState::Active: return "Active";
        case ProposalState::Canceled: return "Canceled";
        case ProposalState::Defeated: return "Defeated";
        case ProposalState::Succeeded: return "Succeeded";
        case ProposalState::Queued: return "Queued";
        case ProposalState::Expired: return "Expired";
        case ProposalState::Executed: return "Executed";
    }
    return "?";
}

bool is_terminal(ProposalState s) {
    return s == ProposalState::Canceled || s == ProposalState::Defeated || s == ProposalState::Expired ||
           s == ProposalState::Executed;
}

// ---- JSON ----

namespace {

json quantity_to_json(const Quantity& q) { return q.relative ? json{{"bps", q.bps}} : json{{"units", q.units}}; }

Quantity quantity_from_json(const json& j) {
    if (j.is_number_integer()) return Quantity::absolute(j.get<Units>());
    if (!j.is_object()) throw json::type_error::create(302, "quantity must be an integer or {units|bps}", &j);
    if (j.contains("bps") && j.contains("units"))
        throw json::other_error::create(501, "quantity takes either units or bps, not both", &j);
    if (j.contains("bps")) return Quantity::of_supply_bps(j.at("bps").get<Units>());
    return Quantity::absolute(j.at("units").get<Units>());
}

}  // namespace

void to_json(json& j, const GovernorParams& p) {
    j = json{{"token", p.source.token},
             {"escrow", p.source.escrow},
             {"proposal_threshold", quantity_to_json(p.proposal_threshold)},
             {"threshold_strict", p.threshold_strict},
             {"proposition_kind", p.proposition_kind},
             {"voting_delay", p.voting_delay},
             {"voting_period", p.voting_period},
             {"quorum", quantity_to_json(p.quorum)},
             {"vote_differential", quantity_to_json(p.vote_differential)},
             {"timelock_delay", p.timelock_delay},
             {"grace_period", p.grace_period},
             {"max_actions", p.max_actions},
             {"guardian", {{"signers", p.guardian.signers}, {"threshold", p.guardian.threshold}}},
             {"executor_class", p.executor_class},
             {"threshold_maintenance", p.threshold_maintenance},
             {"emergency_commit_bps", p.emergency_commit_bps}};
}

void from_json(const json& j, GovernorParams& p) {
    GovernorParams d;
    d.source.token = j.value("token", std::string{});
    d.source.escrow = j.value("escrow", Address{});
    if (j.contains("proposal_threshold")) d.proposal_threshold = quantity_from_json(j.at("proposal_threshold"));
    d.threshold_strict = j.value("threshold_strict", d.threshold_strict);
    d.proposition_kind = j.value("proposition_kind", d.proposition_kind);
    d.voting_delay = j.value("voting_delay", d.voting_delay);
    d.voting_period = j.value("voting_period", d.voting_period);
    if (j.contains("quorum")) d.quorum = quantity_from_json(j.at("quorum"));
    if (j.contains("vote_differential")) d.vote_differential = quantity_from_json(j.at("vote_differential"));
    d.timelock_delay = j.value("timelock_delay", d.timelock_delay);
    d.grace_period = j.value("grace_period", d.grace_period);
    d.max_actions = j.value("max_actions", d.max_actions);
    if (j.contains("guardian")) {
        const auto& g = j.at("guardian");
        d.guardian.signers = g.value("signers", std::set<Address>{});
        d.guardian.threshold = g.value("threshold", std::size_t{0});
    }
    d.executor_class = j.value("executor_class", d.executor_class);
    d.threshold_maintenance = j.value("threshold_maintenance", d.threshold_maintenance);
    d.emergency_commit_bps = j.value("emergency_commit_bps", d.emergency_commit_bps);
    p = std::move(d);
}

void to_json(json& j, const Action& a) {
    j = json{{"target", a.target}, {"op", a.op}, {"args", a.args}, {"label", a.label}};
    if (a.executor) j["executor"] = *a.executor;
}

void from_json(const json& j, Action& a) {
    a.target = j.at("target").get<Address>();
    a.op = j.at("op").get<std::string>();
    a.args = j.value("args", json::object());
    a.label = j.value("label", std::string{});
    a.executor.reset();
    if (j.contains("executor") && !j.at("executor").is_null()) a.executor = j.at("executor").get<ExecutorClass>();
}

// ---- Governor ----

Governor::Governor(Address address, GovernorParams params)
    : address_(std::move(address)), params_(std::move(params)) {
    timelock_.admin = address_;
    timelock_.delay = params_.timelock_delay;
}

const Proposal& Governor::proposal(std::uint64_t id) const {
    if (id == 0 || id > proposals_.size()) throw PreconditionError("unknown proposal id " + std::to_string(id));
    return proposals_[id - 1];
}

Proposal& Governor::mutable_proposal(std::uint64_t id) {
    if (id == 0 || id > proposals_.size()) throw std::logic_error("unknown proposal id " + std::to_string(id));
    return proposals_[id - 1];
}

std::optional<std::uint64_t> Governor::latest_proposal_of(const Address& proposer) const {
    auto it = latest_by_proposer_.find(proposer);
    if (it == latest_by_proposer_.end()) return std::nullopt;
    return it->second;
}

void Governor::apply_created(Proposal p) {
    if (p.id != next_proposal_id()) throw std::logic_error("proposal ids must be sequential");
    latest_by_proposer_[p.proposer] = p.id;
    proposals_.push_back(std::move(p));
}

void Governor::apply_vote(std::uint64_t id, VoteReceipt receipt) {
    auto& p = mutable_proposal(id);
    (receipt.support ? p.for_votes : p.against_votes) += receipt.weight;
    p.receipts[receipt.voter] = std::move(receipt);
}

void Governor::apply_queued(std::uint64_t id, BlockHeight eta) {
    mutable_proposal(id).eta = eta;
    timelock_.queue[id] = eta;
}

void Governor::apply_executed(std::uint64_t id) {
    mutable_proposal(id).executed = true;
    timelock_.queue.erase(id);
}

void Governor::apply_canceled(std::uint64_t id) {
    mutable_proposal(id).canceled = true;
    timelock_.queue.erase(id);
}

namespace governor {

namespace {

const Governor& governor_of(const TxContext& tx, const Address& gov) {
    if (!tx.world.has_governor(gov)) throw Revert("unknown governor");
    return tx.world.governor(gov);
}

bool passed(const WorldState& world, const GovernorParams& params, const Proposal& p) {
    const Units supply = supply_at(world, params, p.snapshot);
    return p.for_votes >= params.quorum.resolve(supply) &&
           p.for_votes - p.against_votes >= params.vote_differential.resolve(supply);
}

bool below_threshold_now(const TxContext& tx, const Governor& g, const Address& proposer) {
    // Nothing exists before block 0, so a proposal made there is never held to the threshold.
    if (tx.height() == 0) return false;
    return !meets_threshold(tx.world, g.params(), proposer, tx.height() - 1);
}

void run_actions(TxContext& tx, const Address& gov, const std::vector<Action>& actions) {
    TxContext frame = tx.as(gov);
    for (const auto& a : actions) tx.world.dispatch(frame, Call{a.target, a.op, a.args, 0});
}

}  // namespace

Units power_at(const WorldState& world, const GovernorParams& params, const Address& account, PowerKind kind,
               BlockHeight b) {
    if (!params.source.escrow.empty()) return world.escrow(params.source.escrow).ve_power(account, world.timestamp_at(b));
    return world.token(params.source.token).power_at(account, kind, b);
}

Units supply_at(const WorldState& world, const GovernorParams& params, BlockHeight b) {
    if (!params.source.escrow.empty()) return world.escrow(params.source.escrow).total_ve_power(world.timestamp_at(b));
    return world.token(params.source.token).supply_at(b);
}

bool meets_threshold(const WorldState& world, const GovernorParams& params, const Address& account, BlockHeight b) {
    const Units power = power_at(world, params, account, params.proposition_kind, b);
    const Units threshold = params.proposal_threshold.resolve(supply_at(world, params, b));
    return params.threshold_strict ? power > threshold : power >= threshold;
}

void create_governor(TxContext& tx, const Address& address, const GovernorParams& params) {
    require(!address.empty(), "empty governor address");
    require(!tx.world.has_governor(address), "governor already exists");
    if (params.source.escrow.empty())
        require(tx.world.has_token(params.source.token), "governor power source is not a token");
    else
        require(tx.world.has_escrow(params.source.escrow), "governor power source is not an escrow");
    require(params.voting_period >= 1, "voting_period must be at least one block");
    require(params.max_actions >= 1, "max_actions must be positive");
    require(params.guardian.threshold <= params.guardian.signers.size(), "guardian threshold exceeds signer count");
    require(params.emergency_commit_bps >= 0 && params.emergency_commit_bps <= bps_denominator,
            "emergency_commit_bps out of range");
    tx.emit(events::GovernorCreated{address, params});
}

std::uint64_t propose(TxContext& tx, const Address& gov, std::vector<Action> actions, std::string metadata_hash) {
    const auto& g = governor_of(tx, gov);
    const auto& params = g.params();
    require(!actions.empty(), "proposal has no actions");
    require(actions.size() <= params.max_actions, "too many actions");
    for (const auto& a : actions)
        require(!a.executor || *a.executor == params.executor_class, "action needs a different executor");
    require(tx.height() > 0 && meets_threshold(tx.world, params, tx.sender, tx.height() - 1),
            "proposition power below threshold");
    if (auto live = g.latest_proposal_of(tx.sender)) {
        const auto s = state(tx.world, gov, *live);
        require(s != ProposalState::Pending && s != ProposalState::Active, "proposer already has a live proposal");
    }
    const std::uint64_t id = g.next_proposal_id();
    const BlockHeight created = tx.height();
    const BlockHeight start = created + params.voting_delay;
    const BlockHeight end = start + params.voting_period;
    tx.emit(events::ProposalCreated{gov, id, tx.sender, json(actions), std::move(metadata_hash), created, start, end,
                                    start});
    return id;
}

ProposalState state(const WorldState& world, const Address& gov, std::uint64_t id) {
    const auto& g = world.governor(gov);
    const auto& p = g.proposal(id);
    if (p.canceled) return ProposalState::Canceled;
    if (p.executed) return ProposalState::Executed;
    const BlockHeight h = world.height();
    if (h < p.start) return ProposalState::Pending;
    if (h <= p.end) return ProposalState::Active;
    if (!passed(world, g.params(), p)) return ProposalState::Defeated;
    if (!p.eta) return ProposalState::Succeeded;
    if (h > *p.eta + g.params().grace_period) return ProposalState::Expired;
    return ProposalState::Queued;
}

void cast_vote(TxContext& tx, const Address& gov, std::uint64_t id, bool support) {
    const auto& g = governor_of(tx, gov);
    require(id >= 1 && id <= g.proposal_count(), "unknown proposal");
    require(state(tx.world, gov, id) == ProposalState::Active, "voting closed");
    const auto& p = g.proposal(id);
    require(!p.receipts.contains(tx.sender), "already voted");
    const Units weight = power_at(tx.world, g.params(), tx.sender, PowerKind::Voting, p.snapshot);
    tx.emit(events::VoteCast{gov, id, tx.sender, support, weight});
}

void queue(TxContext& tx, const Address& gov, std::uint64_t id) {
    const auto& g = governor_of(tx, gov);
    require(id >= 1 && id <= g.proposal_count(), "unknown proposal");
    require(state(tx.world, gov, id) == ProposalState::Succeeded, "proposal not succeeded");
    tx.emit(events::ProposalQueued{gov, id, tx.height() + g.params().timelock_delay});
}

void execute(TxContext& tx, const Address& gov, std::uint64_t id) {
    const auto& g = governor_of(tx, gov);
    require(id >= 1 && id <= g.proposal_count(), "unknown proposal");
    const auto s = state(tx.world, gov, id);
    require(s != ProposalState::Expired, "proposal expired");
    require(s == ProposalState::Queued, "proposal not queued");
    const auto& p = g.proposal(id);
    require(tx.height() >= *p.eta, "timelock");
    if (g.params().threshold_maintenance)
        require(!below_threshold_now(tx, g, p.proposer), "proposer below threshold");
    const std::vector<Action> actions = p.actions;
    tx.emit(events::ProposalExecuted{gov, id, false});
    run_actions(tx, gov, actions);
}

void cancel(TxContext& tx, const Address& gov, std::uint64_t id, const std::set<Address>& signatures) {
    const auto& g = governor_of(tx, gov);
    require(id >= 1 && id <= g.proposal_count(), "unknown proposal");
    require(!is_terminal(state(tx.world, gov, id)), "proposal is final");
    const auto& guardian = g.params().guardian;
    std::size_t valid = 0;
    for (const auto& s : signatures) valid += guardian.signers.contains(s) ? 1 : 0;
    std::string path;
    if (guardian.threshold > 0 && valid >= guardian.threshold)
        path = "guardian";
    else if (g.params().threshold_maintenance && below_threshold_now(tx, g, g.proposal(id).proposer))
        path = "below_threshold";
    require(!path.empty(), "cancel not authorized");
    tx.emit(events::ProposalCanceled{gov, id, path});
}

void emergency_commit(TxContext& tx, const Address& gov, std::uint64_t id) {
    const auto& g = governor_of(tx, gov);
    require(id >= 1 && id <= g.proposal_count(), "unknown proposal");
    const auto& params = g.params();
    require(params.emergency_commit_bps > 0, "emergency commit disabled");
    require(state(tx.world, gov, id) == ProposalState::Active, "proposal not active");
    const auto& p = g.proposal(id);
    const Units needed = apply_bps(supply_at(tx.world, params, p.snapshot), params.emergency_commit_bps);
    require(p.for_votes >= needed && p.for_votes > p.against_votes, "emergency commit needs a supermajority");
    const std::vector<Action> actions = p.actions;
    tx.emit(events::ProposalExecuted{gov, id, true});
    run_actions(tx, gov, actions);
}

GovernorParams preset_governor(std::string_view name, Units supply, Timestamp block_interval) {
    if (supply <= 0) throw PreconditionError("preset supply must be positive");
    if (block_interval <= 0) throw PreconditionError("block_interval must be positive");
    const BlockHeight day = blocks_per_day(block_interval);
    GovernorParams p;
    p.voting_delay = day;
    p.max_actions = 10;
    p.threshold_strict = true;
    p.threshold_maintenance = true;
    p.grace_period = 14 * day;
    if (name == "compound") {
        p.proposal_threshold = Quantity::absolute(apply_bps(supply, 100));
        p.quorum = Quantity::absolute(apply_bps(supply, 400));
        p.vote_differential = Quantity::absolute(1);
        p.voting_period = 3 * day;
        p.timelock_delay = 2 * day;
        p.guardian = Guardian{{Address{"guardian_1"}}, 1};
    } else if (name == "uniswap") {
        p.proposal_threshold = Quantity::absolute(2'500'000);
        p.quorum = Quantity::absolute(4'000'000);
        p.vote_differential = Quantity::absolute(1);
        p.voting_period = 3 * day;
        p.timelock_delay = 2 * day;
    } else if (name == "aave_short" || name == "aave_long") {
        const bool lng = name == "aave_long";
        p.proposition_kind = PowerKind::Proposition;
        p.proposal_threshold = Quantity::absolute(apply_bps(supply, lng ? 200 : 50));
        p.quorum = Quantity::absolute(apply_bps(supply, lng ? 2000 : 200));
        p.vote_differential = Quantity::absolute(apply_bps(supply, lng ? 1500 : 50));
        p.voting_period = lng ? 64'000 : 19'200;
        p.timelock_delay = (lng ? 7 : 1) * day;
        p.grace_period = 5 * day;
        p.executor_class = lng ? ExecutorClass::Long : ExecutorClass::Short;
        Guardian guardian;
        for (int i = 1; i <= 10; ++i) guardian.signers.insert(Address{"guardian_" + std::to_string(i)});
        guardian.threshold = 6;
        p.guardian = std::move(guardian);
    } else {
        throw PreconditionError("unknown governor preset: " + std::string(name));
    }
    return p;
}

void validate(const GovernorParams& p, Units supply) {
    if (p.voting_period < 1) throw PreconditionError("voting_period must be at least 1");
    if (p.max_actions < 1) throw PreconditionError("max_actions must be positive");
    if (p.guardian.threshold > p.guardian.signers.size())
        throw PreconditionError("guardian threshold exceeds signer count");
    if (p.quorum.resolve(supply) > supply) throw PreconditionError("quorum exceeds total supply");
    for (const Quantity* q : {&p.proposal_threshold, &p.quorum, &p.vote_differential}) {
        if (q->relative && (q->bps < 0 || q->bps > bps_denominator))
            throw PreconditionError("basis points out of range");
        if (!q->relative && q->units < 0) throw PreconditionError("negative quantity");
    }
    if (p.emergency_commit_bps < 0 || p.emergency_commit_bps > bps_denominator)
        throw PreconditionError("emergency_commit_bps out of range");
}

json handle_governor_call(TxContext& tx, const Address& gov, const std::string& op, const json& args) {
    auto id = [&] { return args.at("id").get<std::uint64_t>(); };
    if (op == "propose")
        return propose(tx, gov, args.at("actions").get<std::vector<Action>>(), args.value("metadata_hash", std::string{}));
    if (op == "cast_vote") {
        cast_vote(tx, gov, id(), args.at("support").get<bool>());
        return nullptr;
    }
    if (op == "queue") {
        queue(tx, gov, id());
        return nullptr;
    }
    if (op == "execute") {
        execute(tx, gov, id());
        return nullptr;
    }
    if (op == "cancel") {
        cancel(tx, gov, id(), args.value("signatures", std::set<Address>{}));
        return nullptr;
    }
    if (op == "emergency_commit") {
        emergency_commit(tx, gov, id());
        return nullptr;
    }
    if (op == "state") return to_string(state(tx.world, gov, id()));
    throw Revert("no such function");
}

}  // namespace governor

}  // namespace govsim
