#include "govsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "govsim/behaviors.hpp"

namespace govsim::analytics {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Supply of each token over blocks, folded from mint and burn records.
class SupplyFold {
public:
    explicit SupplyFold(const EventLog& log) {
        const auto heights = event_heights(log);
        for (std::size_t i = 0; i < log.size(); ++i) {
            if (const auto* m = std::get_if<events::Minted>(&log[i])) bump(m->token, heights[i], m->amount);
            if (const auto* b = std::get_if<events::Burned>(&log[i])) bump(b->token, heights[i], -b->amount);
        }
    }

    Units at(const std::string& token, BlockHeight b) const {
        auto it = points_.find(token);
        if (it == points_.end()) return 0;
        const auto& pts = it->second;
        auto pos = std::upper_bound(pts.begin(), pts.end(), b,
                                    [](BlockHeight v, const std::pair<BlockHeight, Units>& p) { return v < p.first; });
        return pos == pts.begin() ? 0 : std::prev(pos)->second;
    }

private:
    void bump(const std::string& token, BlockHeight h, Units delta) {
        auto& pts = points_[token];
        const Units prev = pts.empty() ? 0 : pts.back().second;
        if (!pts.empty() && pts.back().first == h)
            pts.back().second = prev + delta;
        else
            pts.emplace_back(h, prev + delta);
    }

    std::map<std::string, std::vector<std::pair<BlockHeight, Units>>> points_;
};

std::map<Address, std::string> governor_tokens(const EventLog& log) {
    std::map<Address, std::string> out;
    for (const auto& e : log)
        if (const auto* g = std::get_if<events::GovernorCreated>(&e)) out[g->governor] = g->params.value("token", "");
    return out;
}

double for_share_percent(const ProposalRecord& p) {
    return p.cast() == 0 ? 0.0 : 100.0 * static_cast<double>(p.for_votes) / static_cast<double>(p.cast());
}

std::string fixed6(double v) {
    if (v == 0.0 || std::isnan(v)) v = 0.0;  // no "-0.000000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    return s == "-0.000000" ? "0.000000" : s;
}

}  // namespace

BlockHeight ProposalRecord::closed() const {
    if (executed_at) return *executed_at;
    if (canceled_at) return *canceled_at;
    if (queued_at) return *queued_at;
    return end;
}

std::vector<ProposalRecord> fold_proposals(const EventLog& log) {
    std::vector<ProposalRecord> out;
    std::map<std::pair<Address, std::uint64_t>, std::size_t> index;
    const auto heights = event_heights(log);
    auto find = [&](const Address& gov, std::uint64_t id) -> ProposalRecord* {
        auto it = index.find({gov, id});
        return it == index.end() ? nullptr : &out[it->second];
    };
    for (std::size_t i = 0; i < log.size(); ++i) {
        const BlockHeight h = heights[i];
        std::visit(overloaded{
                       [&](const events::ProposalCreated& e) {
                           ProposalRecord r;
                           r.governor = e.governor;
                           r.id = e.id;
                           r.proposer = e.proposer;
                           r.created = e.created;
                           r.start = e.start;
                           r.end = e.end;
                           r.snapshot = e.snapshot;
                           index[{e.governor, e.id}] = out.size();
                           out.push_back(std::move(r));
                       },
                       [&](const events::VoteCast& e) {
                           if (auto* r = find(e.governor, e.id)) {
                               (e.support ? r->for_votes : r->against_votes) += e.weight;
                               r->votes.push_back({e.voter, e.support, e.weight, h});
                           }
                       },
                       [&](const events::ProposalQueued& e) {
                           if (auto* r = find(e.governor, e.id)) {
                               r->queued_at = h;
                               r->eta = e.eta;
                           }
                       },
                       [&](const events::ProposalExecuted& e) {
                           if (auto* r = find(e.governor, e.id)) {
                               r->executed_at = h;
                               r->emergency = e.emergency;
                           }
                       },
                       [&](const events::ProposalCanceled& e) {
                           if (auto* r = find(e.governor, e.id)) r->canceled_at = h;
                       },
                       [](const auto&) {},
                   },
                   log[i]);
    }
    const BlockHeight last = heights.empty() ? 0 : heights.back();
    for (auto& r : out) r.log_end = last;
    return out;
}

Distribution describe(std::vector<double> values) {
    Distribution d;
    if (values.empty()) return d;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    d.min = values.front();
    d.max = values.back();
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.std = std::sqrt(ss / n);
    const std::size_t mid = values.size() / 2;
    d.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return d;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw PreconditionError("pearson needs paired samples");
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<HoldingInterval> holding_duration(const EventLog& log, const std::string& token, const Address& account) {
    std::vector<HoldingInterval> out;
    const auto heights = event_heights(log);
    Units balance = 0;
    auto step = [&](Units delta, BlockHeight h) {
        const Units before = balance;
        balance += delta;
        if (before <= 0 && balance > 0) out.push_back(HoldingInterval{h, std::nullopt, {}, {}, {}});
        if (before > 0 && balance <= 0) out.back().disposed = h;
    };
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& e = log[i];
        if (const auto* m = std::get_if<events::Minted>(&e); m && m->token == token && m->to == account)
            step(m->amount, heights[i]);
        if (const auto* b = std::get_if<events::Burned>(&e); b && b->token == token && b->from == account)
            step(-b->amount, heights[i]);
        if (const auto* t = std::get_if<events::Transferred>(&e); t && t->token == token && t->from != t->to) {
            if (t->from == account) step(-t->amount, heights[i]);
            if (t->to == account) step(t->amount, heights[i]);
        }
    }
    if (out.empty()) return out;

    const auto proposals = fold_proposals(log);
    const BlockHeight last = heights.back();
    for (auto& iv : out) {
        const BlockHeight lo = iv.acquired;
        const BlockHeight hi = iv.disposed.value_or(last);
        for (const auto& p : proposals) {
            if (p.proposer == account && p.created >= lo && p.created <= hi) iv.proposed.push_back(p.id);
            for (const auto& v : p.votes)
                if (v.voter == account && v.block >= lo && v.block <= hi) {
                    iv.voted.push_back(p.id);
                    break;
                }
            if (p.created <= hi && p.closed() >= lo) iv.overlapped.push_back(p.id);
        }
    }
    return out;
}

double participation_rate(const EventLog& log, const Address& governor, std::uint64_t id, Units circulating_supply) {
    if (circulating_supply <= 0) throw PreconditionError("circulating supply must be positive");
    for (const auto& p : fold_proposals(log)) {
        if (p.governor != governor || p.id != id) continue;
        if (!p.decided()) throw PreconditionError("proposal " + std::to_string(id) + " is not decided");
        return static_cast<double>(p.cast()) / static_cast<double>(circulating_supply);
    }
    throw PreconditionError("unknown proposal " + std::to_string(id));
}

int h_index(const std::vector<double>& values) {
    if (values.empty()) return 0;
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto n = static_cast<long long>(sorted.size());
    int best = 0;
    for (int h = 1; h <= 100; ++h) {
        // number of values >= h
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), static_cast<double>(h), std::greater<>()) -
                           sorted.begin();
        if (count * 100 >= static_cast<long long>(h) * n) best = h;
    }
    return best;
}

double supermajority_rate(const EventLog& log, double threshold) {
    std::size_t decided = 0, qualifying = 0;
    for (const auto& p : fold_proposals(log)) {
        if (!p.decided()) continue;
        ++decided;
        if (p.cast() > 0 &&
            static_cast<long double>(p.for_votes) >= static_cast<long double>(threshold) * p.cast() - 1e-9L)
            ++qualifying;
    }
    return decided == 0 ? 0.0 : static_cast<double>(qualifying) / static_cast<double>(decided);
}

GasSeries gas_from_log(const EventLog& log) {
    if (log.empty()) return GasSeries(ConstantGas{0});
    const auto* g = std::get_if<events::Genesis>(&log.front());
    if (g == nullptr) throw PreconditionError("event log must begin with genesis");
    return GasSeries(parse_gas_descriptor(g->gas));
}

std::vector<std::pair<double, double>> gas_turnout_pairs(const EventLog& log) {
    std::vector<std::pair<double, double>> out;
    if (log.empty()) return out;
    const GasSeries gas = gas_from_log(log);
    for (const auto& p : fold_proposals(log)) {
        if (!p.decided()) continue;
        long double sum = 0;
        for (BlockHeight b = p.start; b <= p.end; ++b) sum += gas.price_at(b);
        out.emplace_back(static_cast<double>(sum / static_cast<long double>(p.end - p.start + 1)),
                         static_cast<double>(p.votes.size()));
    }
    return out;
}

MetricsSummary summarize(const EventLog& log, std::optional<Units> circulating_supply) {
    MetricsSummary m;
    const auto proposals = fold_proposals(log);
    const SupplyFold supply(log);
    const auto tokens = governor_tokens(log);
    m.proposals_count = proposals.size();

    std::vector<double> participation, shares;
    for (const auto& p : proposals) {
        const auto tok = tokens.find(p.governor);
        const std::string token = tok == tokens.end() ? std::string{} : tok->second;
        if (!token.empty()) m.holding_durations.push_back({p.proposer, p.id, holding_duration(log, token, p.proposer)});
        if (!p.decided()) continue;
        ++m.decided_count;
        shares.push_back(for_share_percent(p));
        const Units denom = circulating_supply ? *circulating_supply : supply.at(token, p.snapshot);
        if (denom > 0) participation.push_back(static_cast<double>(p.cast()) / static_cast<double>(denom));
    }
    m.participation = describe(participation);
    m.h_index = h_index(shares);
    m.supermajority_rate = supermajority_rate(log);
    std::vector<double> gx, vy;
    for (const auto& [g, v] : gas_turnout_pairs(log)) {
        gx.push_back(g);
        vy.push_back(v);
    }
    m.turnout_gas_corr = pearson(gx, vy);
    return m;
}

std::string csv_header() {
    return "proposals,h_index,participation_mean,participation_std,participation_min,participation_median,"
           "participation_max,supermajority_rate,turnout_gas_corr";
}

std::string csv_row(const MetricsSummary& m) {
    return std::to_string(m.proposals_count) + "," + std::to_string(m.h_index) + "," + fixed6(m.participation.mean) +
           "," + fixed6(m.participation.std) + "," + fixed6(m.participation.min) + "," +
           fixed6(m.participation.median) + "," + fixed6(m.participation.max) + "," + fixed6(m.supermajority_rate) +
           "," + fixed6(m.turnout_gas_corr);
}

// ---- turnout model ----

TurnoutRun simulate_turnout(const TurnoutSetup& setup) {
    if (setup.voting_period < 1) throw PreconditionError("voting_period must be at least 1");
    for (const auto& a : setup.agents) {
        if (a.stake < 0) throw PreconditionError("agent stake must be non-negative");
        if (a.alignment < 0 || a.alignment > 1) throw PreconditionError("agent alignment must be in [0, 1]");
    }
    constexpr Units native_float = 1'000'000'000'000'000;
    const Address harness{"harness"}, proposer{"proposer"}, gov{"governor"}, registry{"registry"};
    const std::string token = "GOV";

    WorldState world(setup.chain, setup.gas);
    world.create_account(harness, native_float);
    world.create_account(proposer, native_float);
    for (const auto& a : setup.agents) world.create_account(a.id, native_float);

    GovernorParams params;
    params.source.token = token;
    params.proposal_threshold = Quantity::absolute(0);
    params.voting_delay = setup.voting_delay;
    params.voting_period = setup.voting_period;
    params.quorum = Quantity::absolute(0);
    params.vote_differential = Quantity::absolute(1);

    auto setup_tx = world.run(harness, [&](TxContext& tx) {
        ledger::create_token(tx, token, {harness});
        ledger::mint(tx, token, proposer, 1);
        for (const auto& a : setup.agents) ledger::mint(tx, token, a.id, a.stake);
        governor::create_governor(tx, gov, params);
        const auto impl = contracts::register_implementation(tx, behaviors::asset_registry_v1());
        contracts::deploy_proxy(tx, registry, gov, impl, {{"owner", json(gov)}});
    });
    if (!committed(setup_tx)) throw PreconditionError("turnout setup failed: " + revert_reason(setup_tx));

    std::mt19937_64 rng(setup.seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    BlockHeight next = 1;
    for (std::size_t k = 0; k < setup.proposals; ++k) {
        world.advance_to(next);
        std::uint64_t id = 0;
        const Action action{registry, "add_asset", {{"symbol", "ASSET-" + std::to_string(k + 1)}}, "list asset", {}};
        auto out = world.run(proposer, [&](TxContext& tx) { id = governor::propose(tx, gov, {action}, ""); });
        if (!committed(out)) throw PreconditionError("turnout proposal failed: " + revert_reason(out));
        const auto& p = world.governor(gov).proposal(id);
        const BlockHeight start = p.start, end = p.end;

        std::map<BlockHeight, std::vector<std::pair<std::size_t, bool>>> plan;
        for (std::size_t i = 0; i < setup.agents.size(); ++i) {
            const BlockHeight at = start + rng() % (setup.voting_period + 1);
            const bool support = unit() < setup.agents[i].alignment;
            plan[at].emplace_back(i, support);
        }
        for (const auto& [block, voters] : plan) {
            world.advance_to(block);
            const double cost =
                static_cast<double>(world.gas_price_at(block)) * static_cast<double>(world.chain().gas_per_call);
            for (const auto& [i, support] : voters) {
                const auto& agent = setup.agents[i];
                if (agent.value_per_vote < cost) continue;
                world.execute_atomic(TxScript{agent.id, {Call{gov, "cast_vote", {{"id", id}, {"support", support}}}}, {}});
            }
        }
        next = end + 1 + setup.gap;
    }
    world.advance_to(std::max(next, world.height() + 1));

    TurnoutRun run{{}, summarize(world.log()), world};
    const auto pairs = gas_turnout_pairs(world.log());
    std::size_t j = 0;
    for (const auto& r : fold_proposals(world.log())) {
        ProposalTurnout t{r.id, r.start, r.end, 0.0, r.votes.size(), r.for_votes, r.against_votes};
        if (r.decided() && j < pairs.size()) t.mean_gas = pairs[j++].first;
        run.proposals.push_back(t);
    }
    return run;
}

}  // namespace govsim::analytics
