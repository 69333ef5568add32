#include <doctest.h>

#include <cmath>

#include "govsim/analytics.hpp"
#include "support/oracles.hpp"

using namespace govsim;
using namespace govsim::analytics;

namespace {

const Action noop{"GOV", "balance_of", {{"account", "prop"}}, "read a balance", {}};

/// Sequential proposals on a free-gas chain. The proposer holds one unit.
struct LogBuilder {
    WorldState w = oracle::world_with({"harness", "prop", "whale", "yes", "no", "no2", "small", "trader"});

    explicit LogBuilder(const std::map<Address, Units>& balances, BlockHeight delay = 1, BlockHeight period = 2) {
        GovernorParams p;
        p.source.token = "GOV";
        p.proposal_threshold = Quantity::absolute(0);
        p.voting_delay = delay;
        p.voting_period = period;
        p.quorum = Quantity::absolute(0);
        oracle::must(w, "harness", [&](TxContext& tx) {
            ledger::create_token(tx, "GOV", {"harness"});
            ledger::mint(tx, "GOV", "prop", 1);
            for (const auto& [a, b] : balances) ledger::mint(tx, "GOV", a, b);
            governor::create_governor(tx, "G", p);
        });
        w.advance_blocks(1);
    }

    /// Proposes, casts the given votes at the start block and closes voting.
    std::uint64_t decided(const std::vector<std::pair<Address, bool>>& votes, const Address& proposer = "prop") {
        std::uint64_t id = 0;
        oracle::must(w, proposer, [&](TxContext& tx) { id = governor::propose(tx, "G", {noop}, ""); });
        const auto& p = w.governor("G").proposal(id);
        if (p.start > w.height()) w.advance_to(p.start);
        for (const auto& [who, support] : votes)
            oracle::must(w, who, [&](TxContext& tx) { governor::cast_vote(tx, "G", id, support); });
        w.advance_to(w.governor("G").proposal(id).end + 1);
        return id;
    }
};

}  // namespace

TEST_CASE("h_index against the exhaustive scan") {
    CHECK(h_index({}) == 0);
    CHECK(h_index({100, 100}) == 100);
    CHECK(h_index({0, 0, 0}) == 0);
    std::vector<double> aave(86, 90.0);
    aave.insert(aave.end(), 14, 10.0);
    CHECK(h_index(aave) == 86);

    oracle::Rng rng(2024);
    for (int i = 0; i < 1'000; ++i) {
        std::vector<double> v(1 + rng.below(200));
        for (auto& x : v) x = rng.coin(0.3) ? static_cast<double>(rng.range(0, 100)) : rng.unit() * 100.0;
        CHECK(h_index(v) == oracle::h_index_scan(v));
    }
}

TEST_CASE("pearson against the two-pass formula") {
    CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0));
    CHECK(pearson({1, 1, 1}, {1, 2, 3}) == 0.0);
    CHECK(pearson({1}, {1}) == 0.0);
    oracle::Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const auto n = 2 + rng.below(60);
        std::vector<double> x(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = rng.unit() * 100;
            y[k] = rng.coin() ? -x[k] + rng.unit() * 30 : rng.unit() * 100;
        }
        CHECK(std::abs(pearson(x, y) - oracle::pearson_two_pass(x, y)) < 1e-9);
    }
}

TEST_CASE("describe") {
    const auto d = describe({4, 1, 3, 2});
    CHECK(d.mean == 2.5);
    CHECK(d.min == 1);
    CHECK(d.max == 4);
    CHECK(d.median == 2.5);
    CHECK(d.std == doctest::Approx(std::sqrt(1.25)));
    CHECK(describe({}).mean == 0);
}

TEST_CASE("supermajority rate over a synthetic 109-proposal log") {
    // yes/(yes+no) = 990/1000 qualifies at 0.99; 990/1001 does not.
    LogBuilder b({{"yes", 990}, {"no", 10}, {"no2", 11}});
    for (int i = 0; i < 109; ++i) b.decided({{"yes", true}, {i < 83 ? "no" : "no2", false}});
    const auto& log = b.w.log();
    CHECK(fold_proposals(log).size() == 109);
    const double rate = supermajority_rate(log);
    CHECK(rate == 83.0 / 109.0);
    CHECK(std::abs(rate * 100.0 - 76.1) <= 0.05);
    CHECK(supermajority_rate(log, 1.01) == 0.0);
    CHECK(supermajority_rate(log, 0.5) == 1.0);

    const auto m = summarize(log);
    CHECK(m.proposals_count == 109);
    CHECK(m.decided_count == 109);
    CHECK(m.supermajority_rate == rate);
    CHECK(csv_row(summarize(log)) == csv_row(m));
}

TEST_CASE("participation") {
    LogBuilder b({{"whale", 100'000}, {"small", 12'100}, {"harness", 887'899}});
    const auto id = b.decided({{"whale", true}, {"small", false}});
    CHECK(participation_rate(b.w.log(), "G", id, 1'000'000) == 0.1121);
    const auto empty = b.decided({});
    CHECK(participation_rate(b.w.log(), "G", empty, 1'000'000) == 0.0);
    const auto all = b.decided({{"whale", true}, {"small", true}, {"harness", true}, {"prop", true}});
    CHECK(participation_rate(b.w.log(), "G", all, 1'000'000) == 1.0);
    CHECK_THROWS_AS(participation_rate(b.w.log(), "G", 99, 1'000'000), PreconditionError);

    std::uint64_t open = 0;
    oracle::must(b.w, "prop", [&](TxContext& tx) { open = governor::propose(tx, "G", {noop}, ""); });
    CHECK_THROWS_AS(participation_rate(b.w.log(), "G", open, 1'000'000), PreconditionError);

    // Without an explicit supply the summary divides by supply at each snapshot.
    const auto m = summarize(b.w.log());
    CHECK(m.participation.max == 1.0);
    CHECK(m.participation.min == 0.0);
}

TEST_CASE("holding intervals") {
    SUBCASE("held for one proposal's life") {
        LogBuilder b({{"harness", 1'000}}, 0, 3);
        const BlockHeight acquired = b.w.height();
        oracle::must(b.w, "harness", [](TxContext& tx) { ledger::transfer(tx, "GOV", "trader", 500); });
        b.w.advance_blocks(1);
        std::uint64_t id = 0;
        oracle::must(b.w, "trader", [&](TxContext& tx) {
            id = governor::propose(tx, "G", {noop}, "");
            governor::cast_vote(tx, "G", id, true);
        });
        CHECK(b.w.governor("G").proposal(id).start == acquired + 1);
        b.w.advance_to(b.w.governor("G").proposal(id).end + 1);
        oracle::must(b.w, "trader", [&](TxContext& tx) { governor::queue(tx, "G", id); });
        oracle::must(b.w, "trader", [&](TxContext& tx) { governor::execute(tx, "G", id); });
        const BlockHeight executed = b.w.height();
        b.w.advance_blocks(1);
        oracle::must(b.w, "trader", [](TxContext& tx) { ledger::transfer(tx, "GOV", "harness", 500); });

        const auto iv = holding_duration(b.w.log(), "GOV", "trader");
        REQUIRE(iv.size() == 1);
        CHECK(iv[0].acquired == acquired);
        CHECK(*iv[0].disposed == executed + 1);
        CHECK(iv[0].proposed == std::vector<std::uint64_t>{id});
        CHECK(iv[0].single_proposal_holder());
    }
    SUBCASE("never held") { CHECK(holding_duration(LogBuilder({}).w.log(), "GOV", "trader").empty()); }
    SUBCASE("held across three proposals, voted on one") {
        LogBuilder b({{"harness", 1'000}});
        oracle::must(b.w, "harness", [](TxContext& tx) { ledger::transfer(tx, "GOV", "trader", 5); });
        b.decided({});
        b.decided({{"trader", true}});
        b.decided({});
        const auto iv = holding_duration(b.w.log(), "GOV", "trader");
        REQUIRE(iv.size() == 1);
        CHECK_FALSE(iv[0].disposed.has_value());
        CHECK(iv[0].voted.size() == 1);
        CHECK(iv[0].overlapped.size() == 3);
        CHECK_FALSE(iv[0].single_proposal_holder());
    }
}

namespace {

TurnoutSetup turnout_setup(GasGenerator gas, std::uint64_t seed) {
    TurnoutSetup s;
    s.chain = ChainParams{0, 12, 1};
    s.gas = std::move(gas);
    for (int i = 0; i < 20; ++i)
        s.agents.push_back({Address{"agent_" + std::to_string(i + 1)}, 1'000, 5.0 + 5.0 * i, 0.8});
    s.proposals = 40;
    s.voting_delay = 1;
    s.voting_period = 20;
    s.gap = 1;
    s.seed = seed;
    return s;
}

/// Alternates price per proposal window; each window is 23 blocks long.
PiecewiseGas alternating(Units low, Units high) {
    PiecewiseGas g;
    for (int k = 0; k < 40; ++k) g.segments.push_back({static_cast<BlockHeight>(k * 23), k % 2 == 0 ? low : high});
    return g;
}

}  // namespace

TEST_CASE("turnout: cheap gas lets everyone vote") {
    const auto run = simulate_turnout(turnout_setup(ConstantGas{1}, 3));
    for (const auto& p : run.proposals) CHECK(p.votes == 20);
    auto unanimous = turnout_setup(ConstantGas{1}, 3);
    for (auto& a : unanimous.agents) a.alignment = 1.0;
    CHECK(simulate_turnout(unanimous).summary.h_index == 100);
}

TEST_CASE("turnout: alternating gas gives threshold counts and a negative correlation") {
    const auto run = simulate_turnout(turnout_setup(alternating(10, 60), 1));
    REQUIRE(run.proposals.size() == 40);
    // value 5 + 5i covers price p exactly when i >= (p - 5) / 5.
    auto crossing = [](double price) {
        int n = 0;
        for (int i = 0; i < 20; ++i) n += 5.0 + 5.0 * i >= price ? 1 : 0;
        return n;
    };
    for (std::size_t k = 0; k < run.proposals.size(); ++k)
        CHECK(run.proposals[k].votes == static_cast<std::size_t>(crossing(k % 2 == 0 ? 10 : 60)));
    CHECK(run.summary.turnout_gas_corr < -0.5);
    CHECK(run.summary.decided_count == 40);
}

TEST_CASE("property: raising gas pointwise never raises any proposal's turnout") {
    oracle::Rng rng(77);
    for (int round = 0; round < 15; ++round) {
        PiecewiseGas lo, hi;
        for (BlockHeight b = 0; b < 40 * 23; b += 1 + rng.below(30)) {
            const Units p = rng.range(1, 100);
            lo.segments.push_back({b, p});
            hi.segments.push_back({b, p + rng.range(0, 50)});
        }
        const auto seed = rng.below(1'000);
        const auto a = simulate_turnout(turnout_setup(lo, seed));
        const auto b = simulate_turnout(turnout_setup(hi, seed));
        REQUIRE(a.proposals.size() == b.proposals.size());
        for (std::size_t k = 0; k < a.proposals.size(); ++k) CHECK(b.proposals[k].votes <= a.proposals[k].votes);
    }
}

TEST_CASE("metrics are a pure function of the log") {
    const auto run = simulate_turnout(turnout_setup(alternating(10, 60), 4));
    const auto replayed = WorldState::replay(run.world.log(), run.world.code());
    CHECK(csv_row(summarize(replayed.log())) == csv_row(summarize(run.world.log())));
    CHECK(csv_header().find("h_index") != std::string::npos);
    const auto empty = summarize({});
    CHECK(empty.proposals_count == 0);
    CHECK(empty.h_index == 0);
}
