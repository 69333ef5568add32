#include "govsim/gas.hpp"

#include <algorithm>
#include <random>

namespace govsim {

namespace {

void validate(const GasGenerator& gen) {
    if (const auto* c = std::get_if<ConstantGas>(&gen)) {
        if (c->price < 0) throw PreconditionError("gas price must be non-negative");
    } else if (const auto* p = std::get_if<PiecewiseGas>(&gen)) {
        if (p->segments.empty() || p->segments.front().first != 0)
            throw PreconditionError("piecewise gas series must start at block 0");
        for (std::size_t i = 0; i < p->segments.size(); ++i) {
            if (p->segments[i].second < 0) throw PreconditionError("gas price must be non-negative");
            if (i > 0 && p->segments[i].first <= p->segments[i - 1].first)
                throw PreconditionError("piecewise gas segments must be strictly increasing");
        }
    } else {
        const auto& w = std::get<WalkGas>(gen);
        if (w.min < 0 || w.max < w.min || w.start < w.min || w.start > w.max || w.step < 0)
            throw PreconditionError("walk gas series needs 0 <= min <= start <= max and step >= 0");
    }
}

}  // namespace

json gas_descriptor(const GasGenerator& gen) {
    if (const auto* c = std::get_if<ConstantGas>(&gen)) return {{"kind", "constant"}, {"price", c->price}};
    if (const auto* p = std::get_if<PiecewiseGas>(&gen)) {
        json segs = json::array();
        for (const auto& [from, price] : p->segments) segs.push_back({{"from", from}, {"price", price}});
        return {{"kind", "piecewise"}, {"segments", segs}};
    }
    const auto& w = std::get<WalkGas>(gen);
    return {{"kind", "walk"}, {"start", w.start}, {"step", w.step}, {"min", w.min}, {"max", w.max}, {"seed", w.seed}};
}

GasGenerator parse_gas_descriptor(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    GasGenerator gen;
    if (kind == "constant") {
        gen = ConstantGas{j.at("price").get<Units>()};
    } else if (kind == "piecewise") {
        PiecewiseGas p;
        for (const auto& s : j.at("segments")) p.segments.emplace_back(s.at("from").get<BlockHeight>(), s.at("price").get<Units>());
        gen = std::move(p);
    } else if (kind == "walk") {
        gen = WalkGas{j.at("start").get<Units>(), j.at("step").get<Units>(), j.at("min").get<Units>(),
                      j.at("max").get<Units>(), j.at("seed").get<std::uint64_t>()};
    } else {
        throw PreconditionError("unknown gas generator kind: " + kind);
    }
    validate(gen);
    return gen;
}

GasSeries::GasSeries(GasGenerator generator) : generator_(std::move(generator)) { validate(generator_); }

Units GasSeries::price_at(BlockHeight b) const {
    if (const auto* c = std::get_if<ConstantGas>(&generator_)) return c->price;
    if (const auto* p = std::get_if<PiecewiseGas>(&generator_)) {
        auto it = std::upper_bound(p->segments.begin(), p->segments.end(), b,
                                   [](BlockHeight v, const auto& seg) { return v < seg.first; });
        return std::prev(it)->second;
    }
    const auto& w = std::get<WalkGas>(generator_);
    if (walk_cache_.empty()) walk_cache_.push_back(w.start);
    if (b >= walk_cache_.size()) {
        // Draw from a fresh engine replayed to the cached length so the series
        // never depends on query order.
        std::mt19937_64 rng(w.seed);
        rng.discard(walk_cache_.size() - 1);
        const auto span = static_cast<std::uint64_t>(2 * w.step + 1);
        while (walk_cache_.size() <= b) {
            const Units delta = static_cast<Units>(rng() % span) - w.step;
            walk_cache_.push_back(std::clamp(walk_cache_.back() + delta, w.min, w.max));
        }
    }
    return walk_cache_[b];
}

}  // namespace govsim
