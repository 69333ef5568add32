#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "govsim/types.hpp"

namespace govsim {

struct ConstantGas {
    Units price = 0;
    friend bool operator==(const ConstantGas&, const ConstantGas&) = default;
};

/// Step function. Each segment holds its price from its first block until
/// the next segment begins; the first segment must start at block 0.
struct PiecewiseGas {
    std::vector<std::pair<BlockHeight, Units>> segments;
    friend bool operator==(const PiecewiseGas&, const PiecewiseGas&) = default;
};

/// Bounded random walk: each block moves by a uniform step in [-step, step],
/// clamped to [min, max]. Fully determined by the seed.
struct WalkGas {
    Units start = 0;
    Units step = 0;
    Units min = 0;
    Units max = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const WalkGas&, const WalkGas&) = default;
};

using GasGenerator = std::variant<ConstantGas, PiecewiseGas, WalkGas>;

json gas_descriptor(const GasGenerator& gen);
GasGenerator parse_gas_descriptor(const json& j);

class GasSeries {
public:
    GasSeries() : GasSeries(ConstantGas{}) {}
    explicit GasSeries(GasGenerator generator);

    /// Constant and piecewise series can be evaluated at any block; a walk
    /// only up to the block the chain has reached.
    bool closed_form() const { return !std::holds_alternative<WalkGas>(generator_); }

    Units price_at(BlockHeight b) const;

    const GasGenerator& generator() const { return generator_; }

    friend bool operator==(const GasSeries& a, const GasSeries& b) { return a.generator_ == b.generator_; }

private:
    GasGenerator generator_;
    mutable std::vector<Units> walk_cache_;
};

}  // namespace govsim
