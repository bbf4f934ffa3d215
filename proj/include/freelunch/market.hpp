#pragma once

#include "freelunch/probability.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace freelunch {

/// Finite set of asset indices (at most 64 assets), stored as a bit mask.
class IndexSet {
public:
    constexpr IndexSet() = default;
    constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}
    static IndexSet of(std::initializer_list<int> assets);
    static IndexSet singleton(int asset) { return IndexSet(std::uint64_t{1} << asset); }

    std::uint64_t bits() const { return bits_; }
    bool contains(int asset) const { return (bits_ >> asset) & 1U; }
    bool empty() const { return bits_ == 0; }
    int size() const;
    std::vector<int> members() const;

    bool subset_of(IndexSet other) const { return (bits_ & ~other.bits_) == 0; }
    bool proper_subset_of(IndexSet other) const { return subset_of(other) && bits_ != other.bits_; }
    IndexSet operator|(IndexSet o) const { return IndexSet(bits_ | o.bits_); }

    friend bool operator==(IndexSet, IndexSet) = default;
    friend auto operator<=>(IndexSet a, IndexSet b) { return a.bits_ <=> b.bits_; }

private:
    std::uint64_t bits_ = 0;
};

/// Price table of one asset: prices[t][state] for t = 0..n_ext.
using PriceTable = std::vector<Vec>;

/// Finite discrete-time market with restricted information.
///
/// trading[k] is the trading filtration of index_system[k]. It covers at
/// least 0..n; when it stops before a requested time, the last stored
/// partition is reused (the default post-maturity extension).
struct Market {
    FiniteSpace space;
    std::vector<std::string> asset_ids;
    std::vector<PriceTable> prices;
    std::vector<IndexSet> index_system;
    std::vector<Filtration> trading;
    Filtration grand;

    int num_assets() const { return static_cast<int>(asset_ids.size()); }
    int num_states() const { return space.num_states(); }
    int n() const { return space.n; }
    int n_ext() const { return space.n_ext; }

    const Vec& price(int asset, int t) const {
        return prices[static_cast<std::size_t>(asset)][static_cast<std::size_t>(t)];
    }
    /// Position of A in the index system, or nullopt.
    std::optional<int> find_index_set(IndexSet a) const;
    const Partition& trading_at(int k, int t) const { return trading[static_cast<std::size_t>(k)].at(t); }
    std::optional<int> find_asset(const std::string& id) const;
    std::string describe(IndexSet a) const;
};

/// Empty iff all market invariants hold: valid space, adapted prices,
/// refining filtrations, refining property and monotonicity of the index
/// system, trading filtrations inside the grand filtration.
std::vector<std::string> validate_market(const Market& m);

/// A simple strategy on one member of the index system. holdings[i][j] is the
/// position in the j-th asset of the index set (ascending asset index) over
/// the interval (dates[i], dates[i+1]].
struct Strategy {
    IndexSet index_set;
    std::vector<int> dates;
    std::vector<std::vector<Vec>> holdings;
};

/// Throws InvalidInput when the strategy is not admissible in m up to the
/// given horizon (dates outside the grid, holdings not measurable, ...).
void check_strategy(const Market& m, const Strategy& s, int horizon);

/// Wealth table W[t][state] for t = 0..horizon (default n).
std::vector<Vec> wealth_process(const Market& m, const Strategy& s, std::optional<int> horizon = std::nullopt);

/// One spanning vector of the attainable terminal wealths:
/// 1_F * (S^a_{t+1} - S^a_t) for an atom F of the trading partition of A at t.
struct GainGenerator {
    int index_set_pos = 0;
    int asset = 0;
    int time = 0;
    int atom = 0;
    Vec values;
};

/// All nonzero generators up to the horizon (default n). Their linear span is
/// the set of terminal wealths of simple strategies.
std::vector<GainGenerator> gain_generators(const Market& m, std::optional<int> horizon = std::nullopt);

/// Market with its trading filtrations replaced (same order as index_system).
Market with_trading(const Market& m, std::vector<Filtration> trading);

}  // namespace freelunch
