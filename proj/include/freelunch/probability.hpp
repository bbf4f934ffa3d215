#pragma once

#include "freelunch/rational.hpp"

#include <span>
#include <string>
#include <vector>

namespace freelunch {

/// Finite state set with a strictly positive reference measure, a trading
/// grid 0..n and an extended grid n..n_ext for post-maturity prices.
struct FiniteSpace {
    std::vector<std::string> states;
    Vec probability;
    int n = 1;
    int n_ext = 1;

    int num_states() const { return static_cast<int>(states.size()); }
};

/// Empty iff the space is well formed.
std::vector<std::string> validate_space(const FiniteSpace& space);

/// Event on a finite space, indexed by state.
using Event = std::vector<bool>;

/// A sigma-field on {0..n-1} given by its atoms.
///
/// Atoms are stored canonically: each atom sorted ascending, atoms ordered by
/// their smallest state. Two partitions describe the same sigma-field iff they
/// compare equal.
class Partition {
public:
    Partition() = default;
    Partition(int num_states, std::vector<std::vector<int>> atoms);

    static Partition trivial(int num_states);
    static Partition discrete(int num_states);
    /// States sharing a label share an atom.
    static Partition from_labels(const std::vector<int>& labels);

    int num_states() const { return static_cast<int>(atom_of_.size()); }
    int size() const { return static_cast<int>(atoms_.size()); }
    const std::vector<std::vector<int>>& atoms() const { return atoms_; }
    const std::vector<int>& atom(int k) const { return atoms_[static_cast<std::size_t>(k)]; }
    int atom_of(int state) const { return atom_of_[static_cast<std::size_t>(state)]; }

    /// True iff the event is a union of atoms.
    bool measurable(const Event& event) const;
    /// True iff x is constant on every atom.
    bool measurable(const Vec& x) const;
    template <class T>
    bool measurable_values(const std::vector<T>& x) const {
        for (const auto& a : atoms_)
            for (int s : a)
                if (x[static_cast<std::size_t>(s)] != x[static_cast<std::size_t>(a.front())]) return false;
        return true;
    }

    friend bool operator==(const Partition& a, const Partition& b) { return a.atoms_ == b.atoms_; }

private:
    std::vector<std::vector<int>> atoms_;
    std::vector<int> atom_of_;
};

/// Refining sequence of partitions indexed by grid time. Reads beyond the
/// last stored time return the last partition (the extension convention used
/// for post-maturity times).
class Filtration {
public:
    Filtration() = default;
    explicit Filtration(std::vector<Partition> steps);

    static Filtration constant(const Partition& p, int last_time);

    int last_time() const { return static_cast<int>(steps_.size()) - 1; }
    int num_states() const { return steps_.empty() ? 0 : steps_.front().num_states(); }
    const Partition& at(int t) const;
    const std::vector<Partition>& steps() const { return steps_; }

    /// Copy of the filtration on times 0..last, extended or truncated.
    Filtration resized(int last) const;

    friend bool operator==(const Filtration& a, const Filtration& b) { return a.steps_ == b.steps_; }

private:
    std::vector<Partition> steps_;
};

/// Empty iff every step refines its predecessor and all share a state set.
std::vector<std::string> validate_filtration(const Filtration& f);

/// refines(fine, coarse) <=> sigma(coarse) is contained in sigma(fine).
bool refines(const Partition& fine, const Partition& coarse);

/// Filtration-wise refinement over times 0..last.
bool refines(const Filtration& fine, const Filtration& coarse, int last);

/// Coarsest common refinement: the sigma-field generated by the union.
Partition sigma_join(std::span<const Partition> parts);
Partition sigma_join(const Partition& a, const Partition& b);

/// Finest common coarsening: the intersection of the sigma-fields.
Partition sigma_meet(std::span<const Partition> parts);
Partition sigma_meet(const Partition& a, const Partition& b);

/// E_q[x | sigma]. q must be strictly positive.
Vec conditional_expectation(const Vec& x, const Partition& sigma, const Vec& q);

/// True iff {tau <= s} is measurable w.r.t. f at s for every s.
bool is_stopping_time(const Filtration& f, const std::vector<int>& tau);

/// Sigma-field of the tau-past: atoms are A ∩ {tau = s} for atoms A of f at s.
/// Throws PreconditionError when tau is not a stopping time of f.
Partition stopped_sigma_field(const Filtration& f, const std::vector<int>& tau);

/// A stopping-time process: values[t][state] is a grid time, together with
/// the filtration (delay information) it is adapted to.
struct StoppingProcess {
    std::vector<std::vector<int>> values;
    Filtration info;

    int last_time() const { return static_cast<int>(values.size()) - 1; }
    int at(int t, int state) const {
        return values[static_cast<std::size_t>(t)][static_cast<std::size_t>(state)];
    }
    const std::vector<int>& at(int t) const { return values[static_cast<std::size_t>(t)]; }
};

enum class DelayMode { information, execution };

/// Reports violations of the stopping-time property, the bounds of the mode
/// (information: 0 <= v(t) <= t; execution: t <= v(t) <= n_ext) and path-wise
/// monotonicity. Empty iff valid.
std::vector<std::string> validate_stopping_process(const StoppingProcess& sp, DelayMode mode, int n_ext);

/// Every path moves by 0 or 1 per grid step.
bool is_discrete_continuous(const StoppingProcess& sp);

}  // namespace freelunch
