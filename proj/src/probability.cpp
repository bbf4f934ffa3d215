#include "freelunch/probability.hpp"

#include "freelunch/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace freelunch {

std::vector<std::string> validate_space(const FiniteSpace& space) {
    std::vector<std::string> issues;
    if (space.states.empty()) issues.emplace_back("state set is empty");
    if (space.probability.size() != space.states.size())
        issues.emplace_back("probability vector length does not match state count");
    Rational total = 0;
    for (std::size_t i = 0; i < space.probability.size(); ++i) {
        if (space.probability[i] <= 0)
            issues.push_back("probability of state '" + (i < space.states.size() ? space.states[i] : std::to_string(i)) +
                             "' is not strictly positive");
        total += space.probability[i];
    }
    if (total != 1) issues.push_back("measure not normalized (total mass " + format_rational(total) + ")");
    if (space.n < 1) issues.emplace_back("trading horizon n must be at least 1");
    if (space.n_ext < space.n) issues.emplace_back("extended horizon n_ext is below n");
    auto names = space.states;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) issues.emplace_back("duplicate state name");
    return issues;
}

// ---------------------------------------------------------------- Partition

Partition::Partition(int num_states, std::vector<std::vector<int>> atoms) {
    if (num_states < 0) throw InvalidInput("negative state count");
    atom_of_.assign(static_cast<std::size_t>(num_states), -1);
    for (auto& a : atoms) {
        if (a.empty()) throw InvalidInput("partition has an empty atom");
        std::sort(a.begin(), a.end());
        for (int s : a) {
            if (s < 0 || s >= num_states) throw InvalidInput("partition atom references unknown state");
            if (atom_of_[static_cast<std::size_t>(s)] != -1) throw InvalidInput("partition atoms overlap");
            atom_of_[static_cast<std::size_t>(s)] = 0;
        }
    }
    if (std::find(atom_of_.begin(), atom_of_.end(), -1) != atom_of_.end())
        throw InvalidInput("partition atoms do not cover the state set");
    std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    atoms_ = std::move(atoms);
    for (std::size_t k = 0; k < atoms_.size(); ++k)
        for (int s : atoms_[k]) atom_of_[static_cast<std::size_t>(s)] = static_cast<int>(k);
}

Partition Partition::trivial(int num_states) {
    std::vector<int> all(static_cast<std::size_t>(num_states));
    std::iota(all.begin(), all.end(), 0);
    if (num_states == 0) return Partition(0, {});
    return Partition(num_states, {all});
}

Partition Partition::discrete(int num_states) {
    std::vector<std::vector<int>> atoms;
    for (int s = 0; s < num_states; ++s) atoms.push_back({s});
    return Partition(num_states, std::move(atoms));
}

Partition Partition::from_labels(const std::vector<int>& labels) {
    std::map<int, std::vector<int>> groups;
    for (std::size_t s = 0; s < labels.size(); ++s) groups[labels[s]].push_back(static_cast<int>(s));
    std::vector<std::vector<int>> atoms;
    for (auto& [label, states] : groups) atoms.push_back(std::move(states));
    return Partition(static_cast<int>(labels.size()), std::move(atoms));
}

bool Partition::measurable(const Event& event) const {
    for (const auto& a : atoms_)
        for (int s : a)
            if (event[static_cast<std::size_t>(s)] != event[static_cast<std::size_t>(a.front())]) return false;
    return true;
}

bool Partition::measurable(const Vec& x) const { return measurable_values(x); }

// ---------------------------------------------------------------- Filtration

Filtration::Filtration(std::vector<Partition> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw InvalidInput("filtration needs at least one time step");
    for (const auto& p : steps_)
        if (p.num_states() != steps_.front().num_states()) throw InvalidInput("filtration steps disagree on state count");
}

Filtration Filtration::constant(const Partition& p, int last_time) {
    return Filtration(std::vector<Partition>(static_cast<std::size_t>(last_time + 1), p));
}

const Partition& Filtration::at(int t) const {
    if (t < 0) throw InvalidInput("negative time index");
    return steps_[static_cast<std::size_t>(std::min(t, last_time()))];
}

Filtration Filtration::resized(int last) const {
    std::vector<Partition> out;
    for (int t = 0; t <= last; ++t) out.push_back(at(t));
    return Filtration(std::move(out));
}

std::vector<std::string> validate_filtration(const Filtration& f) {
    std::vector<std::string> issues;
    for (int t = 1; t <= f.last_time(); ++t)
        if (!refines(f.at(t), f.at(t - 1)))
            issues.push_back("filtration not refining between t=" + std::to_string(t - 1) + " and t=" + std::to_string(t));
    return issues;
}

// ---------------------------------------------------------------- lattice ops

bool refines(const Partition& fine, const Partition& coarse) {
    if (fine.num_states() != coarse.num_states()) throw InvalidInput("partitions over different state sets");
    for (const auto& a : fine.atoms()) {
        const int target = coarse.atom_of(a.front());
        for (int s : a)
            if (coarse.atom_of(s) != target) return false;
    }
    return true;
}

bool refines(const Filtration& fine, const Filtration& coarse, int last) {
    for (int t = 0; t <= last; ++t)
        if (!refines(fine.at(t), coarse.at(t))) return false;
    return true;
}

Partition sigma_join(std::span<const Partition> parts) {
    if (parts.empty()) throw InvalidInput("sigma_join of an empty list");
    const int n = parts.front().num_states();
    for (const auto& p : parts)
        if (p.num_states() != n) throw InvalidInput("sigma_join over different state sets");
    std::map<std::vector<int>, int> key_to_label;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::vector<int> key;
        key.reserve(parts.size());
        for (const auto& p : parts) key.push_back(p.atom_of(s));
        auto [it, inserted] = key_to_label.emplace(std::move(key), static_cast<int>(key_to_label.size()));
        labels[static_cast<std::size_t>(s)] = it->second;
    }
    return Partition::from_labels(labels);
}

Partition sigma_join(const Partition& a, const Partition& b) {
    const Partition both[] = {a, b};
    return sigma_join(both);
}

Partition sigma_meet(std::span<const Partition> parts) {
    if (parts.empty()) throw InvalidInput("sigma_meet of an empty list");
    const int n = parts.front().num_states();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& p : parts) {
        if (p.num_states() != n) throw InvalidInput("sigma_meet over different state sets");
        for (const auto& a : p.atoms())
            for (int s : a) parent[static_cast<std::size_t>(find(s))] = find(a.front());
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) labels[static_cast<std::size_t>(s)] = find(s);
    return Partition::from_labels(labels);
}

Partition sigma_meet(const Partition& a, const Partition& b) {
    const Partition both[] = {a, b};
    return sigma_meet(both);
}

Vec conditional_expectation(const Vec& x, const Partition& sigma, const Vec& q) {
    const auto n = static_cast<std::size_t>(sigma.num_states());
    if (x.size() != n || q.size() != n) throw InvalidInput("conditional_expectation: dimension mismatch");
    Vec out(n);
    for (const auto& atom : sigma.atoms()) {
        Rational mass = 0, weighted = 0;
        for (int s : atom) {
            mass += q[static_cast<std::size_t>(s)];
            weighted += q[static_cast<std::size_t>(s)] * x[static_cast<std::size_t>(s)];
        }
        if (mass <= 0) throw InternalError("conditional_expectation: atom without positive mass");
        const Rational value = weighted / mass;
        for (int s : atom) out[static_cast<std::size_t>(s)] = value;
    }
    return out;
}

// ---------------------------------------------------------------- stopping

bool is_stopping_time(const Filtration& f, const std::vector<int>& tau) {
    if (static_cast<int>(tau.size()) != f.num_states()) throw InvalidInput("stopping time length mismatch");
    if (tau.empty()) return true;
    const int top = *std::max_element(tau.begin(), tau.end());
    if (*std::min_element(tau.begin(), tau.end()) < 0) return false;
    Event below(tau.size());
    for (int s = 0; s <= top; ++s) {
        for (std::size_t w = 0; w < tau.size(); ++w) below[w] = tau[w] <= s;
        if (!f.at(s).measurable(below)) return false;
    }
    return true;
}

Partition stopped_sigma_field(const Filtration& f, const std::vector<int>& tau) {
    if (!is_stopping_time(f, tau)) throw PreconditionError({"random time is not a stopping time of the filtration"});
    std::vector<int> labels(tau.size());
    // atom of f at tau(w), tagged by tau(w); distinct tags never merge
    std::map<std::pair<int, int>, int> ids;
    for (std::size_t w = 0; w < tau.size(); ++w) {
        const std::pair<int, int> key{tau[w], f.at(tau[w]).atom_of(static_cast<int>(w))};
        labels[w] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
    return Partition::from_labels(labels);
}

std::vector<std::string> validate_stopping_process(const StoppingProcess& sp, DelayMode mode, int n_ext) {
    std::vector<std::string> issues;
    const int n = sp.info.num_states();
    if (sp.values.empty()) {
        issues.emplace_back("stopping process has no time steps");
        return issues;
    }
    for (const auto& row : sp.values)
        if (static_cast<int>(row.size()) != n) {
            issues.emplace_back("stopping process row length does not match state count");
            return issues;
        }
    for (const auto& msg : validate_filtration(sp.info)) issues.push_back("delay information: " + msg);
    for (int t = 0; t <= sp.last_time(); ++t) {
        const auto& row = sp.at(t);
        const auto ts = std::to_string(t);
        for (int w = 0; w < n; ++w) {
            const int v = row[static_cast<std::size_t>(w)];
            if (mode == DelayMode::information) {
                if (v < 0 || v > t) {
                    issues.push_back("bound 0 <= delta(t) <= t violated at t=" + ts);
                    break;
                }
            } else if (v < t || v > n_ext) {
                issues.push_back("bound t <= pi(t) <= n_ext violated at t=" + ts);
                break;
            }
        }
        if (*std::min_element(row.begin(), row.end()) >= 0 && !is_stopping_time(sp.info, row))
            issues.push_back("stopping-time property violated at t=" + ts);
        if (t > 0) {
            const auto& prev = sp.at(t - 1);
            for (int w = 0; w < n; ++w)
                if (prev[static_cast<std::size_t>(w)] > row[static_cast<std::size_t>(w)]) {
                    issues.push_back("path-wise monotonicity violated between t=" + std::to_string(t - 1) + " and t=" + ts);
                    break;
                }
        }
    }
    return issues;
}

bool is_discrete_continuous(const StoppingProcess& sp) {
    for (int t = 1; t <= sp.last_time(); ++t)
        for (std::size_t w = 0; w < sp.at(t).size(); ++w) {
            const int step = sp.at(t)[w] - sp.at(t - 1)[w];
            if (step != 0 && step != 1) return false;
        }
    return true;
}

}  // namespace freelunch
