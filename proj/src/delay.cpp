#include "freelunch/delay.hpp"

#include "freelunch/errors.hpp"

#include <algorithm>
#include <numeric>

namespace freelunch {
namespace {

std::string at_time(int t) { return " at t=" + std::to_string(t); }

void require(std::vector<std::string> issues) {
    if (!issues.empty()) throw PreconditionError(std::move(issues));
}

// Index positions of the index system sorted by set size (subsets first).
std::vector<int> by_size(const Market& m) {
    std::vector<int> order(m.index_system.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return m.index_system[static_cast<std::size_t>(x)].size() < m.index_system[static_cast<std::size_t>(y)].size();
    });
    return order;
}

}  // namespace

std::vector<std::string> validate_information_family(const Market& m, const InformationDelayFamily& d) {
    std::vector<std::string> issues;
    if (d.delays.size() != m.index_system.size()) {
        issues.emplace_back("information delay family must have one delay per index set");
        return issues;
    }
    for (std::size_t k = 0; k < d.delays.size(); ++k) {
        const auto& delta = d.delays[k];
        const auto name = "information delay of " + m.describe(m.index_system[k]) + ": ";
        if (delta.info.num_states() != m.num_states()) {
            issues.push_back(name + "delay information has wrong state count");
            continue;
        }
        if (delta.last_time() < m.n()) issues.push_back(name + "must be defined for t=0..n");
        for (const auto& msg : validate_stopping_process(delta, DelayMode::information, m.n_ext()))
            issues.push_back(name + msg);
        for (int s = 0; s <= delta.last_time(); ++s)
            if (!refines(m.trading_at(static_cast<int>(k), s), delta.info.at(s))) {
                issues.push_back(name + "delay information not contained in trading filtration" + at_time(s));
                break;
            }
    }
    return issues;
}

std::vector<std::string> validate_execution_family(const Market& m, const ExecutionDelayFamily& p) {
    std::vector<std::string> issues;
    if (static_cast<int>(p.delays.size()) != m.num_assets()) {
        issues.emplace_back("execution delay family must have one delay per asset");
        return issues;
    }
    for (std::size_t a = 0; a < p.delays.size(); ++a) {
        const auto& d = p.delays[a];
        const auto name = "execution delay of '" + m.asset_ids[a] + "': ";
        if (d.process.info.num_states() != m.num_states()) {
            issues.push_back(name + "delay information has wrong state count");
            continue;
        }
        if (d.process.last_time() < m.n()) issues.push_back(name + "must be defined for t=0..n");
        if (d.process.last_time() > m.n_ext()) issues.push_back(name + "defined beyond n_ext");
        for (const auto& msg : validate_stopping_process(d.process, DelayMode::execution, m.n_ext()))
            issues.push_back(name + msg);
        const int cap = d.effective_cap(m.n_ext());
        if (cap > m.n_ext() + 1) issues.push_back(name + "cap exceeds n_ext + 1");
        bool capped = true;
        for (const auto& row : d.process.values)
            for (int v : row) capped = capped && v < cap;
        if (!capped) issues.push_back(name + "cap pi(t) < " + std::to_string(cap) + " violated");
        for (int s = 0; s <= m.n_ext(); ++s)
            if (!refines(m.grand.at(s), d.process.info.at(s))) {
                issues.push_back(name + "delay information not contained in grand filtration" + at_time(s));
                break;
            }
    }
    return issues;
}

std::vector<std::string> execution_info_within_trading(const Market& m, const ExecutionDelayFamily& p) {
    std::vector<std::string> issues;
    for (std::size_t k = 0; k < m.index_system.size(); ++k)
        for (int a : m.index_system[k].members()) {
            const auto& info = p.delays.at(static_cast<std::size_t>(a)).process.info;
            for (int s = 0; s <= m.n_ext(); ++s)
                if (!refines(m.trading_at(static_cast<int>(k), s), info.at(s))) {
                    issues.push_back("delay information of '" + m.asset_ids[static_cast<std::size_t>(a)] +
                                     "' not contained in trading filtration of " + m.describe(m.index_system[k]) +
                                     at_time(s));
                    break;
                }
        }
    return issues;
}

std::vector<std::string> lint_superset_delays(const Market& m, const InformationDelayFamily& d) {
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < m.index_system.size(); ++i)
        for (std::size_t j = 0; j < m.index_system.size(); ++j) {
            if (!m.index_system[i].proper_subset_of(m.index_system[j])) continue;
            const auto& small = d.delays[i];
            const auto& large = d.delays[j];
            const int last = std::min(small.last_time(), large.last_time());
            for (int t = 0; t <= last; ++t) {
                bool ok = true;
                for (int w = 0; w < m.num_states(); ++w) ok = ok && small.at(t, w) >= large.at(t, w);
                if (!ok) {
                    notes.push_back("delay of " + m.describe(m.index_system[i]) + " is shorter than delay of superset " +
                                    m.describe(m.index_system[j]) + at_time(t));
                    break;
                }
            }
        }
    return notes;
}

Filtration delayed_trading_filtration(const Filtration& f, const StoppingProcess& delta) {
    std::vector<std::string> issues;
    for (const auto& msg : validate_stopping_process(delta, DelayMode::information, delta.last_time()))
        issues.push_back("invalid information delay: " + msg);
    if (delta.info.num_states() != f.num_states()) issues.emplace_back("delay information has wrong state count");
    else
        for (int s = 0; s <= delta.last_time(); ++s)
            if (!refines(f.at(s), delta.info.at(s))) {
                issues.push_back("delay information not contained in the filtration" + at_time(s));
                break;
            }
    require(std::move(issues));
    std::vector<Partition> steps;
    for (int t = 0; t <= delta.last_time(); ++t) steps.push_back(stopped_sigma_field(f, delta.at(t)));
    return Filtration(std::move(steps));
}

std::vector<Filtration> large_delayed_filtrations(const Market& m, const InformationDelayFamily& d) {
    if (d.delays.size() != m.index_system.size())
        throw InvalidInput("information delay family does not cover the index system");
    std::vector<std::optional<Filtration>> done(m.index_system.size());
    for (int k : by_size(m)) {
        const auto ku = static_cast<std::size_t>(k);
        const Filtration own = delayed_trading_filtration(m.trading[ku], d.delays[ku]);
        std::vector<Partition> steps;
        for (int t = 0; t <= own.last_time(); ++t) {
            std::vector<Partition> parts{own.at(t)};
            for (std::size_t j = 0; j < m.index_system.size(); ++j)
                if (m.index_system[j].proper_subset_of(m.index_system[ku])) {
                    if (!done[j]) throw InternalError("index set processed before its subsets");
                    parts.push_back(done[j]->at(t));
                }
            steps.push_back(sigma_join(parts));
        }
        done[ku] = Filtration(std::move(steps));
    }
    std::vector<Filtration> out;
    for (auto& f : done) out.push_back(std::move(*f));
    return out;
}

Market information_delayed_market(const Market& m, const InformationDelayFamily& d) {
    return with_trading(m, large_delayed_filtrations(m, d));
}

bool check_coarseness(const Market& m, const InformationDelayFamily& d) {
    const auto delayed = large_delayed_filtrations(m, d);
    for (std::size_t k = 0; k < delayed.size(); ++k)
        for (int t = 0; t <= delayed[k].last_time(); ++t)
            if (!refines(m.trading_at(static_cast<int>(k), t), delayed[k].at(t))) return false;
    return true;
}

Market delayed_market(const Market& m, const ExecutionDelayFamily& p) {
    require(validate_execution_family(m, p));
    int last = m.n_ext();
    for (const auto& d : p.delays) last = std::min(last, d.process.last_time());

    Market out = m;
    out.space.n_ext = last;
    const auto n_states = static_cast<std::size_t>(m.num_states());
    for (std::size_t a = 0; a < p.delays.size(); ++a) {
        const auto& pi = p.delays[a].process;
        PriceTable table(static_cast<std::size_t>(last + 1), Vec(n_states));
        for (int t = 0; t <= last; ++t)
            for (std::size_t w = 0; w < n_states; ++w)
                table[static_cast<std::size_t>(t)][w] = m.price(static_cast<int>(a), pi.at(t)[w])[w];
        out.prices[a] = std::move(table);
    }
    std::vector<Partition> grand;
    for (int t = 0; t <= last; ++t) {
        std::vector<Partition> parts;
        for (const auto& d : p.delays) parts.push_back(stopped_sigma_field(m.grand, d.process.at(t)));
        grand.push_back(sigma_join(parts));
    }
    out.grand = Filtration(std::move(grand));
    for (auto& f : out.trading)
        if (f.last_time() > last) f = f.resized(last);
    return out;
}

StoppingProcess invert_delay(const StoppingProcess& pi, std::optional<int> horizon) {
    const int cap = horizon.value_or(pi.last_time());
    if (cap < 0 || cap > pi.last_time()) throw InvalidInput("invert_delay: horizon outside the domain of the delay");
    const auto n_states = pi.info.num_states();
    StoppingProcess delta;
    for (int t = 0; t <= cap; ++t) {
        std::vector<int> row(static_cast<std::size_t>(n_states), cap);
        for (int w = 0; w < n_states; ++w)
            for (int s = 0; s <= pi.last_time(); ++s)
                if (pi.at(s, w) >= t) {
                    row[static_cast<std::size_t>(w)] = std::min(s, cap);
                    break;
                }
        delta.values.push_back(std::move(row));
    }
    std::vector<Partition> info;
    for (int s = 0; s <= cap; ++s) info.push_back(stopped_sigma_field(pi.info, pi.at(s)));
    delta.info = Filtration(std::move(info));
    return delta;
}

ExecutionDelayFamily superimpose_delays(const ExecutionDelayFamily& pi, const ExecutionDelayFamily& pi_tilde) {
    if (pi.delays.size() != pi_tilde.delays.size()) throw InvalidInput("superimpose_delays: asset count mismatch");
    std::vector<std::string> issues;
    for (std::size_t a = 0; a < pi.delays.size(); ++a) {
        const auto& base = pi.delays[a].process;
        const auto& top = pi_tilde.delays[a].process;
        const auto name = "asset #" + std::to_string(a) + ": ";
        if (!is_discrete_continuous(base)) issues.push_back(name + "base delay is not discrete-continuous");
        if (top.last_time() > base.last_time()) {
            issues.push_back(name + "base delay domain shorter than the superimposed delay");
            continue;
        }
        bool ordered = true;
        for (int t = 0; t <= top.last_time(); ++t)
            for (int w = 0; w < top.info.num_states(); ++w) ordered = ordered && base.at(t, w) <= top.at(t, w);
        if (!ordered) issues.push_back(name + "ordering pi <= pi_tilde violated");
        for (int s = 0; s <= base.last_time(); ++s)
            if (!is_stopping_time(top.info, base.at(s))) {
                issues.push_back(name + "base delay is not a stopping time of the superimposed delay information");
                break;
            }
        for (int t = 0; t <= top.last_time(); ++t)
            for (int w = 0; w < top.info.num_states(); ++w)
                if (top.at(t, w) > base.at(base.last_time(), w)) {
                    issues.push_back(name + "range of the base delay does not reach pi_tilde" + at_time(t));
                    t = top.last_time();
                    break;
                }
    }
    require(std::move(issues));

    ExecutionDelayFamily out;
    for (std::size_t a = 0; a < pi.delays.size(); ++a) {
        const auto& base = pi.delays[a].process;
        const auto& top = pi_tilde.delays[a].process;
        const int n_states = top.info.num_states();
        ExecutionDelay hat;
        hat.cap = pi_tilde.delays[a].cap;
        for (int t = 0; t <= top.last_time(); ++t) {
            std::vector<int> row(static_cast<std::size_t>(n_states));
            for (int w = 0; w < n_states; ++w) {
                // first time the base reaches pi_tilde(t); a stalled base may
                // reach it before t, so move to t inside the same level set
                int s = 0;
                while (base.at(s, w) < top.at(t, w)) ++s;
                row[static_cast<std::size_t>(w)] = std::max(s, t);
            }
            hat.process.values.push_back(std::move(row));
        }
        std::vector<Partition> info;
        for (int s = 0; s <= base.last_time(); ++s) info.push_back(stopped_sigma_field(top.info, base.at(s)));
        hat.process.info = Filtration(std::move(info));
        out.delays.push_back(std::move(hat));
    }
    return out;
}

ExecutionDelayFamily min_delay(std::span<const ExecutionDelayFamily> families) {
    if (families.empty()) throw InvalidInput("min_delay of an empty list");
    const auto assets = families.front().delays.size();
    for (const auto& f : families)
        if (f.delays.size() != assets) throw InvalidInput("min_delay: mismatched asset sets");
    std::vector<std::string> issues;
    ExecutionDelayFamily out;
    for (std::size_t a = 0; a < assets; ++a) {
        ExecutionDelay d = families.front().delays[a];
        for (const auto& f : families.subspan(1)) {
            const auto& other = f.delays[a];
            if (!(other.process.info == d.process.info)) {
                issues.push_back("asset #" + std::to_string(a) + ": delay information does not coincide across brokers");
                continue;
            }
            const int last = std::min(d.process.last_time(), other.process.last_time());
            d.process.values.resize(static_cast<std::size_t>(last + 1));
            for (int t = 0; t <= last; ++t)
                for (std::size_t w = 0; w < d.process.values[static_cast<std::size_t>(t)].size(); ++w) {
                    auto& v = d.process.values[static_cast<std::size_t>(t)][w];
                    v = std::min(v, other.process.at(t)[w]);
                }
            if (d.cap && other.cap) d.cap = std::max(*d.cap, *other.cap);
            else d.cap.reset();
        }
        out.delays.push_back(std::move(d));
    }
    require(std::move(issues));
    return out;
}

std::vector<Filtration> enlarged_filtrations(const Market& m, const ExecutionDelayFamily& p) {
    std::vector<Filtration> out;
    for (std::size_t k = 0; k < m.index_system.size(); ++k) {
        const Filtration f = m.trading[k].resized(m.n_ext());
        std::vector<Partition> steps;
        for (int t = 0; t <= m.n(); ++t) {
            std::vector<Partition> parts;
            for (int a : m.index_system[k].members())
                parts.push_back(stopped_sigma_field(f, p.delays.at(static_cast<std::size_t>(a)).process.at(t)));
            steps.push_back(sigma_join(parts));
        }
        out.emplace_back(std::move(steps));
    }
    return out;
}

InformationDelayFamily inverse_delay_family(const Market& m, const ExecutionDelayFamily& p) {
    const auto enlarged = enlarged_filtrations(m, p);
    std::vector<StoppingProcess> inverse;
    for (const auto& d : p.delays) inverse.push_back(invert_delay(d.process, m.n()));
    InformationDelayFamily family;
    for (std::size_t k = 0; k < m.index_system.size(); ++k) {
        StoppingProcess delta;
        delta.info = enlarged[k];
        for (int t = 0; t <= m.n(); ++t) {
            std::vector<int> row(static_cast<std::size_t>(m.num_states()), m.n());
            for (int a : m.index_system[k].members())
                for (std::size_t w = 0; w < row.size(); ++w)
                    row[w] = std::min(row[w], inverse[static_cast<std::size_t>(a)].at(t)[w]);
            delta.values.push_back(std::move(row));
        }
        family.delays.push_back(std::move(delta));
    }
    return family;
}

std::vector<Filtration> represented_trading_filtrations(const Market& m, const ExecutionDelayFamily& p) {
    const auto family = inverse_delay_family(m, p);
    std::vector<Filtration> enlarged;
    for (const auto& d : family.delays) enlarged.push_back(d.info);
    return large_delayed_filtrations(with_trading(m, std::move(enlarged)), family);
}

bool representation_check(const Market& m, const ExecutionDelayFamily& p) {
    std::vector<std::string> issues = validate_execution_family(m, p);
    for (int a = 0; a < m.num_assets(); ++a)
        if (!m.find_index_set(IndexSet::singleton(a)))
            issues.push_back("singleton {" + m.asset_ids[static_cast<std::size_t>(a)] + "} missing from the index system");
    if (issues.empty()) {
        for (std::size_t a = 0; a < p.delays.size(); ++a) {
            const auto& pi = p.delays[a].process;
            const auto& id = m.asset_ids[a];
            if (!is_discrete_continuous(pi)) issues.push_back("execution delay of '" + id + "' is not discrete-continuous");
            if (std::any_of(pi.at(0).begin(), pi.at(0).end(), [](int v) { return v != 0; }))
                issues.push_back("execution delay of '" + id + "' does not start at pi(0) = 0");
        }
        for (auto& msg : execution_info_within_trading(m, p)) issues.push_back(std::move(msg));
    }
    require(std::move(issues));

    const auto represented = represented_trading_filtrations(m, p);
    for (std::size_t k = 0; k < represented.size(); ++k)
        for (int t = 0; t <= m.n(); ++t)
            if (!(represented[k].at(t) == m.trading_at(static_cast<int>(k), t))) return false;
    return true;
}

}  // namespace freelunch
