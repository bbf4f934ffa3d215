#include "freelunch/experiment.hpp"

#include "freelunch/arbitrage.hpp"
#include "freelunch/document.hpp"
#include "freelunch/errors.hpp"
#include "freelunch/scenario.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <thread>

namespace freelunch {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array kKindNames = {
    std::pair{ExperimentKind::information, "information"},   std::pair{ExperimentKind::execution, "execution"},
    std::pair{ExperimentKind::broker, "broker"},             std::pair{ExperimentKind::superimpose, "superimpose"},
    std::pair{ExperimentKind::representation, "representation"}, std::pair{ExperimentKind::duality, "duality"},
    std::pair{ExperimentKind::insider_demo, "insider-demo"},
};

const char* verdict_name(const Verdict& v) { return v.free_lunch() ? "free_lunch" : "no_free_lunch"; }

bool measure_verifies(const Market& m, const Vec& q, int horizon) {
    Verdict v;
    v.horizon = horizon;
    v.certificate = MartingaleMeasureCertificate{q};
    return verify_certificate(m, v);
}

void describe_market(ojson& detail, const Market& m) {
    detail["states"] = m.num_states();
    detail["n"] = m.n();
    detail["n_ext"] = m.n_ext();
    detail["assets"] = m.num_assets();
    detail["index_sets"] = m.index_system.size();
}

// A ⊆ A' in the index system implies the filtration of A is coarser.
bool monotone_in_index_set(const Market& m, const std::vector<Filtration>& f, int last) {
    for (std::size_t i = 0; i < m.index_system.size(); ++i)
        for (std::size_t j = 0; j < m.index_system.size(); ++j)
            if (m.index_system[i].subset_of(m.index_system[j]) && !refines(f[j], f[i], last)) return false;
    return true;
}

bool coarser_than_original(const Market& m, const std::vector<Filtration>& f, int last) {
    for (std::size_t k = 0; k < f.size(); ++k)
        if (!refines(m.trading[k], f[k], last)) return false;
    return true;
}

bool pointwise_le(const ExecutionDelayFamily& lo, const ExecutionDelayFamily& hi) {
    for (std::size_t a = 0; a < lo.delays.size(); ++a) {
        const auto& x = lo.delays[a].process;
        const auto& y = hi.delays[a].process;
        for (int t = 0; t <= std::min(x.last_time(), y.last_time()); ++t)
            for (std::size_t w = 0; w < x.at(t).size(); ++w)
                if (x.at(t)[w] > y.at(t)[w]) return false;
    }
    return true;
}

int max_cap(const Market& m, const ExecutionDelayFamily& p) {
    int c = 0;
    for (const auto& d : p.delays) c = std::max(c, d.effective_cap(m.n_ext()));
    return c;
}

Market mixed_market(const ScenarioConfig& cfg, Rng& rng, ojson& detail) {
    if (rng.chance(2, 3)) {
        detail["market"] = "martingale";
        return gen_martingale_market(cfg, rng).market;
    }
    detail["market"] = "random";
    return gen_random_market(cfg, rng);
}

struct Trial {
    explicit Trial(Rng r) : rng(r) {}
    Rng rng;
    ojson detail = ojson::object();
    MarketDocument repro;
    bool vacuous = false;
};

bool information_trial(Trial& x) {
    auto cfg = random_config(x.rng, 8, 3, 1, 3, 4);
    auto mm = gen_martingale_market(cfg, x.rng);
    const Market& m = mm.market;
    x.repro.market = m;
    describe_market(x.detail, m);
    const auto before = check_naflp(m);
    const bool generated_ok = !before.free_lunch() && measure_verifies(m, mm.q, m.n_ext());
    const auto d = gen_information_family(m, x.rng, x.rng.chance(1, 10));
    x.repro.information = d;
    const auto issues = validate_information_family(m, d);
    const auto delayed = large_delayed_filtrations(m, d);
    const Market dm = with_trading(m, delayed);
    const bool coarser = check_coarseness(m, d) && coarser_than_original(m, delayed, m.n());
    const bool monotone = monotone_in_index_set(m, delayed, m.n());
    const bool valid = validate_market(dm).empty();
    const auto after = check_naflp(dm);
    const bool transfers = measure_verifies(dm, mm.q, dm.n());
    x.detail["undelayed"] = verdict_name(before);
    x.detail["delayed"] = verdict_name(after);
    x.detail["coarser"] = coarser;
    x.detail["monotone"] = monotone;
    x.detail["measure_transfers"] = transfers;
    return generated_ok && issues.empty() && coarser && monotone && valid && !after.free_lunch() && transfers;
}

bool execution_trial(Trial& x) {
    auto cfg = random_config(x.rng, 8, 3, 2, 3, 4);
    auto mm = gen_martingale_market(cfg, x.rng);
    const Market& m = mm.market;
    x.repro.market = m;
    describe_market(x.detail, m);
    ExecutionOptions opts;
    opts.domain = m.n();
    opts.lag = x.rng.uniform(1, 2);
    opts.continuous = x.rng.chance(1, 4);
    for (int a = 0; a < m.num_assets(); ++a) opts.caps.push_back(x.rng.uniform(m.n() + 1, m.n_ext() + 1));
    const auto info = gen_execution_info(m, x.rng.uniform(0, opts.lag), x.rng);
    const auto p = gen_execution_family(m, info, opts, x.rng);
    x.repro.execution = p;
    auto issues = validate_execution_family(m, p);
    for (auto& s : execution_info_within_trading(m, p)) issues.push_back(s);
    const int horizon = max_cap(m, p) - 1;
    const auto before = check_naflp(m, horizon);
    const Market dm = delayed_market(m, p);
    const bool valid = validate_market(dm).empty();
    const auto after = check_naflp(dm);
    const bool transfers = measure_verifies(dm, mm.q, dm.n());
    x.detail["extended_horizon"] = horizon;
    x.detail["undelayed"] = verdict_name(before);
    x.detail["delayed"] = verdict_name(after);
    x.detail["delayed_market_valid"] = valid;
    x.detail["measure_transfers"] = transfers;
    return issues.empty() && !before.free_lunch() && valid && !after.free_lunch() && transfers;
}

bool same_prices(const Market& a, const Market& b) { return a.prices == b.prices; }

bool broker_trial(Trial& x) {
    auto cfg = random_config(x.rng, 8, 3, 2, 3, 4);
    const Market m = mixed_market(cfg, x.rng, x.detail);
    x.repro.market = m;
    describe_market(x.detail, m);
    const int lag = x.rng.uniform(1, 2);
    const auto info = gen_execution_info(m, lag, x.rng);
    ExecutionOptions opts;
    opts.domain = m.n_ext();
    opts.lag = lag;
    opts.continuous = true;
    const int k = x.rng.uniform(2, 3);
    std::vector<ExecutionDelayFamily> brokers;
    for (int l = 0; l < k; ++l) brokers.push_back(gen_execution_family(m, info, opts, x.rng));
    const auto fastest = min_delay(brokers);
    x.repro.execution = fastest;
    x.detail["brokers"] = k;

    bool ok = validate_execution_family(m, fastest).empty();
    for (const auto& b : brokers) ok = ok && pointwise_le(fastest, b) && validate_execution_family(m, b).empty();
    x.detail["min_is_pointwise_below"] = ok;
    const Market fast_market = delayed_market(m, fastest);
    const auto fast = check_naflp(fast_market, fast_market.n_ext());
    x.detail["min_delay_market"] = verdict_name(fast);
    ojson per_broker = ojson::array();
    bool weaker_condition = true;
    for (const auto& b : brokers) {
        const Market bm = delayed_market(m, b);
        const auto hat = superimpose_delays(fastest, b);
        const bool identity = same_prices(delayed_market(fast_market, hat), bm);
        const bool info_ok = execution_info_within_trading(fast_market, hat).empty();
        weaker_condition = weaker_condition && info_ok;
        const auto v = check_naflp(bm);
        per_broker.push_back({{"verdict", verdict_name(v)}, {"price_identity", identity}});
        ok = ok && identity && info_ok;
        if (!fast.free_lunch()) ok = ok && !v.free_lunch();
    }
    x.detail["broker_markets"] = std::move(per_broker);
    x.detail["stopped_info_within_trading"] = weaker_condition;
    x.vacuous = fast.free_lunch();
    return ok;
}

bool superimpose_trial(Trial& x) {
    auto cfg = random_config(x.rng, 8, 3, 2, 3, 4);
    const Market m = mixed_market(cfg, x.rng, x.detail);
    x.repro.market = m;
    describe_market(x.detail, m);
    const int lag = x.rng.uniform(1, 2);
    const auto info = gen_execution_info(m, lag, x.rng);
    ExecutionOptions base_opts;
    base_opts.domain = m.n_ext();
    base_opts.lag = lag;
    base_opts.continuous = true;
    const auto base = gen_execution_family(m, info, base_opts, x.rng);
    ExecutionOptions top_opts;
    top_opts.domain = m.n();
    top_opts.lag = lag + 1;
    for (const auto& d : base.delays) {
        int reach = 0;
        for (int t = 0; t <= m.n(); ++t)
            for (int v : d.process.at(t)) reach = std::max(reach, v);
        top_opts.caps.push_back(x.rng.uniform(reach + 1, m.n_ext() + 1));
    }
    const auto top = gen_dominating_family(m, base, top_opts, x.rng);
    x.repro.execution = top;

    auto issues = validate_execution_family(m, base);
    for (auto& s : validate_execution_family(m, top)) issues.push_back(s);
    const auto hat = superimpose_delays(base, top);
    const Market base_market = delayed_market(m, base);
    for (auto& s : validate_execution_family(base_market, hat)) issues.push_back("composed: " + s);
    for (auto& s : execution_info_within_trading(base_market, hat)) issues.push_back("composed: " + s);
    const Market top_market = delayed_market(m, top);
    const bool identity = same_prices(delayed_market(base_market, hat), top_market);
    const int horizon = max_cap(m, top) - 1;
    const auto vb = check_naflp(base_market, horizon);
    const auto vt = check_naflp(top_market);
    x.detail["price_identity"] = identity;
    x.detail["base_market"] = verdict_name(vb);
    x.detail["superimposed_market"] = verdict_name(vt);
    if (!issues.empty()) x.detail["issues"] = issues;
    x.vacuous = vb.free_lunch();
    return issues.empty() && identity && (vb.free_lunch() || !vt.free_lunch());
}

bool representation_trial(Trial& x) {
    auto cfg = random_config(x.rng, 8, 3, 2, 3, 7);
    cfg.singletons = true;
    const Market m = mixed_market(cfg, x.rng, x.detail);
    x.repro.market = m;
    describe_market(x.detail, m);
    const int lag = x.rng.uniform(1, 2);
    const auto info = gen_execution_info(m, lag, x.rng);
    ExecutionOptions opts;
    opts.domain = m.n_ext();
    opts.lag = lag;
    opts.continuous = true;
    opts.start_at_zero = true;
    const auto anchored = gen_execution_family(m, info, opts, x.rng);
    const bool represented = representation_check(m, anchored);

    // Start condition dropped: equality is expected from max pi(0) on.
    opts.start_at_zero = false;
    const auto shifted = gen_execution_family(m, info, opts, x.rng);
    x.repro.execution = shifted;
    int start = 0;
    for (const auto& d : shifted.delays)
        for (int v : d.process.at(0)) start = std::max(start, v);
    const auto rebuilt = represented_trading_filtrations(m, shifted);
    bool late_equal = true;
    for (std::size_t k = 0; k < rebuilt.size(); ++k)
        for (int t = start; t <= m.n(); ++t) late_equal = late_equal && rebuilt[k].at(t) == m.trading_at(static_cast<int>(k), t);
    x.detail["represented"] = represented;
    x.detail["shifted_start"] = start;
    x.detail["represented_from_start"] = late_equal;
    return represented && late_equal;
}

bool duality_trial(Trial& x) {
    auto cfg = random_config(x.rng, 12, 4, 0, 3, 4);
    Market m;
    const int shape = x.rng.uniform(0, 2);
    if (shape == 0) {
        m = gen_martingale_market(cfg, x.rng).market;
        x.detail["market"] = "martingale";
    } else if (shape == 1) {
        m = gen_random_market(cfg, x.rng);
        x.detail["market"] = "random";
    } else {
        m = gen_martingale_market(cfg, x.rng).market;
        const int a = x.rng.uniform(0, m.num_assets() - 1);
        const int t = x.rng.uniform(1, m.n());
        const auto& p = m.grand.at(t);
        const auto& atom = p.atom(x.rng.uniform(0, p.size() - 1));
        const Rational bump = x.rng.chance(1, 2) ? 1 : -1;
        for (int w : atom) m.prices[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)][static_cast<std::size_t>(w)] += bump;
        x.detail["market"] = "perturbed";
    }
    x.repro.market = m;
    describe_market(x.detail, m);
    const auto v = check_naflp(m);
    x.detail["verdict"] = verdict_name(v);
    return shape != 0 || !v.free_lunch();
}

bool insider_trial(Trial& x, int trial) {
    static constexpr std::array<std::pair<int, int>, 3> shapes{{{2, 1}, {3, 1}, {2, 2}}};
    const auto [n, h] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    x.detail["n"] = n;
    x.detail["h"] = h;

    const auto info = gen_insider_market(n, h);
    x.repro.market = info.market;
    x.repro.information = info.delay;
    const auto before = check_naflp(info.market);
    const Market delayed = information_delayed_market(info.market, info.delay);
    const auto after = check_naflp(delayed);
    const Vec uniform(static_cast<std::size_t>(delayed.num_states()), Rational(1, delayed.num_states()));
    const bool uniform_ok = measure_verifies(delayed, uniform, delayed.n());
    bool ones = before.free_lunch();
    if (ones)
        for (const auto& w : before.lunch().terminal_wealth) ones = ones && w == 1;
    x.detail["information"] = {{"undelayed", verdict_name(before)},
                               {"delayed", verdict_name(after)},
                               {"terminal_wealth_all_ones", ones},
                               {"uniform_measure_verifies", uniform_ok}};

    const auto exec = gen_insider_execution_market(n, h);
    const auto exec_before = check_naflp(exec.market);
    const auto exec_after = check_naflp(delayed_market(exec.market, exec.delay));
    x.detail["execution"] = {{"undelayed", verdict_name(exec_before)}, {"delayed", verdict_name(exec_after)}};

    return before.free_lunch() && !after.free_lunch() && uniform_ok && ones && exec_before.free_lunch() &&
           !exec_after.free_lunch();
}

}  // namespace

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
    for (const auto& [kind, text] : kKindNames)
        if (name == text) return kind;
    return std::nullopt;
}

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, text] : kKindNames)
        if (k == kind) return text;
    return "unknown";
}

TrialResult run_trial(ExperimentKind kind, std::uint64_t seed, int trial) {
    Trial x(Rng(seed, static_cast<std::uint64_t>(trial)));
    TrialResult r;
    r.trial = trial;
    try {
        switch (kind) {
        case ExperimentKind::information: r.passed = information_trial(x); break;
        case ExperimentKind::execution: r.passed = execution_trial(x); break;
        case ExperimentKind::broker: r.passed = broker_trial(x); break;
        case ExperimentKind::superimpose: r.passed = superimpose_trial(x); break;
        case ExperimentKind::representation: r.passed = representation_trial(x); break;
        case ExperimentKind::duality: r.passed = duality_trial(x); break;
        case ExperimentKind::insider_demo: r.passed = insider_trial(x, trial); break;
        }
    } catch (const std::exception& e) {
        r.passed = false;
        x.detail["error"] = e.what();
    }
    r.vacuous = r.passed && x.vacuous;
    r.detail = std::move(x.detail);
    if (!r.passed && !x.repro.market.asset_ids.empty()) r.detail["reproduction"] = document_to_json(x.repro);
    return r;
}

int ExperimentReport::failures() const {
    const auto n = std::count_if(trials.begin(), trials.end(), [](const TrialResult& r) { return !r.passed; });
    return static_cast<int>(n) + (control && !control->passed ? 1 : 0);
}

int ExperimentReport::vacuous() const {
    return static_cast<int>(std::count_if(trials.begin(), trials.end(), [](const TrialResult& r) { return r.vacuous; }));
}

nlohmann::ordered_json ExperimentReport::to_json() const {
    ojson out;
    out["format_version"] = kFormatVersion;
    out["kind"] = to_string(kind);
    out["seed"] = seed;
    out["trials"] = trials.size();
    out["failures"] = failures();
    out["vacuous"] = vacuous();
    const auto entry = [this](const TrialResult& r) {
        ojson e;
        e["trial"] = r.trial;
        e["seed"] = seed;
        e["passed"] = r.passed;
        if (r.vacuous) e["vacuous"] = true;
        for (const auto& [k, v] : r.detail.items()) e[k] = v;
        return e;
    };
    if (control) out["control"] = entry(*control);
    out["results"] = ojson::array();
    for (const auto& r : trials) out["results"].push_back(entry(r));
    return out;
}

ExperimentReport run_inheritance_experiment(ExperimentKind kind, std::uint64_t seed, int trials, unsigned threads) {
    if (trials < 0) throw InvalidInput("trial count must be non-negative");
    ExperimentReport report;
    report.kind = kind;
    report.seed = seed;
    report.trials.resize(static_cast<std::size_t>(trials));
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(trials, 1)));
    std::atomic<int> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back([&] {
                for (int t = next++; t < trials; t = next++)
                    report.trials[static_cast<std::size_t>(t)] = run_trial(kind, seed, t);
            });
    }
    if (kind == ExperimentKind::information || kind == ExperimentKind::execution)
        report.control = run_trial(ExperimentKind::insider_demo, seed, 0);
    return report;
}

}  // namespace freelunch
