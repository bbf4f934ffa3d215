#include "freelunch/document.hpp"

#include "freelunch/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace freelunch {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InvalidInput(path + ": " + what); }

void expect_object(const ojson& j, const std::string& path, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        const auto known = [&](std::initializer_list<const char*> names) {
            return std::any_of(names.begin(), names.end(), [&](const char* n) { return key == n; });
        };
        if (!known(required) && !known(optional)) fail(path, "unknown field \"" + key + "\"");
    }
    for (const char* key : required)
        if (!j.contains(key)) fail(path, std::string("missing field \"") + key + "\"");
}

const ojson& expect_array(const ojson& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

int expect_int(const ojson& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string expect_string(const ojson& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Rational expect_rational(const ojson& j, const std::string& path) {
    const auto text = expect_string(j, path);
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        fail(path, "\"" + text + "\" is not a rational \"p/q\"");
    }
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

struct Names {
    std::map<std::string, int> states;
    std::map<std::string, int> assets;
    int num_states() const { return static_cast<int>(states.size()); }
};

Partition parse_partition(const ojson& j, const std::string& path, const Names& names) {
    std::vector<std::vector<int>> atoms;
    for (std::size_t i = 0; i < expect_array(j, path).size(); ++i) {
        const auto apath = at(path, i);
        std::vector<int> atom;
        for (std::size_t k = 0; k < expect_array(j[i], apath).size(); ++k) {
            const auto name = expect_string(j[i][k], at(apath, k));
            const auto it = names.states.find(name);
            if (it == names.states.end()) fail(at(apath, k), "unknown state \"" + name + "\"");
            atom.push_back(it->second);
        }
        atoms.push_back(std::move(atom));
    }
    try {
        return Partition(names.num_states(), std::move(atoms));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

Filtration parse_filtration(const ojson& j, const std::string& path, const Names& names) {
    std::vector<Partition> steps;
    for (std::size_t t = 0; t < expect_array(j, path).size(); ++t) steps.push_back(parse_partition(j[t], at(path, t), names));
    if (steps.empty()) fail(path, "a filtration needs at least one time step");
    return Filtration(std::move(steps));
}

// Delay information: inline steps, "trivial" (over 0..last) or "grand".
Filtration parse_info(const ojson& j, const std::string& path, const Names& names, const Market& m, int last) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "trivial") return Filtration::constant(Partition::trivial(names.num_states()), last);
        if (s == "grand") return m.grand;
        fail(path, "expected \"trivial\", \"grand\" or a list of partitions");
    }
    return parse_filtration(j, path, names);
}

IndexSet parse_index_set(const ojson& j, const std::string& path, const Names& names) {
    IndexSet out;
    for (std::size_t i = 0; i < expect_array(j, path).size(); ++i) {
        const auto id = expect_string(j[i], at(path, i));
        const auto it = names.assets.find(id);
        if (it == names.assets.end()) fail(at(path, i), "unknown asset \"" + id + "\"");
        if (out.contains(it->second)) fail(at(path, i), "asset \"" + id + "\" listed twice");
        out = out | IndexSet::singleton(it->second);
    }
    return out;
}

std::vector<std::vector<int>> parse_values(const ojson& j, const std::string& path, int num_states) {
    std::vector<std::vector<int>> values;
    for (std::size_t t = 0; t < expect_array(j, path).size(); ++t) {
        const auto tpath = at(path, t);
        std::vector<int> row;
        for (std::size_t w = 0; w < expect_array(j[t], tpath).size(); ++w) row.push_back(expect_int(j[t][w], at(tpath, w)));
        if (static_cast<int>(row.size()) != num_states)
            fail(tpath, "expected " + std::to_string(num_states) + " values, one per state");
        values.push_back(std::move(row));
    }
    if (values.empty()) fail(path, "a delay needs at least one time step");
    return values;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

ojson partition_json(const Partition& p, const Market& m) {
    ojson atoms = ojson::array();
    for (const auto& atom : p.atoms()) {
        ojson names = ojson::array();
        for (int s : atom) names.push_back(m.space.states[static_cast<std::size_t>(s)]);
        atoms.push_back(std::move(names));
    }
    return atoms;
}

ojson filtration_json(const Filtration& f, const Market& m) {
    ojson steps = ojson::array();
    for (const auto& p : f.steps()) steps.push_back(partition_json(p, m));
    return steps;
}

ojson info_json(const Filtration& f, const Market& m, int trivial_last) {
    if (f == Filtration::constant(Partition::trivial(m.num_states()), trivial_last)) return "trivial";
    if (f == m.grand) return "grand";
    return filtration_json(f, m);
}

ojson index_set_json(IndexSet a, const Market& m) {
    ojson ids = ojson::array();
    for (int k : a.members()) ids.push_back(m.asset_ids[static_cast<std::size_t>(k)]);
    return ids;
}

ojson rationals(const Vec& v) {
    ojson out = ojson::array();
    for (const auto& x : v) out.push_back(format_rational(x));
    return out;
}

template <class Json>
std::string compact(const Json& j) {
    if (j.is_array()) {
        std::string out = "[";
        for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + compact(j[i]);
        return out + "]";
    }
    if (j.is_object()) {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            out += (first ? "" : ", ") + Json(k).dump() + ": " + compact(v);
            first = false;
        }
        return out + "}";
    }
    return j.dump();
}

template <class Json>
void pretty(std::string& out, const Json& j, std::size_t indent) {
    auto line = compact(j);
    if (line.size() + indent <= 100 || !(j.is_array() || j.is_object()) || j.empty()) {
        out += line;
        return;
    }
    const std::string pad(indent + 2, ' ');
    out += j.is_array() ? "[\n" : "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
        out += first ? "" : ",\n";
        first = false;
        out += pad;
        if (j.is_object()) out += Json(k).dump() + ": ";
        pretty(out, v, indent + 2);
    }
    out += "\n" + std::string(indent, ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string format_json(const nlohmann::ordered_json& j) {
    std::string out;
    pretty(out, j, 0);
    return out + "\n";
}

std::string format_json(const nlohmann::json& j) {
    std::string out;
    pretty(out, j, 0);
    return out + "\n";
}

MarketDocument parse_document(std::string_view text) {
    ojson root;
    try {
        root = ojson::parse(text.begin(), text.end());
    } catch (const ojson::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        std::string detail = e.what();
        if (const auto cut = detail.find(": ", detail.find("column")); cut != std::string::npos) detail.erase(0, cut + 2);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                             detail,
                         line, column);
    }
    expect_object(root, "$", {"format_version", "states", "grid", "assets", "index_system", "filtrations"}, {"delays"});
    if (expect_int(root["format_version"], "$.format_version") != kFormatVersion)
        fail("$.format_version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");

    MarketDocument doc;
    Market& m = doc.market;
    Names names;

    const auto& states = expect_array(root["states"], "$.states");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto path = at("$.states", i);
        expect_object(states[i], path, {"name", "probability"});
        const auto name = expect_string(states[i]["name"], path + ".name");
        if (!names.states.emplace(name, static_cast<int>(i)).second) fail(path + ".name", "duplicate state \"" + name + "\"");
        m.space.states.push_back(name);
        m.space.probability.push_back(expect_rational(states[i]["probability"], path + ".probability"));
    }
    if (states.empty()) fail("$.states", "at least one state required");

    expect_object(root["grid"], "$.grid", {"n", "n_ext"});
    m.space.n = expect_int(root["grid"]["n"], "$.grid.n");
    m.space.n_ext = expect_int(root["grid"]["n_ext"], "$.grid.n_ext");
    if (m.space.n < 0 || m.space.n_ext < 0 || m.space.n_ext > 10000) fail("$.grid", "grid bounds out of range");

    const auto& assets = root["assets"];
    if (!assets.is_object() || assets.empty()) fail("$.assets", "expected a non-empty object of price tables");
    if (assets.size() > 64) fail("$.assets", "at most 64 assets are supported");
    for (const auto& [id, table] : assets.items()) {
        const auto path = "$.assets." + id;
        names.assets.emplace(id, static_cast<int>(m.asset_ids.size()));
        m.asset_ids.push_back(id);
        PriceTable prices;
        for (std::size_t t = 0; t < expect_array(table, path).size(); ++t) {
            const auto tpath = at(path, t);
            Vec row;
            for (std::size_t w = 0; w < expect_array(table[t], tpath).size(); ++w)
                row.push_back(expect_rational(table[t][w], at(tpath, w)));
            prices.push_back(std::move(row));
        }
        m.prices.push_back(std::move(prices));
    }

    const auto& index_system = expect_array(root["index_system"], "$.index_system");
    for (std::size_t i = 0; i < index_system.size(); ++i)
        m.index_system.push_back(parse_index_set(index_system[i], at("$.index_system", i), names));

    expect_object(root["filtrations"], "$.filtrations", {"grand", "trading"});
    m.grand = parse_filtration(root["filtrations"]["grand"], "$.filtrations.grand", names);
    const auto& trading = expect_array(root["filtrations"]["trading"], "$.filtrations.trading");
    std::vector<std::optional<Filtration>> slots(m.index_system.size());
    for (std::size_t i = 0; i < trading.size(); ++i) {
        const auto path = at("$.filtrations.trading", i);
        expect_object(trading[i], path, {"index_set", "steps"});
        const auto a = parse_index_set(trading[i]["index_set"], path + ".index_set", names);
        const auto k = m.find_index_set(a);
        if (!k) fail(path + ".index_set", m.describe(a) + " is not in the index system");
        if (slots[static_cast<std::size_t>(*k)]) fail(path + ".index_set", "second filtration for " + m.describe(a));
        slots[static_cast<std::size_t>(*k)] = parse_filtration(trading[i]["steps"], path + ".steps", names);
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (!slots[k]) fail("$.filtrations.trading", "no filtration for " + m.describe(m.index_system[k]));
        m.trading.push_back(std::move(*slots[k]));
    }

    if (root.contains("delays")) {
        const auto& delays = root["delays"];
        expect_object(delays, "$.delays", {}, {"information", "execution"});
        if (delays.contains("information")) {
            const auto& list = expect_array(delays["information"], "$.delays.information");
            std::vector<std::optional<StoppingProcess>> family(m.index_system.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto path = at("$.delays.information", i);
                expect_object(list[i], path, {"index_set", "values", "info"});
                const auto a = parse_index_set(list[i]["index_set"], path + ".index_set", names);
                const auto k = m.find_index_set(a);
                if (!k) fail(path + ".index_set", m.describe(a) + " is not in the index system");
                if (family[static_cast<std::size_t>(*k)]) fail(path + ".index_set", "second delay for " + m.describe(a));
                StoppingProcess sp;
                sp.values = parse_values(list[i]["values"], path + ".values", names.num_states());
                sp.info = parse_info(list[i]["info"], path + ".info", names, m, sp.last_time());
                family[static_cast<std::size_t>(*k)] = std::move(sp);
            }
            InformationDelayFamily d;
            for (std::size_t k = 0; k < family.size(); ++k) {
                if (!family[k]) fail("$.delays.information", "no delay for " + m.describe(m.index_system[k]));
                d.delays.push_back(std::move(*family[k]));
            }
            doc.information = std::move(d);
        }
        if (delays.contains("execution")) {
            const auto& list = expect_array(delays["execution"], "$.delays.execution");
            std::vector<std::optional<ExecutionDelay>> family(m.asset_ids.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto path = at("$.delays.execution", i);
                expect_object(list[i], path, {"asset", "values", "info"}, {"cap"});
                const auto id = expect_string(list[i]["asset"], path + ".asset");
                const auto a = m.find_asset(id);
                if (!a) fail(path + ".asset", "unknown asset \"" + id + "\"");
                if (family[static_cast<std::size_t>(*a)]) fail(path + ".asset", "second delay for asset \"" + id + "\"");
                ExecutionDelay d;
                d.process.values = parse_values(list[i]["values"], path + ".values", names.num_states());
                d.process.info = parse_info(list[i]["info"], path + ".info", names, m, m.n_ext());
                if (list[i].contains("cap")) d.cap = expect_int(list[i]["cap"], path + ".cap");
                family[static_cast<std::size_t>(*a)] = std::move(d);
            }
            ExecutionDelayFamily p;
            for (std::size_t a = 0; a < family.size(); ++a) {
                if (!family[a]) fail("$.delays.execution", "no delay for asset \"" + m.asset_ids[a] + "\"");
                p.delays.push_back(std::move(*family[a]));
            }
            doc.execution = std::move(p);
        }
    }
    return doc;
}

ojson document_to_json(const MarketDocument& doc) {
    const Market& m = doc.market;
    ojson root;
    root["format_version"] = kFormatVersion;
    root["states"] = ojson::array();
    for (int s = 0; s < m.num_states(); ++s)
        root["states"].push_back({{"name", m.space.states[static_cast<std::size_t>(s)]},
                                  {"probability", format_rational(m.space.probability[static_cast<std::size_t>(s)])}});
    root["grid"] = {{"n", m.n()}, {"n_ext", m.n_ext()}};
    root["assets"] = ojson::object();
    for (int a = 0; a < m.num_assets(); ++a) {
        ojson table = ojson::array();
        for (const auto& row : m.prices[static_cast<std::size_t>(a)]) table.push_back(rationals(row));
        root["assets"][m.asset_ids[static_cast<std::size_t>(a)]] = std::move(table);
    }
    root["index_system"] = ojson::array();
    for (auto a : m.index_system) root["index_system"].push_back(index_set_json(a, m));
    ojson trading = ojson::array();
    for (std::size_t k = 0; k < m.index_system.size(); ++k)
        trading.push_back({{"index_set", index_set_json(m.index_system[k], m)}, {"steps", filtration_json(m.trading[k], m)}});
    root["filtrations"] = {{"grand", filtration_json(m.grand, m)}, {"trading", std::move(trading)}};

    if (doc.information || doc.execution) {
        ojson delays = ojson::object();
        if (doc.information) {
            ojson list = ojson::array();
            for (std::size_t k = 0; k < doc.information->delays.size(); ++k) {
                const auto& sp = doc.information->delays[k];
                list.push_back({{"index_set", index_set_json(m.index_system[k], m)},
                                {"values", sp.values},
                                {"info", info_json(sp.info, m, sp.last_time())}});
            }
            delays["information"] = std::move(list);
        }
        if (doc.execution) {
            ojson list = ojson::array();
            for (std::size_t a = 0; a < doc.execution->delays.size(); ++a) {
                const auto& d = doc.execution->delays[a];
                ojson entry = {{"asset", m.asset_ids[a]},
                               {"values", d.process.values},
                               {"info", info_json(d.process.info, m, m.n_ext())}};
                if (d.cap) entry["cap"] = *d.cap;
                list.push_back(std::move(entry));
            }
            delays["execution"] = std::move(list);
        }
        root["delays"] = std::move(delays);
    }
    return root;
}

std::string serialize_document(const MarketDocument& doc) { return format_json(document_to_json(doc)); }

std::vector<std::string> validate_document(const MarketDocument& doc) {
    auto issues = validate_market(doc.market);
    if (!issues.empty()) return issues;
    if (doc.information)
        for (auto& s : validate_information_family(doc.market, *doc.information)) issues.push_back(s);
    if (doc.execution)
        for (auto& s : validate_execution_family(doc.market, *doc.execution)) issues.push_back(s);
    return issues;
}

nlohmann::json verdict_to_json(const Market& m, const Verdict& v) {
    using json = nlohmann::json;
    json out;
    out["format_version"] = kFormatVersion;
    out["horizon"] = v.horizon;
    out["states"] = m.space.states;
    const auto list = [](const Vec& x) {
        json a = json::array();
        for (const auto& r : x) a.push_back(format_rational(r));
        return a;
    };
    if (!v.free_lunch()) {
        out["verdict"] = "no_free_lunch";
        out["certificate"] = {{"kind", "martingale_measure"}, {"q", list(v.measure().q)}};
        return out;
    }
    const auto& cert = v.lunch();
    const auto assets = cert.strategy.index_set.members();
    json holdings = json::array();
    for (const auto& interval : cert.strategy.holdings) {
        json per_asset = json::object();
        for (std::size_t j = 0; j < assets.size(); ++j)
            per_asset[m.asset_ids[static_cast<std::size_t>(assets[j])]] = list(interval[j]);
        holdings.push_back(std::move(per_asset));
    }
    json ids = json::array();
    for (int a : assets) ids.push_back(m.asset_ids[static_cast<std::size_t>(a)]);
    out["verdict"] = "free_lunch";
    out["certificate"] = {{"kind", "free_lunch"},
                          {"strategy", {{"index_set", ids}, {"dates", cert.strategy.dates}, {"holdings", holdings}}},
                          {"terminal_wealth", list(cert.terminal_wealth)}};
    return out;
}

}  // namespace freelunch
