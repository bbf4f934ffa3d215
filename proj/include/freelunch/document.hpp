#pragma once

#include "freelunch/arbitrage.hpp"
#include "freelunch/delay.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace freelunch {

inline constexpr int kFormatVersion = 1;

/// A market together with the delay families stored next to it.
struct MarketDocument {
    Market market;
    std::optional<InformationDelayFamily> information;
    std::optional<ExecutionDelayFamily> execution;
};

/// Malformed JSON. line and column are 1-based.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& what, int line, int column)
        : InvalidInput(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses a document. Throws ParseError for malformed JSON and InvalidInput
/// (with a JSON path) for unknown fields, missing fields, bad rationals,
/// unknown state or asset names and malformed tables. Market invariants are
/// not checked here; see validate_document.
MarketDocument parse_document(std::string_view text);

/// Canonical pretty-printed form; parse_document inverts it exactly.
std::string serialize_document(const MarketDocument& doc);

/// Market invariants plus the invariants of every stored delay family.
std::vector<std::string> validate_document(const MarketDocument& doc);

/// Verdict with its certificate, keys sorted, rationals as "p/q".
nlohmann::json verdict_to_json(const Market& m, const Verdict& v);

/// Compact document as a JSON value (used for reproduction cases).
nlohmann::ordered_json document_to_json(const MarketDocument& doc);

/// Two-space indented JSON where any value that fits in 100 columns stays
/// on one line. Output ends with a newline.
std::string format_json(const nlohmann::ordered_json& j);
std::string format_json(const nlohmann::json& j);

}  // namespace freelunch
