#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace entprof {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AttributeKind { Text, Numeric };

std::string_view to_string(AttributeKind kind);
AttributeKind parse_attribute_kind(std::string_view text);

struct Missing {
    friend bool operator==(Missing, Missing) { return true; }
    friend auto operator<=>(Missing, Missing) = default;
};

// A single cell. Empty CSV cells load as Missing, never as empty Text.
class AttributeValue {
public:
    AttributeValue() = default;
    static AttributeValue text(std::string s) { return AttributeValue(Storage{std::move(s)}); }
    static AttributeValue number(double x);

    bool is_missing() const { return std::holds_alternative<Missing>(v_); }
    bool is_text() const { return std::holds_alternative<std::string>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }

    const std::string& as_text() const { return std::get<std::string>(v_); }
    double as_number() const { return std::get<double>(v_); }

    bool matches(AttributeKind kind) const {
        return is_missing() || (kind == AttributeKind::Text ? is_text() : is_number());
    }

    // Cell text: shortest round-trip decimal for numbers, empty for Missing.
    std::string to_cell() const;

    friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
    // Missing < numbers < text; used for deterministic tie-breaks.
    friend auto operator<=>(const AttributeValue& a, const AttributeValue& b) { return a.v_ <=> b.v_; }

private:
    using Storage = std::variant<Missing, double, std::string>;
    explicit AttributeValue(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

// Shortest decimal string that parses back to exactly x.
std::string format_number(double x);
// Parses a full-string finite decimal; returns false on any trailing garbage.
bool parse_number(std::string_view text, double& out);

// Parses a cell under the given kind. Throws Error on non-numeric text in a numeric column.
AttributeValue parse_cell(std::string_view cell, AttributeKind kind);

}  // namespace entprof
