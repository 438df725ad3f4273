#include "entprof/value.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace entprof {

std::string_view to_string(AttributeKind kind) {
    return kind == AttributeKind::Text ? "text" : "numeric";
}

AttributeKind parse_attribute_kind(std::string_view text) {
    if (text == "text" || text == "string") return AttributeKind::Text;
    if (text == "numeric" || text == "number" || text == "real") return AttributeKind::Numeric;
    throw Error("unknown attribute kind '" + std::string(text) + "'");
}

AttributeValue AttributeValue::number(double x) {
    if (!std::isfinite(x)) throw Error("numeric attribute value must be finite");
    return AttributeValue(Storage{x});
}

std::string AttributeValue::to_cell() const {
    if (is_missing()) return {};
    if (is_text()) return as_text();
    return format_number(as_number());
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // drop negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

bool parse_number(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

AttributeValue parse_cell(std::string_view cell, AttributeKind kind) {
    if (cell.empty()) return AttributeValue{};
    if (kind == AttributeKind::Text) return AttributeValue::text(std::string(cell));
    double x = 0.0;
    if (!parse_number(cell, x)) throw Error("non-numeric value '" + std::string(cell) + "'");
    return AttributeValue::number(x);
}

}  // namespace entprof
