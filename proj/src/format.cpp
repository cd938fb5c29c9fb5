#include "bwe/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace bwe {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), res.ptr};
}

std::string format_fixed(double value, int digits) {
    if (!std::isfinite(value)) return format_number(value);
    std::array<char, 128> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, digits);
    return {buf.data(), res.ptr};
}

}  // namespace bwe
