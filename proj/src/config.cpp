#include "bwe/config.hpp"

#include <charconv>
#include <cmath>

#include "bwe/error.hpp"

namespace bwe {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::string_view(" \t\r").find(s.front()) != std::string_view::npos) s.remove_prefix(1);
    while (!s.empty() && std::string_view(" \t\r").find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
    KeyValueConfig cfg;
    cfg.source_ = std::string(source);
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        std::string_view line = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::Config, cfg.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw Error(ErrorCode::Config, cfg.source_ + ":" + std::to_string(line_no) + ": empty key");
        if (!cfg.values_.emplace(key, value).second) {
            throw Error(ErrorCode::Config, cfg.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    double out = 0.0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size() || !std::isfinite(out)) {
        throw Error(ErrorCode::Config, source_ + ": key '" + key + "' expects a number, got '" + *v + "'");
    }
    return out;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    long out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
        throw Error(ErrorCode::Config, source_ + ": key '" + key + "' expects an integer, got '" + *v + "'");
    }
    return out;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
        throw Error(ErrorCode::Config, source_ + ": key '" + key + "' expects a non-negative integer, got '" + *v + "'");
    }
    return out;
}

void KeyValueConfig::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (!allowed.contains(key)) throw Error(ErrorCode::Config, source_ + ": unknown key '" + key + "'");
    }
}

}  // namespace bwe
