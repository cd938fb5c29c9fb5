#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace bwe {

/// `key = value` lines; `#` starts a comment. Duplicate keys are an error.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, std::string_view source = "config");

    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] long get_long(const std::string& key, long fallback) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    /// Config error naming the first key outside `allowed`.
    void require_known(const std::set<std::string>& allowed) const;

private:
    std::string source_;
    std::map<std::string, std::string> values_;
};

}  // namespace bwe
