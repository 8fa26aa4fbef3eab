#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

namespace sck {

// Flat "key = value" document with '#' comments; dotted keys group module
// settings (partition.sectors, loss.tau, ...). CLI flags override file
// values by calling set() after load().
class RunConfig {
public:
    static RunConfig load(const std::string& path);
    static RunConfig parse(std::istream& in);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    void save(const std::string& path) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace sck
