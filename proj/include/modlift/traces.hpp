#pragma once

#include "modlift/arith.hpp"

#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace modlift::traces {

using arith::Int;

enum class Kind { CM, Cycle };

// F = J_m; m = 0 is the constant function 1.
struct Key {
    Kind kind;
    int m;
    Int disc;
    auto operator<=>(const Key&) const = default;
};

struct Entry {
    double value = 0;
    double abs_err = 0;
    std::string provenance;
};

// sum over classes Q of disc D < 0 of J_m(z_Q)/|Gamma_Q|
Entry trace_cm(int m, Int disc);
// sum over classes Q of disc D > 0 of the cycle integral of J_m
Entry trace_cycle(int m, Int disc, double tol = 1e-10);

inline constexpr int kSchemaVersion = 1;

// Memoized traces with JSON persistence. Concurrent get() calls for the same
// key compute once.
class TraceTable {
public:
    TraceTable() = default;
    explicit TraceTable(double tol) : tol_(tol) {}

    Entry get(const Key& key);
    Entry get(Kind kind, int m, Int disc) { return get(Key{kind, m, disc}); }
    void prefetch(const std::vector<Key>& keys, int threads);

    bool contains(const Key& key) const;
    std::size_t size() const;
    std::vector<std::pair<Key, Entry>> entries() const;  // ordered by key
    void insert(const Key& key, const Entry& e);

    void save(const std::filesystem::path& path) const;  // atomic replace
    void load(const std::filesystem::path& path);  // merge entries; missing file is not an error
    void export_csv(const std::filesystem::path& path) const;
    std::string to_json() const;

    double tol() const { return tol_; }

private:
    double tol_ = 1e-10;
    mutable std::mutex mu_;
    std::map<Key, std::shared_future<Entry>> slots_;
};

// tr_{J_m}(Delta) = sum_{d | m} (Delta/(m/d)) d tr_J(Delta d^2); m = 0 gives tr_1(Delta).
double twisted_coefficient(TraceTable& table, Int delta, int m);

std::string kind_name(Kind k);
Kind parse_kind(const std::string& s);
std::string format_double(double v);  // 18 significant digits

}  // namespace modlift::traces
