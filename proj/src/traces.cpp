#include "modlift/traces.hpp"

#include "modlift/modfun.hpp"
#include "modlift/qforms.hpp"

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <unistd.h>

namespace modlift::traces {

std::string kind_name(Kind k) { return k == Kind::CM ? "cm" : "cycle"; }

Kind parse_kind(const std::string& s) {
    if (s == "cm") return Kind::CM;
    if (s == "cycle") return Kind::Cycle;
    throw std::invalid_argument("unknown trace kind: " + s);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

Entry trace_cm(int m, Int disc) {
    if (disc >= 0) throw std::invalid_argument("trace_cm: discriminant must be negative");
    double sum = 0, err = 0, imag = 0;
    for (const auto& f : qforms::class_representatives(disc)) {
        auto h = qforms::heegner_point(f);
        auto v = modfun::eval_Jm(m, h.z, 1e-12);
        sum += v.value.real() / h.weight_denominator;
        imag += v.value.imag() / h.weight_denominator;
        err += v.error / h.weight_denominator;
    }
    err += std::abs(imag);
    return {sum, err, "cm m=" + std::to_string(m) + " D=" + std::to_string(disc) + " q-series at reduced Heegner points"};
}

Entry trace_cycle(int m, Int disc, double tol) {
    if (disc <= 0) throw std::invalid_argument("trace_cycle: discriminant must be positive");
    auto reps = qforms::class_representatives(disc);
    std::complex<double> sum = 0;
    double err = 0;
    for (const auto& f : reps) {
        auto v = modfun::faber_cycle_integral(m, f, tol / double(reps.size()));
        sum += v.value;
        err += v.error;
    }
    err += std::abs(sum.imag());
    return {sum.real(), err,
            "cycle m=" + std::to_string(m) + " D=" + std::to_string(disc) + " classes=" + std::to_string(reps.size()) +
                " reduction-cycle arclength quadrature"};
}

Entry TraceTable::get(const Key& key) {
    std::shared_future<Entry> fut;
    std::promise<Entry> prom;
    bool owner = false;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = slots_.find(key);
        if (it != slots_.end()) {
            fut = it->second;
        } else {
            fut = prom.get_future().share();
            slots_.emplace(key, fut);
            owner = true;
        }
    }
    if (owner) {
        try {
            Entry e = key.kind == Kind::CM ? trace_cm(key.m, key.disc) : trace_cycle(key.m, key.disc, tol_);
            prom.set_value(e);
        } catch (...) {
            {
                std::lock_guard<std::mutex> lock(mu_);
                slots_.erase(key);
            }
            prom.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

void TraceTable::prefetch(const std::vector<Key>& keys, int threads) {
    threads = std::max(1, threads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto work = [&] {
        for (std::size_t i; (i = next++) < keys.size();) {
            try {
                get(keys[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

bool TraceTable::contains(const Key& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    return slots_.count(key) > 0;
}

std::size_t TraceTable::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return slots_.size();
}

void TraceTable::insert(const Key& key, const Entry& e) {
    std::promise<Entry> p;
    p.set_value(e);
    std::lock_guard<std::mutex> lock(mu_);
    slots_[key] = p.get_future().share();
}

std::vector<std::pair<Key, Entry>> TraceTable::entries() const {
    std::vector<std::pair<Key, std::shared_future<Entry>>> snap;
    {
        std::lock_guard<std::mutex> lock(mu_);
        snap.assign(slots_.begin(), slots_.end());
    }
    std::vector<std::pair<Key, Entry>> out;
    for (auto& [k, f] : snap) {
        if (f.wait_for(std::chrono::seconds(0)) != std::future_status::ready) continue;
        try {
            out.emplace_back(k, f.get());
        } catch (...) {
        }
    }
    return out;
}

std::string TraceTable::to_json() const {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["entries"] = nlohmann::json::array();
    for (const auto& [k, e] : entries()) {
        j["entries"].push_back({{"kind", kind_name(k.kind)},
                                {"m", k.m},
                                {"disc", k.disc},
                                {"value", format_double(e.value)},
                                {"abs_err", format_double(e.abs_err)},
                                {"provenance", e.provenance}});
    }
    return j.dump(1);
}

void TraceTable::save(const std::filesystem::path& path) const {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write trace cache " + tmp.string());
        os << to_json() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

void TraceTable::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) return;
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("trace cache " + path.string() + " is not valid JSON: " + e.what());
    }
    if (j.value("schema", -1) != kSchemaVersion)
        throw std::runtime_error("trace cache " + path.string() + " has an unsupported schema version");
    for (const auto& e : j.at("entries")) {
        Key k{parse_kind(e.at("kind")), e.at("m").get<int>(), e.at("disc").get<Int>()};
        Entry v{std::strtod(e.at("value").get<std::string>().c_str(), nullptr),
                std::strtod(e.at("abs_err").get<std::string>().c_str(), nullptr), e.value("provenance", "")};
        insert(k, v);
    }
}

void TraceTable::export_csv(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "kind,m,disc,value,abs_err,provenance\n";
    for (const auto& [k, e] : entries())
        os << kind_name(k.kind) << ',' << k.m << ',' << k.disc << ',' << format_double(e.value) << ','
           << format_double(e.abs_err) << ",\"" << e.provenance << "\"\n";
}

double twisted_coefficient(TraceTable& table, Int delta, int m) {
    if (m < 0) throw std::invalid_argument("twisted_coefficient: m must be >= 0");
    if (m == 0) return table.get(Kind::Cycle, 0, delta).value;
    double s = 0;
    for (auto d : arith::divisors(m)) {
        int chi = arith::kronecker(delta, m / d);
        if (chi == 0) continue;
        s += chi * double(d) * table.get(Kind::Cycle, 1, delta * d * d).value;
    }
    return s;
}

}  // namespace modlift::traces
