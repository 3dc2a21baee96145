#pragma once

#include <complex>
#include <iosfwd>
#include <string>

namespace modlift::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCacheEnv = "MODLIFT_CACHE";

enum Exit { kOk = 0, kError = 1, kVerifyFailed = 2 };

struct RunConfig {
    double tol = 1e-10;
    int trunc = 64;
    int threads = 1;
    std::string cache_path;
    std::string format = "text";
    void validate() const;  // throws std::invalid_argument
};

// "a+bi", "bi", "a", "i", "-i"
std::complex<double> parse_complex(const std::string& s);
std::string format_complex(std::complex<double> z);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace modlift::cli
