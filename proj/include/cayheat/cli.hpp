#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cayheat {

/// Batch configuration; the seed fully determines all randomness, so an
/// identical config reproduces report files byte for byte.
struct RunConfig {
    std::string spec;  // path to a spec file, or a bundled name (hexagonal, klein_bottle, z1, z2)
    std::vector<int> ns;
    double t_min = 0.05;
    double t_max = 10.0;
    int t_points = 40;
    double t_kernel = 1.0;
    double eps = 1e-10;
    int trials = 20;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::optional<double> c_target;
    std::optional<double> k_override;
    int threads = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;   // a checked criterion or validation failed
inline constexpr int kExitUsage = 2;    // bad arguments or I/O

int cmd_validate(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_kernel(const RunConfig& cfg);
int cmd_words(const RunConfig& cfg);

}  // namespace cayheat
