#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace envsdr {

// Stream name recorded in run metadata for reproducibility audits.
inline constexpr const char* kRngName = "mt19937_64/box-muller";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 with an explicit Box-Muller transform so normal draws do not
// depend on the standard library's unspecified std::normal_distribution.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // in (0,1), never exactly 0 or 1
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // uniform integer in [0, bound), bound >= 1, by rejection (unbiased)
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace envsdr
