#ifndef CAUSALCAST_RNG_HPP
#define CAUSALCAST_RNG_HPP

#include <cstdint>
#include <vector>

namespace causalcast {

// Counter-based generator (splitmix64 core). Streams are cheap to fork:
// derive_seed(seed, k) opens an independent stream, which is how sample
// paths, units and epochs get reproducible sub-streams.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double next_double();

    // Uniform on (0, 1]; safe to feed into log().
    double next_open_double();

    double next_normal();

    // Marsaglia-Tsang; shape > 0, unit scale.
    double next_gamma(double shape);

    double next_chisq(double dof) { return 2.0 * next_gamma(dof / 2.0); }

    // Location-scale Student's t via normal / sqrt(chisq/nu).
    double next_student_t(double nu);

    std::uint64_t next_index(std::uint64_t bound);  // uniform on [0, bound)

    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(next_index(i + 1));
            std::swap(v[i], v[j]);
        }
    }

  private:
    std::uint64_t state_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

// Hash-combines (seed, stream) into a new seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace causalcast

#endif
