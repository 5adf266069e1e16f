#pragma once

#include <array>
#include <cstdint>

namespace fraclimit {

//! Philox4x32-10 block function (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

//! Counter-based stream. The key is the master seed; the counter carries
//! (block index, stream index, substream tag). Two streams with different
//! (stream, substream) never overlap, so per-particle streams give results
//! that do not depend on how particles are split across workers.
class RandomStream {
  public:
    using result_type = std::uint32_t;

    RandomStream() = default;
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0,
                 std::uint64_t position = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }

    result_type operator()();

    //! Uniform double in the open interval (0, 1) with 53 random bits.
    double uniform();
    //! Exp(1) variate.
    double exponential();

    //! Number of 32-bit words consumed so far.
    std::uint64_t position() const { return position_; }

  private:
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t stream_ = 0;
    std::uint32_t substream_ = 0;
    std::uint64_t position_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    std::uint64_t buffered_block_ = ~std::uint64_t{0};
};

}  // namespace fraclimit
