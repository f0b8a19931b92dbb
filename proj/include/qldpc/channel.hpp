#pragma once

#include <optional>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

// X/Z components of a sampled Pauli error; a Y on qubit j sets both bits.
struct PauliErrorPair {
    BinaryVector ex, ez;
};

// One uniform draw per qubit: X on [0, p/3), Y on [p/3, 2p/3), Z on [2p/3, p),
// identity otherwise, so P(ex[j] = 1) = 2p/3 and P(ex[j] = ez[j] = 1) = p/3.
PauliErrorPair sample_pauli_error(std::size_t n, double p, SplitMix64& rng);

// lambda = ln((1 - 2p/3) / (2p/3)) for depolarizing probability p in (0, 1].
// p <= 0 (infinite LLR) is rejected unless the caller supplies a cap, which is
// also applied to any finite value exceeding it.
double prior_llr(double p, std::optional<double> cap = std::nullopt);

std::vector<double> uniform_priors(std::size_t n, double llr);

class DepolarizingChannel {
  public:
    DepolarizingChannel(double p, std::uint64_t seed);

    double p() const { return p_; }
    PauliErrorPair sample(std::size_t n) { return sample_pauli_error(n, p_, rng_); }

  private:
    double p_;
    SplitMix64 rng_;
};

} // namespace qldpc
