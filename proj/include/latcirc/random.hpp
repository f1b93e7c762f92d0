#pragma once

#include <random>

#include "latcirc/circuit.hpp"

namespace latcirc {

struct RandomCircuitLimits {
  std::size_t inputs = 1;
  std::size_t outputs = 1;
  std::size_t max_gates = 4;
  std::size_t max_delays = 3;
  std::size_t max_traces = 2;
  std::size_t max_steps = 8;
  double value_rate = 0.15;
};

/// Random well-typed term inputs→outputs within the limits. Deterministic for
/// a given generator state.
Circuit random_circuit(std::mt19937_64& rng, const Interpretation& interp,
                       const RandomCircuitLimits& limits);

Waveform random_waveform(std::mt19937_64& rng, const Lattice& lattice, std::size_t width,
                         std::size_t ticks);

}  // namespace latcirc
