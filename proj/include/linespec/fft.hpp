#pragma once

#include "linespec/core.hpp"

#include <cstddef>

namespace linespec::fft {

/// out_m = sum_{l<n} in_l e^{-i2 pi l m / N}, m = 0..N-1 (input zero-padded to N).
CVector forward_padded(const CVector& in, std::size_t grid_size);

/// out_j = sum_{m<N} in_m e^{+i2 pi j m / N}, j = 0..N-1. Unnormalized.
CVector backward(const CVector& in);

}  // namespace linespec::fft
