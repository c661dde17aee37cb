// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace hfhom::detail
{

/// out_j = sum_q in_q e^{+2 pi i q j / M}
void fft_backward(std::vector<std::complex<double>> &data);
/// out_q = sum_j in_j e^{-2 pi i q j / M}
void fft_forward(std::vector<std::complex<double>> &data);

}  // namespace hfhom::detail
