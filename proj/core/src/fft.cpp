// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "hfhom/errors.hpp"

namespace hfhom::detail
{

namespace
{

// Planner calls are not thread-safe in FFTW.
std::mutex planner_mutex;

void run(std::vector<std::complex<double>> &data, int sign)
{
  if (data.empty())
    return;
  auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr)
    throw Error(Errc::InvalidArgument, "FFT plan creation failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

}  // namespace

void fft_backward(std::vector<std::complex<double>> &data) { run(data, FFTW_BACKWARD); }
void fft_forward(std::vector<std::complex<double>> &data) { run(data, FFTW_FORWARD); }

}  // namespace hfhom::detail
