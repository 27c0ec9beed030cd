#pragma once

#include <span>

#include "csd/common.hpp"
#include "csd/field.hpp"

namespace csd::fft {

// Unnormalized forward transform (coefficient at mode k is sum_j f_j e^{-2pi i k.j/N});
// the inverse applies the 1/N^2 factor. Buffers must be 64-byte aligned
// (ScalarField storage and aligned_vector are).
//
// The production path runs independent 1D row/column transforms in an OpenMP
// loop; every 1D transform uses a fixed serial FFTW plan, so results are
// bit-identical for any thread count. The serial reference path executes
// FFTW's own 2D plan.

void fft(std::span<cplx> buf, int n);
void ifft(std::span<cplx> buf, int n);

inline void fft(ScalarField& f) { fft(f.values(), f.grid().n); }
inline void ifft(ScalarField& f) { ifft(f.values(), f.grid().n); }

namespace ref {
void fft(std::span<cplx> buf, int n);
void ifft(std::span<cplx> buf, int n);
}  // namespace ref

/// Create the plans for size n up front (optional; plans are otherwise made on
/// first use behind a mutex).
void warmup(int n);

}  // namespace csd::fft
