#pragma once

#include <string>

#include "csd/field.hpp"

namespace csd::io {

// Field snapshot format, shared by every module:
//   32-byte header: magic "CSDF", format version u32, N u32, L f64, t f64,
//   component count u32; then row-major little-endian complex64 pairs
//   (f64 re, f64 im), one full component after another.

constexpr std::uint32_t snapshot_version = 1;

struct SnapshotMeta {
    std::uint32_t version = 0;
    int n = 0;
    double length = 0.0;
    double time = 0.0;
    int ncomp = 0;
};

void write_snapshot(const std::string& path, const ScalarField& f, double t);
void write_snapshot(const std::string& path, const SpinorField& f, double t);

SnapshotMeta read_snapshot_meta(const std::string& path);
ScalarField read_snapshot_scalar(const std::string& path, double* t = nullptr);
SpinorField read_snapshot_spinor(const std::string& path, double* t = nullptr);

}  // namespace csd::io
