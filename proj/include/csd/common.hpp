#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace csd {

using cplx = std::complex<double>;

constexpr double pi = 3.141592653589793238462643383279502884;

/// Allocator with 64-byte alignment so field buffers satisfy FFTW's SIMD
/// alignment regardless of how the surrounding vector was obtained.
template <class T>
struct AlignedAlloc {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAlloc() = default;
    template <class U>
    AlignedAlloc(const AlignedAlloc<U>&) {}

    T* allocate(std::size_t n) {
        void* p = ::operator new[](n * sizeof(T), std::align_val_t{alignment});
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete[](p, std::align_val_t{alignment});
    }
    bool operator==(const AlignedAlloc&) const { return true; }
    bool operator!=(const AlignedAlloc&) const { return false; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAlloc<T>>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a field norm exceeds the blow-up threshold or turns non-finite.
struct BlowUpError : std::runtime_error {
    double time;
    explicit BlowUpError(double t, const std::string& what)
        : std::runtime_error(what), time(t) {}
};

/// splitmix64; used to derive independent per-trial seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(a ^ mix_seed(b));
}

}  // namespace csd
