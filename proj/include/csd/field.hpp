#pragma once

#include <array>
#include <span>
#include <utility>

#include "csd/common.hpp"
#include "csd/grid.hpp"

namespace csd {

/// One complex-valued function sampled on a Grid. Also used for fields that
/// are real in content (currents, gauge components); reality is an invariant
/// checked where it matters, not a storage distinction.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid_(g), v_(g.size(), cplx{0.0, 0.0}) {}
    ScalarField(const Grid& g, cplx fill) : grid_(g), v_(g.size(), fill) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }

    cplx* data() { return v_.data(); }
    const cplx* data() const { return v_.data(); }
    std::span<cplx> values() { return {v_.data(), v_.size()}; }
    std::span<const cplx> values() const { return {v_.data(), v_.size()}; }

    cplx& operator()(int ix, int iy) { return v_[std::size_t(ix) * grid_.n + iy]; }
    const cplx& operator()(int ix, int iy) const { return v_[std::size_t(ix) * grid_.n + iy]; }
    cplx& operator[](std::size_t i) { return v_[i]; }
    const cplx& operator[](std::size_t i) const { return v_[i]; }

  private:
    Grid grid_;
    aligned_vector<cplx> v_;
};

/// Fixed number of scalar components sharing one grid.
template <int NC>
class MultiField {
  public:
    MultiField() = default;
    explicit MultiField(const Grid& g) {
        for (auto& c : comp_) c = ScalarField(g);
    }

    const Grid& grid() const { return comp_[0].grid(); }
    std::size_t size() const { return comp_[0].size(); }
    static constexpr int ncomp = NC;

    ScalarField& comp(int c) { return comp_[c]; }
    const ScalarField& comp(int c) const { return comp_[c]; }

  private:
    std::array<ScalarField, NC> comp_;
};

/// 2-component complex spinor field.
using SpinorField = MultiField<2>;
/// 2-component vector field (real content).
using VectorField = MultiField<2>;

}  // namespace csd
