#pragma once

#include <Eigen/LU>

#include "qg/chebyshev.hpp"
#include "qg/state.hpp"

namespace qg {

struct SingularTauOperator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves (a D^2 + b) V = rhs in Chebyshev coefficient space with homogeneous
// Dirichlet conditions V(y=0) = V(y=pi) = 0 imposed tau-style: the two highest
// coefficient rows are replaced by the wall conditions. With a parity
// restriction the system acts on one coefficient class only and a single wall
// row suffices.
class TauSolver {
  public:
    TauSolver(int n, Complex a, Complex b, Parity parity = Parity::None);

    CVec solve(const CVec& rhs) const;  // full-length rhs (restricted internally)
    Vec solve(const Vec& rhs) const;

    int activeSize() const { return static_cast<int>(idx_.size()); }

  private:
    int n_;
    Complex a_, b_;
    Parity parity_;
    std::vector<int> idx_;  // active coefficient indices
    CMat op_;               // restricted operator rows (pre tau replacement)
    Eigen::PartialPivLU<CMat> lu_;
};

}  // namespace qg
