#pragma once

#include <string>
#include <vector>

#include "agds/operator_core.hpp"

namespace agds {

/// Stacked operator C = (C_0; C_1; ...) on X_0 together with its spaces.
/// The generator C_{generator} defines the graph space X_1; the remaining
/// components are bounded on X_1.
struct GradDivSystem {
  SpacePtr x0;
  GraphSpace x1;
  std::vector<LinOp> components;
  std::vector<std::string> labels;
  std::size_t generator = 0;
  SpacePtr y;                 ///< direct sum of the component codomains
  std::vector<Index> offsets; ///< start of component k inside y
  LinOp stacked;              ///< X_0 -> Y

  const LinOp& generator_op() const { return components.at(generator); }
};

/// Stacks a generator followed by bounded components.
GradDivSystem stack(const LinOp& c0, const std::vector<LinOp>& bounded);

/// Stacks components in the given order with an arbitrary generator position.
GradDivSystem stack_ordered(const std::vector<LinOp>& components, std::size_t generator,
                            std::vector<std::string> labels = {});

/// Row-wise adjoint: horizontal concatenation of the X_0 representatives of
/// the component adjoints, Y -> X_0.
LinOp row_adjoint(const GradDivSystem& sys);

/// Block operator [[0, -C*], [C, 0]] on X_0 + Y.
struct BlockSkewOp {
  LinOp a;
  SpacePtr h;
  std::vector<Index> offsets;     ///< block starts: X_0 first, then each Y component
  std::vector<Index> sizes;
  std::vector<std::string> labels;
};

BlockSkewOp block_skew(const GradDivSystem& sys);

/// Largest |<Au|v> + <u|Av>| / (|u||v|) over random pairs.
double skew_defect(const BlockSkewOp& a, int pairs, unsigned seed);

/// Result of comparing a stacked system against an interior operator.
struct RestrictionReport {
  double containment_violation = 0.0;  ///< |C_1 E - interior| and |C_k E|, k>=2
  double adjoint_violation = 0.0;      ///< max |<C*y|Ex> - <(C_1)*y_1|x>| normalized
};

/// Checks that the system restricted to an embedded subspace V_0 -> X_0 reduces
/// to the given interior operator and annihilates the remaining components.
/// Throws WitnessError when the containment fails.
RestrictionReport restriction_check(const GradDivSystem& sys, const LinOp& interior,
                                    const LinOp& embedding, double tol = 1e-12);

}  // namespace agds
