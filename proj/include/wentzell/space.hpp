#ifndef WENTZELL_SPACE_HPP
#define WENTZELL_SPACE_HPP

#include <string>

#include "wentzell/dense.hpp"

namespace wentzell {

enum class SpaceKind { FullGrid, InteriorGrid, Boundary, ModeSpace, Product };

/// A space tag: the kind of discrete space plus its dimension.
/// Product always means InteriorGrid x Boundary in that order.
struct Space {
  SpaceKind kind = SpaceKind::FullGrid;
  std::size_t dim = 0;

  bool operator==(const Space&) const = default;
};

std::string to_string(const Space& s);

/// A dense matrix tagged with domain and codomain spaces. Composition and
/// application check the tags; a mismatch is a programming error surfaced
/// as TagMismatch.
struct LinOp {
  Matrix mat;
  Space domain;
  Space codomain;

  LinOp() = default;
  LinOp(Matrix m, Space dom, Space cod);

  Vector apply(const Vector& v) const;

  LinOp operator+(const LinOp& rhs) const;
  LinOp operator-(const LinOp& rhs) const;
};

/// Composition: (a * b)(x) = a(b(x)). Requires b.codomain == a.domain.
LinOp operator*(const LinOp& a, const LinOp& b);

}  // namespace wentzell

#endif
