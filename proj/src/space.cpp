#include "wentzell/space.hpp"

#include <sstream>

namespace wentzell {

std::string to_string(const Space& s) {
  std::ostringstream os;
  switch (s.kind) {
    case SpaceKind::FullGrid: os << "FullGrid"; break;
    case SpaceKind::InteriorGrid: os << "InteriorGrid"; break;
    case SpaceKind::Boundary: os << "Boundary"; break;
    case SpaceKind::ModeSpace: os << "ModeSpace"; break;
    case SpaceKind::Product: os << "Product(InteriorGrid,Boundary)"; break;
  }
  os << "[" << s.dim << "]";
  return os.str();
}

LinOp::LinOp(Matrix m, Space dom, Space cod) : mat(std::move(m)), domain(dom), codomain(cod) {
  if (mat.rows() != codomain.dim || mat.cols() != domain.dim) {
    throw TagMismatch("LinOp: matrix shape " + std::to_string(mat.rows()) + "x" +
                      std::to_string(mat.cols()) + " does not match " + to_string(domain) +
                      " -> " + to_string(codomain));
  }
}

Vector LinOp::apply(const Vector& v) const {
  if (v.size() != domain.dim) {
    throw TagMismatch("LinOp::apply: vector of length " + std::to_string(v.size()) +
                      " is not in " + to_string(domain));
  }
  return mat * v;
}

LinOp LinOp::operator+(const LinOp& rhs) const {
  if (domain != rhs.domain || codomain != rhs.codomain) {
    throw TagMismatch("LinOp +: tags differ: " + to_string(domain) + "->" + to_string(codomain) +
                      " vs " + to_string(rhs.domain) + "->" + to_string(rhs.codomain));
  }
  return LinOp(mat + rhs.mat, domain, codomain);
}

LinOp LinOp::operator-(const LinOp& rhs) const {
  if (domain != rhs.domain || codomain != rhs.codomain) {
    throw TagMismatch("LinOp -: tags differ");
  }
  return LinOp(mat - rhs.mat, domain, codomain);
}

LinOp operator*(const LinOp& a, const LinOp& b) {
  if (b.codomain != a.domain) {
    throw TagMismatch("LinOp *: cannot compose " + to_string(b.domain) + "->" +
                      to_string(b.codomain) + " with " + to_string(a.domain) + "->" +
                      to_string(a.codomain));
  }
  return LinOp(a.mat * b.mat, b.domain, a.codomain);
}

}  // namespace wentzell
