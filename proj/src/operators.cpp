#include "lorentz_ops/operators.hpp"

#include <stdexcept>

#include "lorentz_ops/verdict.hpp"

namespace lorentz_ops {

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Mu:
      return "Mu";
    case OperatorKind::Ct:
      return "Ct";
    case OperatorKind::Wut:
      return "Wut";
    case OperatorKind::WutHat:
      return "WutHat";
  }
  return "?";
}

OperatorKind parse_operator_kind(const std::string& text) {
  if (text == "Mu" || text == "multiplication") return OperatorKind::Mu;
  if (text == "Ct" || text == "composition") return OperatorKind::Ct;
  if (text == "Wut" || text == "weighted") return OperatorKind::Wut;
  if (text == "WutHat" || text == "weighted_hat") return OperatorKind::WutHat;
  throw ValidationError("unknown operator kind '" + text + "'");
}

std::string to_string(BoundednessReport::Verdict v) {
  switch (v) {
    case BoundednessReport::Verdict::Bounded:
      return "Bounded";
    case BoundednessReport::Verdict::NotBounded:
      return "NotBounded";
    case BoundednessReport::Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Exact:
      return "Exact";
    case VerdictKind::AtMost:
      return "AtMost";
    case VerdictKind::AtLeast:
      return "AtLeast";
    case VerdictKind::InfiniteCertified:
      return "InfiniteCertified";
    case VerdictKind::SymbolicInfinite:
      return "SymbolicInfinite";
    case VerdictKind::Unknown:
      return "Unknown";
    case VerdictKind::NotFound:
      return "NotFound";
    case VerdictKind::NoBoundFound:
      return "NoBoundFound";
    case VerdictKind::Refused:
      return "Refused";
    case VerdictKind::Equal:
      return "Equal";
    case VerdictKind::SubsetOnly:
      return "SubsetOnly";
  }
  return "?";
}

std::string to_string(const Verdict& v) {
  std::string out = to_string(v.kind);
  if (v.kind == VerdictKind::Refused) return out + "(" + v.hypothesis + ")";
  if (v.k) out += "(" + std::to_string(*v.k) + ")";
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t l = 0; l < a.cols; ++l) {
      const ComplexRational& x = a(i, l);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        if (!b(l, j).is_zero()) out(i, j) += x * b(l, j);
      }
    }
  }
  return out;
}

std::vector<ComplexRational> operator*(const Matrix& a, const std::vector<ComplexRational>& v) {
  if (a.cols != v.size()) throw std::invalid_argument("matrix shape mismatch");
  std::vector<ComplexRational> out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (!a(i, j).is_zero() && !v[j].is_zero()) out[i] += a(i, j) * v[j];
    }
  }
  return out;
}

Matrix power(const Matrix& a, unsigned k) {
  Matrix out = Matrix::identity(a.rows);
  for (unsigned i = 0; i < k; ++i) out = out * a;
  return out;
}

Matrix matrix(const OperatorSpec<FiniteSpace>& op) {
  const FiniteSpace& X = op.space;
  std::size_t n = X.size();
  Matrix m(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t tx = op.T.image[x];
    switch (op.kind) {
      case OperatorKind::Mu:
        m(x, x) = op.u.values[x];
        break;
      case OperatorKind::Ct:
        m(x, tx) = 1;
        break;
      case OperatorKind::Wut:
        m(x, tx) = op.u.values[tx];
        break;
      case OperatorKind::WutHat:
        m(x, tx) = op.u.values[x];
        break;
    }
  }
  return m;
}

std::vector<ComplexRational> to_vector(const FiniteSpace& X, const SimpleFunction<FiniteSpace>& f) {
  std::vector<ComplexRational> v(X.size());
  for (const auto& [c, a] : f.pieces) {
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (a.bits[i]) v[i] += c;
    }
  }
  return v;
}

SimpleFunction<FiniteSpace> from_vector(const FiniteSpace& X, const std::vector<ComplexRational>& v) {
  SimpleFunction<FiniteSpace> f;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!v[i].is_zero()) f.pieces.emplace_back(v[i], make_atom_set(X, {i}));
  }
  return normalize(X, f);
}

}  // namespace lorentz_ops
