#include "invrof/generator.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "invrof/error.hpp"

namespace invrof {

using cplx = std::complex<double>;

GeneratorMatrix::GeneratorMatrix(Eigen::MatrixXcd entries, double rank_tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw DomainError("GeneratorMatrix: matrix must be square and nonempty");
  if (!entries_.allFinite()) throw DomainError("GeneratorMatrix: entries must be finite");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(entries_);
  const auto& sv = svd.singularValues();
  sigma_max_ = sv(0);
  sigma_min_ = sv(sv.size() - 1);
  injective_ = sigma_min_ > rank_tolerance * sigma_max_ && sigma_min_ > 0.0;

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(entries_);
  schur_q_ = schur.matrixU();
  schur_t_ = schur.matrixT();
  eigenvalues_ = schur_t_.diagonal();
  const double off = schur_t_.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  normal_ = off <= 1e-13 * std::max(schur_t_.norm(), 1e-300);
  if (injective_) inverse_ = entries_.partialPivLu().inverse();
}

GeneratorMatrix GeneratorMatrix::inverse() const { return GeneratorMatrix(inverse_entries()); }

const Eigen::MatrixXcd& GeneratorMatrix::inverse_entries() const {
  if (!injective_) throw HypothesisViolation("generator is not injective");
  return inverse_;
}

GeneratorMatrix diag_generator(std::span<const cplx> diagonal) {
  Eigen::VectorXcd d(diagonal.size());
  for (std::size_t i = 0; i < diagonal.size(); ++i) d(Eigen::Index(i)) = diagonal[i];
  return GeneratorMatrix(d.asDiagonal().toDenseMatrix());
}

GeneratorMatrix jordan_generator(cplx eigenvalue, int size) {
  if (size < 1) throw DomainError("jordan_generator: size must be positive");
  Eigen::MatrixXcd J = eigenvalue * Eigen::MatrixXcd::Identity(size, size);
  for (int i = 0; i + 1 < size; ++i) J(i, i + 1) = 1.0;
  return GeneratorMatrix(J);
}

GeneratorMatrix laplacian_1d(int n, double h, double shift) {
  if (n < 1 || !(h > 0.0)) throw DomainError("laplacian_1d: need n >= 1 and h > 0");
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  const double s = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    L(i, i) = -2.0 * s - shift;
    if (i > 0) L(i, i - 1) = s;
    if (i + 1 < n) L(i, i + 1) = s;
  }
  return GeneratorMatrix(L);
}

namespace {

double parse_double(std::string_view s) {
  std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + buf + "'");
  }
  if (used != buf.size()) throw DomainError("cannot parse number '" + buf + "'");
  return v;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DomainError("cannot parse integer '" + std::string(s) + "'");
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi" (also with j).
cplx parse_complex(std::string_view s) {
  if (s.empty()) throw DomainError("empty complex literal");
  const char last = s.back();
  if (last != 'i' && last != 'j') return parse_double(s);
  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      const std::string_view im = body.substr(k);
      const double imag = im.size() == 1 ? (im[0] == '-' ? -1.0 : 1.0) : parse_double(im);
      return {parse_double(body.substr(0, k)), imag};
    }
  }
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  return {0.0, parse_double(body)};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

GeneratorMatrix parse_generator(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string_view name = parts.front();
  if (name == "diag") {
    if (parts.size() != 2) throw DomainError("diag builder expects diag:<c1>,<c2>,...");
    std::vector<cplx> d;
    for (auto item : split(parts[1], ',')) d.push_back(parse_complex(item));
    return diag_generator(d);
  }
  if (name == "jordan") {
    if (parts.size() != 3) throw DomainError("jordan builder expects jordan:<eigenvalue>:<size>");
    return jordan_generator(parse_complex(parts[1]), parse_int(parts[2]));
  }
  if (name == "laplacian_1d") {
    if (parts.size() < 2 || parts.size() > 4)
      throw DomainError("laplacian_1d builder expects laplacian_1d:<n>[:<h>[:<shift>]]");
    const int n = parse_int(parts[1]);
    const double h = parts.size() > 2 ? parse_double(parts[2]) : 1.0 / (n + 1);
    const double shift = parts.size() > 3 ? parse_double(parts[3]) : 0.0;
    return laplacian_1d(n, h, shift);
  }
  return load_generator_file(std::filesystem::path(std::string(spec)));
}

GeneratorMatrix load_generator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open generator file '" + path.string() + "'");
  int n = 0;
  if (!(in >> n) || n < 1) throw DomainError("generator file: first line must be a positive n");
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw DomainError("generator file: expected n x n complex pairs");
      A(i, j) = {re, im};
    }
  return GeneratorMatrix(A);
}

Eigen::MatrixXcd resolvent(const GeneratorMatrix& A, cplx z) {
  const Eigen::Index n = A.dim();
  const Eigen::MatrixXcd shifted = z * Eigen::MatrixXcd::Identity(n, n) - A.entries();
  const Eigen::MatrixXcd X = shifted.fullPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
  const double residual = (shifted * X - Eigen::MatrixXcd::Identity(n, n)).norm();
  const double scale = std::max(1.0, shifted.norm() * X.norm());
  if (!X.allFinite() || residual > 1e-10 * scale || scale > 1e14)
    throw NearSpectrum("resolvent: z is numerically in the spectrum");
  return X;
}

}  // namespace invrof
