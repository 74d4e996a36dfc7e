#include "detail.hpp"

#include <cmath>

namespace adhm::detail {

std::vector<CMat> anti_hermitian_basis(Eigen::Index n) {
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(n * n));
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = cplx(0, 1);
    out.push_back(e);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      CMat re = CMat::Zero(n, n);
      re(i, j) = s;
      re(j, i) = -s;
      out.push_back(re);
      CMat im = CMat::Zero(n, n);
      im(i, j) = cplx(0, s);
      im(j, i) = cplx(0, s);
      out.push_back(im);
    }
  }
  return out;
}

std::vector<CMat> hermitian_basis(Eigen::Index n) {
  std::vector<CMat> out = anti_hermitian_basis(n);
  for (auto& m : out) m *= cplx(0, -1);
  return out;
}

void push_real(std::vector<double>& out, const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  }
}

void push_hermitian(std::vector<double>& out, const CMat& h) {
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.push_back(h(i, i).real());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) {
      out.push_back(s * h(i, j).real());
      out.push_back(s * h(i, j).imag());
    }
  }
}

RMat columns_to_matrix(const std::vector<std::vector<double>>& cols) {
  if (cols.empty()) return RMat(0, 0);
  RMat out(static_cast<Eigen::Index>(cols.front().size()),
           static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < cols[j].size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
    }
  }
  return out;
}

}  // namespace adhm::detail
