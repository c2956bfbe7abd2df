#include "voxplane/jacobi.hpp"

#include <cmath>
#include <utility>

namespace voxplane {
namespace {

constexpr double kOffDiagTol = 1e-10;
constexpr int kMaxSweeps = 30;

// One Jacobi rotation zeroing a(p,q), accumulating into v.
void rotate(Mat3& a, Mat3& v, int p, int q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  // tan of the smaller rotation angle
  const double t = std::copysign(1.0, theta) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const double app = a(p, p), aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  const int r = 3 - p - q;  // the remaining axis
  const double arp = a(r, p), arq = a(r, q);
  a(r, p) = a(p, r) = c * arp - s * arq;
  a(r, q) = a(q, r) = s * arp + c * arq;

  for (int i = 0; i < 3; ++i) {
    const double vip = v(i, p), viq = v(i, q);
    v(i, p) = c * vip - s * viq;
    v(i, q) = s * vip + c * viq;
  }
}

double off_diag_norm(const Mat3& a) {
  return std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
}

}  // namespace

EigenSym3 jacobi_eigen_sym3(const Mat3& input) {
  Mat3 a;
  a << input(0, 0), 0.5 * (input(0, 1) + input(1, 0)), 0.5 * (input(0, 2) + input(2, 0)),
      0.0, input(1, 1), 0.5 * (input(1, 2) + input(2, 1)),
      0.0, 0.0, input(2, 2);
  a(1, 0) = a(0, 1);
  a(2, 0) = a(0, 2);
  a(2, 1) = a(1, 2);

  Mat3 v = Mat3::Identity();
  for (int sweep = 0; sweep < kMaxSweeps && off_diag_norm(a) >= kOffDiagTol; ++sweep) {
    rotate(a, v, 0, 1);
    rotate(a, v, 0, 2);
    rotate(a, v, 1, 2);
  }

  EigenSym3 out;
  out.eigenvalues = a.diagonal();
  out.eigenvectors = v;

  // sort ascending, swapping columns alongside
  int order[3] = {0, 1, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (out.eigenvalues[order[j]] < out.eigenvalues[order[i]])
        std::swap(order[i], order[j]);
  const Vec3 vals = out.eigenvalues;
  const Mat3 vecs = out.eigenvectors;
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues[k] = vals[order[k]];
    out.eigenvectors.col(k) = vecs.col(order[k]);
  }
  // keep the basis right-handed
  if (out.eigenvectors.determinant() < 0.0) out.eigenvectors.col(2) = -out.eigenvectors.col(2);
  return out;
}

}  // namespace voxplane
