#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "knapcrack/matrix.hpp"

namespace knapcrack {

struct KernelFeatures {
  std::size_t dim = 0;            // s, number of kernel basis columns
  double volume = 0.0;            // sqrt(det(D^T D))
  std::vector<double> semi_axes;  // descending
  double mve_volume = 0.0;
  double lambda_tilde = 0.0;
  double d = 0.0;
  double d_tilde = 0.0;
  bool cut = false;
  bool success = false;
};

// sqrt(det(D^T D)) from the exact integer Gram determinant. Throws
// RankDeficient for dependent columns.
double lattice_volume(const IntMatrix& D);

// s x s matrix S (row-major) with S^T S = D^T D, taken as Sigma V^T from the
// thin SVD D = U Sigma V^T.
std::vector<std::vector<double>> project_preserving_gram(const IntMatrix& D);

struct Ellipsoid {
  std::vector<double> semi_axes;  // descending
  double volume = 0.0;
  std::vector<double> center;     // D (1/2, ..., 1/2)
};

// Minimum-volume ellipsoid around {D z : z in [0,1]^s}. It is the image of
// the cube's circumscribed ball, so its semi-axes are (sqrt(s)/2) sigma_i.
Ellipsoid min_volume_ellipsoid(const IntMatrix& D);

double unit_ball_volume(std::size_t s);
// mve_volume / volume for any s-dimensional basis.
double gamma(std::size_t s);

// max/min semi-axis of the ellipsoid of the column-normalized basis.
double lambda_tilde(const IntMatrix& D);
// Frobenius norm of the off-diagonal part of D^T D.
double rect_distance(const IntMatrix& D);
// rect_distance of the column-normalized basis.
double rect_distance_normalized(const IntMatrix& D);

KernelFeatures kernel_features(const IntMatrix& D);

struct FeatureRecord {
  std::string instance_id;
  std::size_t m = 0;
  std::size_t n = 0;
  std::string t;        // chained scenarios join their values with ';'
  std::string modulus;
  KernelFeatures features;
};

// Header plus one row per record; ax columns are padded to the widest
// kernel. Throws IoFailure when the file cannot be written.
void export_features_csv(const std::vector<FeatureRecord>& records, const std::string& path);
std::string features_csv(const std::vector<FeatureRecord>& records);

}  // namespace knapcrack
