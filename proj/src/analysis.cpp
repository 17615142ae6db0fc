#include "knapcrack/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "knapcrack/csv.hpp"
#include "knapcrack/error.hpp"

namespace knapcrack {

namespace {

double sqrt_of(const Integer& z) {
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  if (exponent % 2 != 0) {
    mantissa *= 2.0;
    --exponent;
  }
  return std::ldexp(std::sqrt(mantissa), static_cast<int>(exponent / 2));
}

double sqrt_of(const Rational& q) { return std::sqrt(q.get_d()); }

void require_full_rank(const IntMatrix& D) {
  if (D.cols() == 0 || rank(D) < D.cols()) throw Error(ErrorCode::RankDeficient, "kernel basis lacks full column rank");
}

Eigen::MatrixXd to_eigen(const IntMatrix& D) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(D.rows()), static_cast<Eigen::Index>(D.cols()));
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = D(i, j).get_d();
  return out;
}

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

Eigen::MatrixXd normalized_columns(const IntMatrix& D) {
  Eigen::MatrixXd m = to_eigen(D);
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) /= m.col(j).norm();
  return m;
}

}  // namespace

double lattice_volume(const IntMatrix& D) {
  require_full_rank(D);
  return sqrt_of(determinant(gram(D)));
}

std::vector<std::vector<double>> project_preserving_gram(const IntMatrix& D) {
  require_full_rank(D);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(D), Eigen::ComputeThinV);
  const Eigen::MatrixXd s = svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(s.rows()),
                                       std::vector<double>(static_cast<std::size_t>(s.cols())));
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s(i, j);
  return out;
}

double unit_ball_volume(std::size_t s) {
  const double h = static_cast<double>(s) / 2.0;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double gamma(std::size_t s) {
  if (s == 0) throw Error(ErrorCode::InvalidParams, "dimension must be positive");
  const double sd = static_cast<double>(s);
  return std::pow(sd, sd / 2.0) / std::pow(2.0, sd - 1.0) / sd * std::pow(std::numbers::pi, sd / 2.0) /
         std::tgamma(sd / 2.0);
}

Ellipsoid min_volume_ellipsoid(const IntMatrix& D) {
  require_full_rank(D);
  const double scale = std::sqrt(static_cast<double>(D.cols())) / 2.0;
  Ellipsoid e;
  e.volume = unit_ball_volume(D.cols());
  for (double sigma : singular_values(to_eigen(D))) {
    e.semi_axes.push_back(scale * sigma);
    e.volume *= scale * sigma;
  }
  e.center.assign(D.rows(), 0.0);
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j) e.center[i] += D(i, j).get_d() / 2.0;
  return e;
}

double lambda_tilde(const IntMatrix& D) {
  require_full_rank(D);
  // Every semi-axis carries the same sqrt(s)/2 factor, which cancels.
  const std::vector<double> s = singular_values(normalized_columns(D));
  return s.front() / s.back();
}

double rect_distance(const IntMatrix& D) {
  const IntMatrix g = gram(D);
  Integer acc = 0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (i != j) acc += g(i, j) * g(i, j);
  return sqrt_of(acc);
}

double rect_distance_normalized(const IntMatrix& D) {
  const IntMatrix g = gram(D);
  Rational acc = 0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (i == j || sgn(g(i, j)) == 0) continue;
      if (sgn(g(i, i)) == 0 || sgn(g(j, j)) == 0) throw Error(ErrorCode::RankDeficient, "zero column");
      acc += Rational(g(i, j) * g(i, j), g(i, i) * g(j, j));
    }
  acc.canonicalize();
  return sqrt_of(acc);
}

KernelFeatures kernel_features(const IntMatrix& D) {
  KernelFeatures f;
  f.dim = D.cols();
  f.volume = lattice_volume(D);
  const Ellipsoid e = min_volume_ellipsoid(D);
  f.semi_axes = e.semi_axes;
  f.mve_volume = e.volume;
  f.lambda_tilde = lambda_tilde(D);
  f.d = rect_distance(D);
  f.d_tilde = rect_distance_normalized(D);
  return f;
}

std::string features_csv(const std::vector<FeatureRecord>& records) {
  std::size_t width = 0;
  for (const auto& r : records) width = std::max(width, r.features.semi_axes.size());
  std::vector<std::string> header{"instance_id", "m", "n", "t", "M", "kernel_dim", "volume", "mve_volume",
                                  "gamma_check"};
  for (std::size_t i = 1; i <= width; ++i) header.push_back("ax" + std::to_string(i));
  for (const char* h : {"lambda_tilde", "d", "d_tilde", "cut", "success"}) header.emplace_back(h);

  std::ostringstream out;
  write_csv_row(out, header);
  for (const auto& r : records) {
    const KernelFeatures& f = r.features;
    const double check = f.volume > 0 ? f.mve_volume / (gamma(f.dim) * f.volume) : 0.0;
    std::vector<std::string> row{r.instance_id,
                                 std::to_string(r.m),
                                 std::to_string(r.n),
                                 r.t,
                                 r.modulus,
                                 std::to_string(f.dim),
                                 format_double(f.volume),
                                 format_double(f.mve_volume),
                                 format_double(check)};
    for (std::size_t i = 0; i < width; ++i)
      row.push_back(i < f.semi_axes.size() ? format_double(f.semi_axes[i]) : std::string());
    row.push_back(format_double(f.lambda_tilde));
    row.push_back(format_double(f.d));
    row.push_back(format_double(f.d_tilde));
    row.emplace_back(f.cut ? "1" : "0");
    row.emplace_back(f.success ? "1" : "0");
    write_csv_row(out, row);
  }
  return out.str();
}

void export_features_csv(const std::vector<FeatureRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  file << features_csv(records);
  if (!file) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

}  // namespace knapcrack
