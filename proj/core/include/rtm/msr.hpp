#pragma once

// Multistatic response matrix: u_s(x_r, x_s) for point-source illumination,
// receivers along rows and sources along columns.

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "rtm/forward.hpp"
#include "rtm/geometry.hpp"
#include "rtm/parallel.hpp"

namespace rtm::msr {

struct MsrMatrix {
  Eigen::MatrixXcd data;  // Nr x Ns
  geometry::AcquisitionGeometry acquisition;
  double k = 0.0;
  std::string model_tag;

  void validate() const;
  double max_abs() const { return data.size() == 0 ? 0.0 : data.cwiseAbs().maxCoeff(); }
};

/// All transducers must lie outside the obstacles. Columns are solved in
/// parallel and written to their own slots, so the result is independent of
/// the thread count.
MsrMatrix synthesize_msr(const forward::ScattererModel& model, const geometry::AcquisitionGeometry& acquisition,
                         double k, const Parallelism& par = {});

/// Circular complex Gaussian noise with total standard deviation mu * max|u_s|
/// (each real component has std mu * max|u_s| / sqrt 2).
struct NoiseSpec {
  double mu = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws one standard complex normal per entry, row-major, real part first,
/// then scales by mu * max|u_s|. Equal seeds give proportional noise across mu.
MsrMatrix add_noise(const MsrMatrix& clean, const NoiseSpec& spec);

/// Normalized norms ||u||^2 = (1 / (Ns Nr)) sum |u|^2.
struct NoiseStats {
  double sigma = 0.0;        // max |u_s|
  double table_sigma = 0.0;  // mu * max |u_s|
  double l2_signal = 0.0;
  double l2_noise = 0.0;
};
NoiseStats noise_stats(const MsrMatrix& clean, const MsrMatrix& noisy, double mu);

double normalized_l2(const Eigen::MatrixXcd& m);

void save_msr(const MsrMatrix& msr, const std::filesystem::path& path);
MsrMatrix load_msr(const std::filesystem::path& path);

}  // namespace rtm::msr
