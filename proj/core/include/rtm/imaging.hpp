#pragma once

// Single-frequency RTM imaging from a multistatic response matrix:
//   C(z) = (|Gamma_s| |Gamma_r| / (Ns Nr)) sum_s sum_r G(z,x_s) G(z,x_r) conj(u_s(x_r,x_s))
//   I(z) = -k^2 Im C(z),   the real-part variant is -k^2 Re C(z).

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtm/geometry.hpp"
#include "rtm/msr.hpp"
#include "rtm/parallel.hpp"

namespace rtm::imaging {

enum class ImageKind { ImagPart, RealPart, Reference, MultiFrequencySum };

std::string to_string(ImageKind kind);
ImageKind image_kind_from(const std::string& name);

struct Image {
  geometry::SamplingGrid grid;
  Eigen::MatrixXd values;  // n1 x n2, values(i, j) at grid.node(i, j)
  ImageKind kind = ImageKind::ImagPart;
  std::vector<double> wavenumbers;

  void validate() const;
  double max() const { return values.maxCoeff(); }
  double min() const { return values.minCoeff(); }
};

/// Raw complex correlation C(z) on the grid, kept so both real and imaginary
/// variants come from one pass.
struct Correlation {
  geometry::SamplingGrid grid;
  Eigen::MatrixXcd values;
  double k = 0.0;
};

/// Grid nodes must lie strictly inside both transducer circles and off every transducer.
void check_grid(const geometry::SamplingGrid& grid, const geometry::AcquisitionGeometry& acquisition);

/// Evaluates grid lines in parallel; each node's arithmetic is fixed, so the
/// result does not depend on the thread count.
Correlation correlate(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par = {});

Image imaginary_image(const Correlation& c);
Image real_image(const Correlation& c);

Image rtm_image(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par = {});
Image rtm_image_real(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par = {});

/// v_b(z, x_s) = -(|Gamma_r| / Nr) sum_r G(z, x_r) conj(u_s(x_r, x_s)).
Complex backpropagate(const msr::MsrMatrix& data, const Point2& z, int source_index);

/// Pointwise sum of images on one grid.
Image multi_frequency_image(std::span<const Image> images);

enum class Axis {
  X1,  // line x1 = coordinate, sampled along x2
  X2,  // line x2 = coordinate, sampled along x1
};

struct SectionPoint {
  double position = 0.0;
  double value = 0.0;
};

/// Values along the grid line nearest to `coordinate`.
std::vector<SectionPoint> cross_section(const Image& image, Axis axis, double coordinate);

void save_image(const Image& image, const std::filesystem::path& path);
Image load_image(const std::filesystem::path& path);
/// "x1,x2,value" header, then one row per node.
void write_csv(const Image& image, const std::filesystem::path& path);
/// "position,value" header, then one row per sample.
void write_section_csv(std::span<const SectionPoint> section, const std::filesystem::path& path);

}  // namespace rtm::imaging
