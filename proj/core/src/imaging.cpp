#include "rtm/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "rtm/container.hpp"
#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::imaging {
namespace {

using nlohmann::json;

// G(z, x_t) for every transducer t and every node of grid line i.
Eigen::MatrixXcd green_block(double k, std::span<const Point2> transducers, const geometry::SamplingGrid& grid, int i) {
  Eigen::MatrixXcd block(static_cast<Eigen::Index>(transducers.size()), grid.n2);
  for (int j = 0; j < grid.n2; ++j) {
    const Point2 z = grid.node(i, j);
    for (std::size_t t = 0; t < transducers.size(); ++t) {
      block(static_cast<Eigen::Index>(t), j) = specfun::green(k, z, transducers[t]);
    }
  }
  return block;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_writing(const std::filesystem::path& path) {
  File f(std::fopen(path.string().c_str(), "w"));
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

}  // namespace

std::string to_string(ImageKind kind) {
  switch (kind) {
    case ImageKind::ImagPart:
      return "imag";
    case ImageKind::RealPart:
      return "real";
    case ImageKind::Reference:
      return "reference";
    case ImageKind::MultiFrequencySum:
      return "multifrequency";
  }
  return "unknown";
}

ImageKind image_kind_from(const std::string& name) {
  if (name == "imag") return ImageKind::ImagPart;
  if (name == "real") return ImageKind::RealPart;
  if (name == "reference") return ImageKind::Reference;
  if (name == "multifrequency") return ImageKind::MultiFrequencySum;
  throw ValidationError("unknown image kind '" + name + "'");
}

void Image::validate() const {
  grid.validate();
  if (values.rows() != grid.n1 || values.cols() != grid.n2) throw ValidationError("image values do not match its grid");
  if (!values.allFinite()) throw ComputeError("image contains non-finite values");
}

void check_grid(const geometry::SamplingGrid& grid, const geometry::AcquisitionGeometry& acquisition) {
  grid.validate();
  const double inner = std::min(acquisition.source_radius, acquisition.receiver_radius);
  const Point2 corners[] = {{grid.x1_min, grid.x2_min},
                            {grid.x1_min, grid.x2_max},
                            {grid.x1_max, grid.x2_min},
                            {grid.x1_max, grid.x2_max}};
  for (const Point2& c : corners) {
    if (!(distance(c, acquisition.center) < inner)) {
      throw ValidationError("sampling grid must lie strictly inside both transducer circles");
    }
  }
}

Correlation correlate(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par) {
  data.validate();
  check_grid(grid, data.acquisition);
  const auto& acq = data.acquisition;
  const std::vector<Point2> sources = acq.sources();
  const std::vector<Point2> receivers = acq.receivers();
  const bool shared = acq.coincident();
  const double weight = acq.source_weight() * acq.receiver_weight();
  // conj(M)^T: the receiver contraction is hoisted into one product per grid line.
  const Eigen::MatrixXcd adjoint = data.data.adjoint();

  Correlation out;
  out.grid = grid;
  out.k = data.k;
  out.values.resize(grid.n1, grid.n2);
  parallel_for(grid.n1, par, [&](int i) {
    const Eigen::MatrixXcd at_receivers = green_block(data.k, receivers, grid, i);
    const Eigen::MatrixXcd at_sources = shared ? at_receivers : green_block(data.k, sources, grid, i);
    const Eigen::MatrixXcd contracted = adjoint * at_receivers;  // Ns x n2
    for (int j = 0; j < grid.n2; ++j) {
      out.values(i, j) = weight * at_sources.col(j).cwiseProduct(contracted.col(j)).sum();
    }
  });
  return out;
}

Image imaginary_image(const Correlation& c) {
  Image img;
  img.grid = c.grid;
  img.kind = ImageKind::ImagPart;
  img.wavenumbers = {c.k};
  img.values = -c.k * c.k * c.values.imag();
  return img;
}

Image real_image(const Correlation& c) {
  Image img;
  img.grid = c.grid;
  img.kind = ImageKind::RealPart;
  img.wavenumbers = {c.k};
  img.values = -c.k * c.k * c.values.real();
  return img;
}

Image rtm_image(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par) {
  return imaginary_image(correlate(data, grid, par));
}

Image rtm_image_real(const msr::MsrMatrix& data, const geometry::SamplingGrid& grid, const Parallelism& par) {
  return real_image(correlate(data, grid, par));
}

Complex backpropagate(const msr::MsrMatrix& data, const Point2& z, int source_index) {
  data.validate();
  if (source_index < 0 || source_index >= data.acquisition.n_sources) throw ValidationError("source index out of range");
  if (!(distance(z, data.acquisition.center) < data.acquisition.receiver_radius)) {
    throw ValidationError("back-propagation point must lie inside the receiver circle");
  }
  Complex sum{0.0, 0.0};
  for (int r = 0; r < data.acquisition.n_receivers; ++r) {
    sum += specfun::green(data.k, z, data.acquisition.receiver(r)) * std::conj(data.data(r, source_index));
  }
  return -data.acquisition.receiver_weight() * sum;
}

Image multi_frequency_image(std::span<const Image> images) {
  if (images.empty()) throw ValidationError("multi-frequency sum needs at least one image");
  Image sum;
  sum.grid = images[0].grid;
  sum.kind = ImageKind::MultiFrequencySum;
  sum.values = Eigen::MatrixXd::Zero(sum.grid.n1, sum.grid.n2);
  for (const Image& img : images) {
    if (!(img.grid == sum.grid)) throw ValidationError("multi-frequency sum needs images on identical grids");
    img.validate();
    sum.values += img.values;
    sum.wavenumbers.insert(sum.wavenumbers.end(), img.wavenumbers.begin(), img.wavenumbers.end());
  }
  return sum;
}

std::vector<SectionPoint> cross_section(const Image& image, Axis axis, double coordinate) {
  image.validate();
  const auto& g = image.grid;
  std::vector<SectionPoint> out;
  if (axis == Axis::X1) {
    if (coordinate < g.x1_min || coordinate > g.x1_max) throw ValidationError("cross-section coordinate outside the grid");
    const int i = static_cast<int>(std::lround((coordinate - g.x1_min) / g.spacing1()));
    for (int j = 0; j < g.n2; ++j) out.push_back({g.node(i, j).x2, image.values(i, j)});
  } else {
    if (coordinate < g.x2_min || coordinate > g.x2_max) throw ValidationError("cross-section coordinate outside the grid");
    const int j = static_cast<int>(std::lround((coordinate - g.x2_min) / g.spacing2()));
    for (int i = 0; i < g.n1; ++i) out.push_back({g.node(i, j).x1, image.values(i, j)});
  }
  return out;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  image.validate();
  container::Document doc;
  doc.magic = container::kImageMagic;
  doc.rows = static_cast<std::uint32_t>(image.grid.n1);
  doc.cols = static_cast<std::uint32_t>(image.grid.n2);
  doc.payload.reserve(image.grid.size());
  for (int i = 0; i < image.grid.n1; ++i) {
    for (int j = 0; j < image.grid.n2; ++j) doc.payload.push_back(image.values(i, j));
  }
  const auto& g = image.grid;
  const json meta = {{"grid", {{"x1_min", g.x1_min}, {"x1_max", g.x1_max}, {"x2_min", g.x2_min}, {"x2_max", g.x2_max}}},
                     {"kind", to_string(image.kind)},
                     {"wavenumbers", image.wavenumbers}};
  doc.metadata = meta.dump();
  container::write_file(path, doc);
}

Image load_image(const std::filesystem::path& path) {
  const container::Document doc = container::read_file(path, container::kImageMagic);
  Image img;
  try {
    const json meta = json::parse(doc.metadata);
    const json& g = meta.at("grid");
    img.grid = {g.at("x1_min").get<double>(), g.at("x1_max").get<double>(), g.at("x2_min").get<double>(),
                g.at("x2_max").get<double>(), static_cast<int>(doc.rows), static_cast<int>(doc.cols)};
    img.kind = image_kind_from(meta.at("kind").get<std::string>());
    img.wavenumbers = meta.at("wavenumbers").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError("'" + path.string() + "': malformed image trailer: " + e.what());
  } catch (const ValidationError& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
  img.values.resize(doc.rows, doc.cols);
  for (std::uint32_t i = 0; i < doc.rows; ++i) {
    for (std::uint32_t j = 0; j < doc.cols; ++j) img.values(i, j) = doc.payload[i * doc.cols + j];
  }
  try {
    img.validate();
  } catch (const std::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
  return img;
}

void write_csv(const Image& image, const std::filesystem::path& path) {
  image.validate();
  const File f = open_for_writing(path);
  std::fprintf(f.get(), "x1,x2,value\n");
  for (int i = 0; i < image.grid.n1; ++i) {
    for (int j = 0; j < image.grid.n2; ++j) {
      const Point2 z = image.grid.node(i, j);
      std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", z.x1, z.x2, image.values(i, j));
    }
  }
  if (std::ferror(f.get())) throw IoError("failed writing '" + path.string() + "'");
}

void write_section_csv(std::span<const SectionPoint> section, const std::filesystem::path& path) {
  const File f = open_for_writing(path);
  std::fprintf(f.get(), "position,value\n");
  for (const auto& p : section) std::fprintf(f.get(), "%.17g,%.17g\n", p.position, p.value);
  if (std::ferror(f.get())) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace rtm::imaging
