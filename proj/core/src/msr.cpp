#include "rtm/msr.hpp"

#include <cmath>
#include <random>
#include <string>

#include <json.hpp>

#include "rtm/container.hpp"
#include "rtm/errors.hpp"

namespace rtm::msr {
namespace {

using nlohmann::json;

json acquisition_json(const geometry::AcquisitionGeometry& a) {
  return {{"source_radius", a.source_radius},   {"receiver_radius", a.receiver_radius},
          {"n_sources", a.n_sources},           {"n_receivers", a.n_receivers},
          {"center", {a.center.x1, a.center.x2}}};
}

geometry::AcquisitionGeometry acquisition_from(const json& j) {
  geometry::AcquisitionGeometry a;
  a.source_radius = j.at("source_radius").get<double>();
  a.receiver_radius = j.at("receiver_radius").get<double>();
  a.n_sources = j.at("n_sources").get<int>();
  a.n_receivers = j.at("n_receivers").get<int>();
  a.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
  return a;
}

void check_transducers(const forward::ScattererModel& model, std::span<const Point2> points, const char* what) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (forward::inside_obstacle(model, points[i])) {
      throw ValidationError(std::string(what) + " " + std::to_string(i) + " lies inside or on an obstacle");
    }
  }
}

}  // namespace

void MsrMatrix::validate() const {
  acquisition.validate();
  if (data.rows() != acquisition.n_receivers || data.cols() != acquisition.n_sources) {
    throw ValidationError("MSR dimensions do not match the acquisition geometry");
  }
  if (!(k > 0.0)) throw ValidationError("MSR wavenumber must be positive");
}

MsrMatrix synthesize_msr(const forward::ScattererModel& model, const geometry::AcquisitionGeometry& acquisition,
                         double k, const Parallelism& par) {
  acquisition.validate();
  const std::vector<Point2> sources = acquisition.sources();
  const std::vector<Point2> receivers = acquisition.receivers();
  check_transducers(model, sources, "source");
  check_transducers(model, receivers, "receiver");

  MsrMatrix out;
  out.acquisition = acquisition;
  out.k = k;
  out.model_tag = model.empty() ? "empty" : model.tag();
  out.data = Eigen::MatrixXcd::Zero(acquisition.n_receivers, acquisition.n_sources);

  const forward::Solver solver(model, k, par);
  if (solver.method() == forward::Method::None) return out;

  const Parallelism serial{1};
  if (solver.method() == forward::Method::Boundary) {
    // One factorization, one receiver evaluation matrix, Ns right-hand sides.
    const Eigen::MatrixXcd evaluation =
        nystrom::combined_potential_matrix(*solver.boundary(), k, solver.coupling(), receivers, par);
    parallel_for(acquisition.n_sources, par, [&](int s) {
      const forward::Vector rhs = solver.boundary_rhs(forward::point_source(k, sources[static_cast<std::size_t>(s)]));
      const forward::Vector density = solver.factorization().solve(rhs);
      const double residual = (solver.system_matrix() * density - rhs).norm() / rhs.norm();
      if (!(residual <= 1e-10)) {
        throw ComputeError("source " + std::to_string(s) + ": boundary residual " + std::to_string(residual));
      }
      out.data.col(s).noalias() = evaluation * density;
    });
    return out;
  }

  parallel_for(acquisition.n_sources, par, [&](int s) {
    try {
      const forward::Solution sol = solver.solve(forward::point_source(k, sources[static_cast<std::size_t>(s)]));
      out.data.col(s) = forward::scattered_at(sol, receivers, serial);
    } catch (const ComputeError& e) {
      throw ComputeError("source " + std::to_string(s) + ": " + e.what());
    }
  });
  return out;
}

void NoiseSpec::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("noise level must be a nonnegative number");
}

MsrMatrix add_noise(const MsrMatrix& clean, const NoiseSpec& spec) {
  spec.validate();
  MsrMatrix noisy = clean;
  if (spec.mu == 0.0) return noisy;
  const double component_std = spec.mu * clean.max_abs() / std::sqrt(2.0);
  std::mt19937_64 engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index r = 0; r < clean.data.rows(); ++r) {
    for (Eigen::Index s = 0; s < clean.data.cols(); ++s) {
      const double re = normal(engine);
      const double im = normal(engine);
      noisy.data(r, s) += component_std * Complex(re, im);
    }
  }
  return noisy;
}

double normalized_l2(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

NoiseStats noise_stats(const MsrMatrix& clean, const MsrMatrix& noisy, double mu) {
  if (clean.data.rows() != noisy.data.rows() || clean.data.cols() != noisy.data.cols()) {
    throw ValidationError("noise statistics need matrices of equal shape");
  }
  NoiseStats st;
  st.sigma = clean.max_abs();
  st.table_sigma = mu * st.sigma;
  st.l2_signal = normalized_l2(clean.data);
  st.l2_noise = normalized_l2(noisy.data - clean.data);
  return st;
}

void save_msr(const MsrMatrix& msr, const std::filesystem::path& path) {
  msr.validate();
  container::Document doc;
  doc.magic = container::kDataMagic;
  doc.rows = static_cast<std::uint32_t>(msr.data.rows());
  doc.cols = static_cast<std::uint32_t>(msr.data.cols());
  doc.payload.reserve(2 * msr.data.size());
  for (Eigen::Index r = 0; r < msr.data.rows(); ++r) {
    for (Eigen::Index s = 0; s < msr.data.cols(); ++s) {
      doc.payload.push_back(msr.data(r, s).real());
      doc.payload.push_back(msr.data(r, s).imag());
    }
  }
  const json meta = {{"acquisition", acquisition_json(msr.acquisition)}, {"k", msr.k}, {"model", msr.model_tag}};
  doc.metadata = meta.dump();
  container::write_file(path, doc);
}

MsrMatrix load_msr(const std::filesystem::path& path) {
  const container::Document doc = container::read_file(path, container::kDataMagic);
  MsrMatrix msr;
  try {
    const json meta = json::parse(doc.metadata);
    msr.acquisition = acquisition_from(meta.at("acquisition"));
    msr.k = meta.at("k").get<double>();
    msr.model_tag = meta.value("model", std::string{});
  } catch (const json::exception& e) {
    throw IoError("'" + path.string() + "': malformed data trailer: " + e.what());
  }
  msr.data.resize(doc.rows, doc.cols);
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < msr.data.rows(); ++r) {
    for (Eigen::Index s = 0; s < msr.data.cols(); ++s, at += 2) msr.data(r, s) = {doc.payload[at], doc.payload[at + 1]};
  }
  try {
    msr.validate();
  } catch (const ValidationError& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
  return msr;
}

}  // namespace rtm::msr
