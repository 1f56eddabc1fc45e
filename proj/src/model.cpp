#include "locsvm/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "locsvm/parallel.hpp"

namespace locsvm {

LocalizedModel train_localized(const Dataset& data, const Partition& p,
                               std::span<const double> lambdas,
                               std::span<const double> gammas, int threads,
                               double kkt_tol, int max_sweeps) {
  const int m = p.count();
  if (int(lambdas.size()) != m || int(gammas.size()) != m)
    throw std::invalid_argument("train_localized: parameter vectors must have one entry per cell");
  if (data.size() > 0 && data.dim != p.dim)
    throw std::invalid_argument("train_localized: data dimension mismatch");
  for (int j = 0; j < m; ++j) {
    if (!(lambdas[j] > 0.0)) throw std::invalid_argument("train_localized: lambda must be > 0");
    if (!(gammas[j] > 0.0 && gammas[j] <= p.radius))
      throw std::invalid_argument("train_localized: gamma must lie in (0, r]");
  }

  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t i = 0; i < data.size(); ++i)
    members[std::size_t(assign_cell(p, data.point(i)))].push_back(i);

  LocalizedModel model;
  model.partition = p;
  model.cells.resize(m);
  parallel_for(std::size_t(m), threads, [&](std::size_t j) {
    CellProblem problem;
    problem.dim = p.dim;
    problem.lambda = lambdas[j];
    problem.gamma = gammas[j];
    problem.global_n = data.size();
    problem.xs.reserve(members[j].size() * std::size_t(p.dim));
    problem.ys.reserve(members[j].size());
    for (std::size_t i : members[j]) {
      auto x = data.point(i);
      problem.xs.insert(problem.xs.end(), x.begin(), x.end());
      problem.ys.push_back(data.ys[i]);
    }
    if (problem.global_n == 0) problem.global_n = 1;  // empty dataset: zero model anyway
    model.cells[j] = train_cell(problem, kkt_tol, max_sweeps);
  });
  return model;
}

double predict_raw(const LocalizedModel& m, std::span<const double> x) {
  return cell_predict_raw(m.cells[std::size_t(assign_cell(m.partition, x))], x);
}

double predict_clipped(const LocalizedModel& m, std::span<const double> x) {
  return clip(predict_raw(m, x));
}

int predict_sign(const LocalizedModel& m, std::span<const double> x) {
  return predict_raw(m, x) >= 0.0 ? 1 : -1;
}

std::string model_to_text(const LocalizedModel& m) {
  std::ostringstream out;
  out << partition_to_text(m.partition);
  for (int j = 0; j < m.partition.count(); ++j) {
    const CellModel& cell = m.cells[std::size_t(j)];
    out << "cell " << j << " " << format_g17(cell.gamma) << " " << format_g17(cell.lambda)
        << " " << cell.n_sv() << "\n";
    for (std::size_t i = 0; i < cell.n_sv(); ++i) {
      out << format_g17(cell.alpha[i]) << " " << cell.sv_y[i];
      for (double v : cell.sv(i)) out << " " << format_g17(v);
      out << "\n";
    }
  }
  return out.str();
}

LocalizedModel model_from_text(const std::string& text) {
  std::istringstream in(text);
  LocalizedModel m;
  int cell_count = 0;
  {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("malformed model header");
    std::istringstream hs(header);
    if (!(hs >> m.partition.dim >> m.partition.radius >> cell_count) || cell_count < 1)
      throw std::runtime_error("malformed model header");
  }
  m.partition.centers.resize(std::size_t(cell_count) * m.partition.dim);
  for (double& v : m.partition.centers)
    if (!(in >> v)) throw std::runtime_error("malformed model centers");
  m.cells.resize(cell_count);
  for (int j = 0; j < cell_count; ++j) {
    std::string tag;
    int index = -1;
    std::size_t n_sv = 0;
    CellModel& cell = m.cells[std::size_t(j)];
    cell.dim = m.partition.dim;
    if (!(in >> tag >> index >> cell.gamma >> cell.lambda >> n_sv) || tag != "cell" ||
        index != j)
      throw std::runtime_error("malformed cell block");
    cell.sv_x.resize(n_sv * std::size_t(cell.dim));
    cell.sv_y.resize(n_sv);
    cell.alpha.resize(n_sv);
    for (std::size_t i = 0; i < n_sv; ++i) {
      if (!(in >> cell.alpha[i] >> cell.sv_y[i])) throw std::runtime_error("malformed sv line");
      for (int k = 0; k < cell.dim; ++k)
        if (!(in >> cell.sv_x[i * cell.dim + k])) throw std::runtime_error("malformed sv line");
    }
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n_sv; ++i)
      for (std::size_t k = 0; k < n_sv; ++k)
        norm_sq += cell.alpha[i] * cell.alpha[k] * cell.sv_y[i] * cell.sv_y[k] *
                   std::exp(-sq_dist(cell.sv(i), cell.sv(k)) / (cell.gamma * cell.gamma));
    cell.rkhs_norm_sq = std::max(0.0, norm_sq);
  }
  return m;
}

void save_model(const LocalizedModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_text(m);
}

LocalizedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_text(buffer.str());
}

}  // namespace locsvm
