#pragma once

#include <span>
#include <string>
#include <vector>

#include "locsvm/dataset.hpp"
#include "locsvm/geometry.hpp"
#include "locsvm/solver.hpp"

namespace locsvm {

// Global localized predictor: the per-cell SVM of the unique owning Voronoi
// cell decides each point. Immutable once trained; prediction is thread safe.
struct LocalizedModel {
  Partition partition;
  std::vector<CellModel> cells;  // one per cell index; zero models allowed
};

// Trains cell j on D_j = {(x_i,y_i) : assign_cell(x_i) = j} with the global
// sample size |data| in every cell's objective. Cells train independently
// (and in parallel); the result does not depend on the thread count.
// Rejects gammas[j] > p.radius, the theory's admissible range.
LocalizedModel train_localized(const Dataset& data, const Partition& p,
                               std::span<const double> lambdas,
                               std::span<const double> gammas, int threads = 1,
                               double kkt_tol = 1e-6, int max_sweeps = 10000);

double predict_raw(const LocalizedModel& m, std::span<const double> x);
double predict_clipped(const LocalizedModel& m, std::span<const double> x);
int predict_sign(const LocalizedModel& m, std::span<const double> x);  // sign 0 := +1

// Partition block followed by one block per cell; round-trips bit-exactly.
std::string model_to_text(const LocalizedModel& m);
LocalizedModel model_from_text(const std::string& text);
void save_model(const LocalizedModel& m, const std::string& path);
LocalizedModel load_model(const std::string& path);

}  // namespace locsvm
