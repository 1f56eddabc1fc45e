#include "doctest.h"
#include "locsvm/model.hpp"

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <random>

#include "locsvm/distributions.hpp"
#include "locsvm/quasirandom.hpp"

using namespace locsvm;

namespace {

Partition hand_partition(int dim, double r, std::vector<double> centers) {
  Partition p;
  p.dim = dim;
  p.radius = r;
  p.centers = std::move(centers);
  return p;
}

Dataset two_cell_data() {
  Dataset d;
  d.dim = 1;
  double xs[4] = {-0.6, -0.4, 0.4, 0.6};
  int ys[4] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) d.append(std::span<const double>(&xs[i], 1), ys[i]);
  return d;
}

}  // namespace

TEST_CASE("one cell degenerates to a single global SVM") {
  auto dist = MarginDistribution::halfspace(1, 1.0, 1.0);
  Dataset data = dist.sample(64, 3);
  Partition p = single_cell_partition(1);
  std::vector<double> lam = {0.01}, gam = {0.3};
  LocalizedModel m = train_localized(data, p, lam, gam);

  CellProblem global;
  global.dim = 1;
  global.xs = data.xs;
  global.ys = data.ys;
  global.lambda = 0.01;
  global.gamma = 0.3;
  global.global_n = data.size();
  CellModel direct = train_cell(global);
  CHECK(m.cells[0].alpha == direct.alpha);
  CHECK(m.cells[0].sv_x == direct.sv_x);
  BallSequence seq(1, 8);
  double x;
  for (int i = 0; i < 100; ++i) {
    seq.next(&x);
    CHECK(predict_raw(m, std::span<const double>(&x, 1)) ==
          cell_predict_raw(direct, std::span<const double>(&x, 1)));
  }
}

TEST_CASE("cells train locally: other cells' data cannot leak in") {
  Partition p = hand_partition(1, 1.0, {-0.5, 0.5});
  Dataset a = two_cell_data();
  std::vector<double> lam = {0.05, 0.05}, gam = {0.4, 0.4};
  LocalizedModel ma = train_localized(a, p, lam, gam);

  Dataset b = a;
  b.xs[0] = -0.7;  // perturb a point of cell 0 only
  LocalizedModel mb = train_localized(b, p, lam, gam);
  CHECK(ma.cells[1].alpha == mb.cells[1].alpha);
  CHECK(ma.cells[1].sv_x == mb.cells[1].sv_x);
  CHECK(ma.cells[1].rkhs_norm_sq == mb.cells[1].rkhs_norm_sq);
  CHECK(ma.cells[0].sv_x != mb.cells[0].sv_x);
}

TEST_CASE("empty dataset yields zero models and sign +1") {
  Partition p = hand_partition(1, 1.0, {-0.5, 0.5});
  Dataset empty;
  empty.dim = 1;
  std::vector<double> lam = {0.05, 0.05}, gam = {0.4, 0.4};
  LocalizedModel m = train_localized(empty, p, lam, gam);
  double x = 0.2;
  CHECK(predict_raw(m, std::span<const double>(&x, 1)) == 0.0);
  CHECK(predict_sign(m, std::span<const double>(&x, 1)) == 1);  // sign 0 := +1
}

TEST_CASE("prediction mechanics") {
  Partition p = hand_partition(1, 1.0, {-0.5, 0.5});
  Dataset d;
  d.dim = 1;
  double x0 = 0.5;
  d.append(std::span<const double>(&x0, 1), 1);
  std::vector<double> lam = {0.5, 0.5}, gam = {0.4, 0.4};
  LocalizedModel m = train_localized(d, p, lam, gam);

  double in_empty = -0.4;
  CHECK(predict_raw(m, std::span<const double>(&in_empty, 1)) == 0.0);
  CHECK(predict_raw(m, std::span<const double>(&x0, 1)) == doctest::Approx(1.0));
  // boundary tie goes to the lowest-index cell (the empty one)
  double tie = 0.0;
  CHECK(predict_raw(m, std::span<const double>(&tie, 1)) == 0.0);
  double outside = 1.5;
  CHECK_THROWS_AS(predict_raw(m, std::span<const double>(&outside, 1)),
                  std::invalid_argument);

  CHECK(predict_sign(m, std::span<const double>(&x0, 1)) == 1);
  double weak = -1e-9;
  CellModel& cell0 = m.cells[0];
  cell0.sv_x = {-0.5};
  cell0.sv_y = {-1};
  cell0.alpha = {1e-9};
  CHECK(predict_sign(m, std::span<const double>(&weak, 1)) == -1);
}

TEST_CASE("clipped prediction equals clip of raw everywhere") {
  auto dist = MarginDistribution::sphere(2, 1.0, 1.0, 0.5);
  Dataset data = dist.sample(256, 4);
  Partition p = build_rnet(2, 0.5, 4);
  std::vector<double> lam(p.count(), 0.002), gam(p.count(), 0.4);
  LocalizedModel m = train_localized(data, p, lam, gam);
  BallSequence seq(2, 5);
  std::vector<double> x(2);
  for (int i = 0; i < 1000; ++i) {
    seq.next(x.data());
    double raw = predict_raw(m, x);
    CHECK(predict_clipped(m, x) == clip(raw));
    CHECK(predict_clipped(m, x) >= -1.0);
    CHECK(predict_clipped(m, x) <= 1.0);
  }
}

TEST_CASE("parallel and sequential training agree bit for bit") {
  auto dist = MarginDistribution::halfspace(2, 1.0, 1.0);
  Dataset data = dist.sample(512, 9);
  Partition p = build_rnet(2, 0.35, 9);
  std::vector<double> lam(p.count(), 0.001), gam(p.count(), 0.3);
  LocalizedModel seq = train_localized(data, p, lam, gam, 1);
  LocalizedModel par = train_localized(data, p, lam, gam, 4);
  REQUIRE(seq.cells.size() == par.cells.size());
  for (std::size_t j = 0; j < seq.cells.size(); ++j) {
    CHECK(seq.cells[j].alpha == par.cells[j].alpha);
    CHECK(seq.cells[j].sv_x == par.cells[j].sv_x);
    CHECK(seq.cells[j].rkhs_norm_sq == par.cells[j].rkhs_norm_sq);
  }
}

TEST_CASE("kernel widths above the cell radius are rejected") {
  Partition p = build_rnet(2, 0.4, 2);
  Dataset data = MarginDistribution::halfspace(2, 1.0, 1.0).sample(32, 2);
  std::vector<double> lam(p.count(), 0.01), gam(p.count(), 0.5);  // γ > r
  CHECK_THROWS_AS(train_localized(data, p, lam, gam), std::invalid_argument);
  std::vector<double> short_lam(1, 0.01);
  std::vector<double> ok_gam(p.count(), 0.3);
  CHECK_THROWS_AS(train_localized(data, p, short_lam, ok_gam), std::invalid_argument);
}

TEST_CASE("model files round-trip bit-exactly") {
  auto dist = MarginDistribution::sphere(2, 2.0, 0.8, 0.45);
  Dataset data = dist.sample(200, 11);
  Partition p = build_rnet(2, 0.45, 11);
  std::vector<double> lam(p.count(), 0.003), gam(p.count(), 0.31);
  LocalizedModel m = train_localized(data, p, lam, gam);

  std::string text = model_to_text(m);
  LocalizedModel back = model_from_text(text);
  CHECK(model_to_text(back) == text);
  REQUIRE(back.cells.size() == m.cells.size());
  for (std::size_t j = 0; j < m.cells.size(); ++j) {
    CHECK(back.cells[j].alpha == m.cells[j].alpha);
    CHECK(back.cells[j].sv_x == m.cells[j].sv_x);
    CHECK(back.cells[j].sv_y == m.cells[j].sv_y);
    CHECK(back.cells[j].gamma == m.cells[j].gamma);
  }
  BallSequence seq(2, 12);
  std::vector<double> x(2);
  for (int i = 0; i < 200; ++i) {
    seq.next(x.data());
    CHECK(predict_raw(back, x) == predict_raw(m, x));
  }

  namespace fs = std::filesystem;
  auto path = fs::temp_directory_path() / "locsvm_model_rt.txt";
  save_model(m, path.string());
  LocalizedModel loaded = load_model(path.string());
  CHECK(model_to_text(loaded) == text);
  fs::remove(path);
}
