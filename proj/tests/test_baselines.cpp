#include <doctest.h>

#include "cryptopulse/baselines.hpp"
#include "cryptopulse/dataset.hpp"
#include "cryptopulse/grad_check.hpp"

using namespace cpulse;

namespace {

Matrix random_window(RngStream& rng, int L, int C) {
  Matrix x(L, C);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < C; ++j) x(i, j) = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("moving average reconstruction: trend + remainder = x") {
  RngStream rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x = random_window(rng, 7, 3);
    Matrix trend = moving_average_rows(x, 3);
    Matrix remainder = x - trend;
    CHECK((trend + remainder - x).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(moving_average_rows(Matrix::Zero(5, 2), 1), ShapeError);
}

TEST_CASE("moving average of a constant matrix is itself") {
  Matrix x = Matrix::Constant(6, 2, 4.2);
  CHECK(moving_average_rows(x, 3).isApprox(x, 1e-15));
}

TEST_CASE("moving average hand case with edge replication") {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Matrix ma = moving_average_rows(x, 3);
  // row 0 replicates the first edge: (1 + 1 + 2) / 3
  CHECK(ma(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(ma(1, 0) == doctest::Approx(2.0));
  CHECK(ma(2, 0) == doctest::Approx(3.0));
  CHECK(ma(3, 0) == doctest::Approx(11.0 / 3.0));
}

TEST_CASE("linear baseline on zero input predicts the bias") {
  RngStream rng(3);
  LinearBaseline model(BaselineKind::linear, 7, 5);
  model.init(rng);
  auto params = model.parameters();
  params[1]->value(0, 0) = 0.37;  // bias
  Tape t;
  CHECK(t.scalar_value(model.forward(t, Matrix::Zero(7, 5), 0.0)) ==
        doctest::Approx(0.37));
}

TEST_CASE("nlinear with zero parameters predicts the last close") {
  LinearBaseline model(BaselineKind::nlinear, 7, 5);  // zero-initialized
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x = random_window(rng, 7, 5);
    Tape t;
    CHECK(t.scalar_value(model.forward(t, x, x(6, 3))) ==
          doctest::Approx(x(6, LinearBaseline::kCloseColumn)).epsilon(1e-12));
  }
}

TEST_CASE("nlinear is translation-equivariant in the close channel") {
  RngStream rng(7);
  LinearBaseline model(BaselineKind::nlinear, 7, 5);
  model.init(rng);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x = random_window(rng, 7, 5);
    const double c = rng.uniform(-100.0, 100.0);
    Matrix shifted = x;
    shifted.col(LinearBaseline::kCloseColumn).array() += c;

    Tape t1, t2;
    double base = t1.scalar_value(model.forward(t1, x, x(6, 3)));
    double moved = t2.scalar_value(model.forward(t2, shifted, x(6, 3) + c));
    CHECK(moved == doctest::Approx(base + c).epsilon(1e-9));
  }
}

TEST_CASE("dlinear validates the moving-average window") {
  CHECK_THROWS_AS(LinearBaseline(BaselineKind::dlinear, 7, 5, 1), ShapeError);
  CHECK_THROWS_AS(LinearBaseline(BaselineKind::dlinear, 7, 5, 7), ShapeError);
  LinearBaseline ok(BaselineKind::dlinear, 7, 5, 3);
  CHECK(ok.parameters().size() == 3);
}

TEST_CASE("dlinear with zero heads predicts the (zero) bias") {
  LinearBaseline model(BaselineKind::dlinear, 7, 5, 3);
  RngStream rng(9);
  Matrix x = random_window(rng, 7, 5);
  Tape t;
  CHECK(t.scalar_value(model.forward(t, x, x(6, 3))) == 0.0);
}

TEST_CASE("dlinear trend weights see the decomposed trend only") {
  // constant window: remainder is exactly zero, so only trend weights and
  // bias matter
  LinearBaseline model(BaselineKind::dlinear, 4, 1, 3);
  auto params = model.parameters();
  params[0]->value.setConstant(100.0);   // remainder weights: no effect
  params[2]->value.setConstant(0.25);    // trend weights
  Matrix x = Matrix::Constant(4, 1, 2.0);
  Tape t;
  // trend == x, sum(0.25 * 2.0) over 4 rows = 2.0
  CHECK(t.scalar_value(model.forward(t, x, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("all baselines pass a finite-difference gradient check") {
  RngStream rng(11);
  Matrix x = random_window(rng, 7, 5);
  for (BaselineKind kind : {BaselineKind::linear, BaselineKind::nlinear,
                            BaselineKind::dlinear}) {
    LinearBaseline model(kind, 7, 5, 3);
    model.init(rng);
    auto params = model.parameters();
    auto loss_fn = [&] {
      Tape t;
      TensorId pred = model.forward(t, x, x(6, 3));
      TensorId err = t.sub(pred, t.scalar(1.234));
      TensorId l = t.mul(err, err);
      t.backward(l);
      return t.scalar_value(l);
    };
    CHECK(grad_check(loss_fn, params) < 1e-6);
  }
}

TEST_CASE("baseline rejects a wrong-shape window") {
  LinearBaseline model(BaselineKind::linear, 7, 5);
  Tape t;
  CHECK_THROWS_AS(model.forward(t, Matrix::Zero(6, 5), 0.0), ShapeError);
  CHECK_THROWS_AS(model.forward(t, Matrix::Zero(7, 4), 0.0), ShapeError);
}

TEST_CASE("baseline window width per variant") {
  CHECK(baseline_channels(Variant::full) == 13);
  CHECK(baseline_channels(Variant::xs) == 12);
  // xi leaves the price+indicator block at its 5 price channels
  CHECK(baseline_channels(Variant::xi) == 6);

  WindowSample s;
  s.x_g = Matrix::Random(7, 5);
  s.indicators = Matrix::Random(7, 7);
  s.sentiment = Vector::Random(7);
  Matrix full = baseline_window(s, Variant::full);
  CHECK(full.cols() == 13);
  CHECK(full.leftCols(5).isApprox(s.x_g));
  CHECK(full.middleCols(5, 7).isApprox(s.indicators));
  CHECK(full.col(12).isApprox(s.sentiment));

  Matrix xs = baseline_window(s, Variant::xs);
  CHECK(xs.cols() == 12);
  CHECK(xs.rightCols(7).isApprox(s.indicators));

  Matrix xi = baseline_window(s, Variant::xi);
  CHECK(xi.cols() == 6);
  CHECK(xi.leftCols(5).isApprox(s.x_g));
  CHECK(xi.col(5).isApprox(s.sentiment));
}
