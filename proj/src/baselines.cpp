#include "cryptopulse/baselines.hpp"

#include "cryptopulse/errors.hpp"

namespace cpulse {

std::string baseline_name(BaselineKind k) {
  switch (k) {
    case BaselineKind::linear: return "linear";
    case BaselineKind::nlinear: return "nlinear";
    case BaselineKind::dlinear: return "dlinear";
  }
  return "linear";
}

Matrix moving_average_rows(const Matrix& x, int window) {
  if (window < 2) throw ShapeError("moving average window must be >= 2");
  const Eigen::Index L = x.rows();
  const int before = (window - 1) / 2;
  Matrix out(L, x.cols());
  for (Eigen::Index t = 0; t < L; ++t) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (int j = 0; j < window; ++j) {
      Eigen::Index src = t - before + j;
      src = std::clamp<Eigen::Index>(src, 0, L - 1);  // edge replication
      acc += x.row(src);
    }
    out.row(t) = acc / window;
  }
  return out;
}

LinearBaseline::LinearBaseline(BaselineKind kind, int window_length,
                               int channels, int ma_window)
    : kind_(kind),
      length_(window_length),
      channels_(channels),
      ma_window_(ma_window),
      w_(baseline_name(kind) + ".w", window_length, channels),
      b_(baseline_name(kind) + ".b", 1, 1) {
  if (kind == BaselineKind::dlinear) {
    if (ma_window < 2 || ma_window >= window_length)
      throw ShapeError("dlinear moving-average window must be in [2, L)");
    w_trend_ = Parameter("dlinear.w_trend", window_length, channels);
  }
}

void LinearBaseline::init(RngStream& rng) {
  w_.init_uniform(rng, length_ * channels_);
  if (kind_ == BaselineKind::dlinear)
    w_trend_.init_uniform(rng, length_ * channels_);
}

std::vector<Parameter*> LinearBaseline::parameters() {
  std::vector<Parameter*> out{&w_, &b_};
  if (kind_ == BaselineKind::dlinear) out.push_back(&w_trend_);
  return out;
}

TensorId LinearBaseline::forward(Tape& tape, const Matrix& x,
                                 double last_close) {
  (void)last_close;
  if (x.rows() != length_ || x.cols() != channels_)
    throw ShapeError("baseline: window is " + shape_str(x) + ", expected " +
                     std::to_string(length_) + "x" +
                     std::to_string(channels_));
  switch (kind_) {
    case BaselineKind::linear: {
      TensorId xs = tape.input(x);
      return tape.add_scalar(tape.sum(tape.mul(xs, tape.param(w_))),
                             tape.param(b_));
    }
    case BaselineKind::nlinear: {
      Matrix normalized = x.rowwise() - x.row(length_ - 1);
      TensorId xs = tape.input(normalized);
      TensorId lin = tape.add_scalar(tape.sum(tape.mul(xs, tape.param(w_))),
                                     tape.param(b_));
      return tape.add(lin, tape.scalar(x(length_ - 1, kCloseColumn)));
    }
    case BaselineKind::dlinear: {
      Matrix trend = moving_average_rows(x, ma_window_);
      Matrix remainder = x - trend;
      TensorId t_trend = tape.sum(
          tape.mul(tape.input(trend), tape.param(w_trend_)));
      TensorId t_rem =
          tape.sum(tape.mul(tape.input(remainder), tape.param(w_)));
      return tape.add_scalar(tape.add(t_trend, t_rem), tape.param(b_));
    }
  }
  throw NumericalError("unreachable baseline kind");
}

}  // namespace cpulse
