#include "cryptopulse/tape.hpp"

#include <cmath>

#include "cryptopulse/errors.hpp"

namespace cpulse {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) +
                     " vs " + shape_str(b));
}

}  // namespace

void Tape::check_finite(const Matrix& m, const char* op) const {
  if (!m.allFinite())
    throw NumericalError(std::string(op) + " produced non-finite values");
}

TensorId Tape::emplace(Matrix value, std::function<void(Tape&)> backprop) {
  nodes_.push_back(Node{std::move(value), Matrix(), std::move(backprop)});
  return TensorId{nodes_.size() - 1};
}

// Lazily allocated gradient accumulation; untouched nodes keep empty grads.
namespace {
void accum(Matrix& slot, const Matrix& contribution) {
  if (slot.size() == 0)
    slot = contribution;
  else
    slot += contribution;
}
}  // namespace

TensorId Tape::input(Matrix v) {
  check_finite(v, "input");
  return emplace(std::move(v), nullptr);
}

TensorId Tape::scalar(double c) {
  Matrix m(1, 1);
  m(0, 0) = c;
  return input(std::move(m));
}

TensorId Tape::param(Parameter& p) {
  TensorId id = input(p.value);
  bindings_.emplace_back(id.idx, &p);
  return id;
}

double Tape::scalar_value(TensorId id) const {
  const Matrix& m = value(id);
  if (m.rows() != 1 || m.cols() != 1)
    throw ShapeError("scalar_value: tensor is " + shape_str(m));
  return m(0, 0);
}

TensorId Tape::matmul(TensorId a, TensorId b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows())
    throw ShapeError("matmul: shape mismatch " + shape_str(av) + " vs " +
                     shape_str(bv));
  Matrix out = av * bv;
  check_finite(out, "matmul");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, b, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g * t.value(b).transpose());
    accum(t.grad_ref(b), t.value(a).transpose() * g);
  };
  return id;
}

TensorId Tape::add(TensorId a, TensorId b) {
  require_same_shape(value(a), value(b), "add");
  Matrix out = value(a) + value(b);
  check_finite(out, "add");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, b, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g);
    accum(t.grad_ref(b), g);
  };
  return id;
}

TensorId Tape::sub(TensorId a, TensorId b) {
  require_same_shape(value(a), value(b), "sub");
  Matrix out = value(a) - value(b);
  check_finite(out, "sub");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, b, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g);
    accum(t.grad_ref(b), -g);
  };
  return id;
}

TensorId Tape::mul(TensorId a, TensorId b) {
  require_same_shape(value(a), value(b), "mul");
  Matrix out = value(a).cwiseProduct(value(b));
  check_finite(out, "mul");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, b, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g.cwiseProduct(t.value(b)));
    accum(t.grad_ref(b), g.cwiseProduct(t.value(a)));
  };
  return id;
}

TensorId Tape::scale(TensorId a, double c) {
  Matrix out = value(a) * c;
  check_finite(out, "scale");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, c, id](Tape& t) {
    accum(t.grad_ref(a), c * t.nodes_[id.idx].grad);
  };
  return id;
}

TensorId Tape::add_rowwise(TensorId mat, TensorId row) {
  const Matrix& mv = value(mat);
  const Matrix& rv = value(row);
  if (rv.rows() != 1 || rv.cols() != mv.cols())
    throw ShapeError("add_rowwise: shape mismatch " + shape_str(mv) + " vs " +
                     shape_str(rv));
  Matrix out = mv.rowwise() + rv.row(0);
  check_finite(out, "add_rowwise");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [mat, row, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(mat), g);
    accum(t.grad_ref(row), g.colwise().sum());
  };
  return id;
}

TensorId Tape::add_scalar(TensorId a, TensorId s) {
  const Matrix& sv = value(s);
  if (sv.rows() != 1 || sv.cols() != 1)
    throw ShapeError("add_scalar: scalar operand is " + shape_str(sv));
  Matrix out = value(a).array() + sv(0, 0);
  check_finite(out, "add_scalar");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, s, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g);
    Matrix gs(1, 1);
    gs(0, 0) = g.sum();
    accum(t.grad_ref(s), gs);
  };
  return id;
}

TensorId Tape::mul_scalar(TensorId a, TensorId s) {
  const Matrix& sv = value(s);
  if (sv.rows() != 1 || sv.cols() != 1)
    throw ShapeError("mul_scalar: scalar operand is " + shape_str(sv));
  Matrix out = value(a) * sv(0, 0);
  check_finite(out, "mul_scalar");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, s, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), t.value(s)(0, 0) * g);
    Matrix gs(1, 1);
    gs(0, 0) = g.cwiseProduct(t.value(a)).sum();
    accum(t.grad_ref(s), gs);
  };
  return id;
}

TensorId Tape::concat_cols(TensorId a, TensorId b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows())
    throw ShapeError("concat_cols: shape mismatch " + shape_str(av) + " vs " +
                     shape_str(bv));
  const Eigen::Index ac = av.cols();  // read before emplace: av may dangle
  Matrix out(av.rows(), ac + bv.cols());
  out << av, bv;
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, b, ac, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    accum(t.grad_ref(a), g.leftCols(ac));
    accum(t.grad_ref(b), g.rightCols(g.cols() - ac));
  };
  return id;
}

TensorId Tape::stack_scalars(const std::vector<TensorId>& ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), 1);
  for (size_t i = 0; i < ids.size(); ++i) out(static_cast<Eigen::Index>(i), 0) = scalar_value(ids[i]);
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [ids, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    for (size_t i = 0; i < ids.size(); ++i) {
      Matrix gi(1, 1);
      gi(0, 0) = g(static_cast<Eigen::Index>(i), 0);
      accum(t.grad_ref(ids[i]), gi);
    }
  };
  return id;
}

TensorId Tape::element(TensorId a, Eigen::Index i, Eigen::Index j) {
  const Matrix& av = value(a);
  if (i < 0 || i >= av.rows() || j < 0 || j >= av.cols())
    throw ShapeError("element: index out of range for " + shape_str(av));
  Matrix out(1, 1);
  out(0, 0) = av(i, j);
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, i, j, id](Tape& t) {
    const Matrix& av = t.value(a);
    Matrix ga = Matrix::Zero(av.rows(), av.cols());
    ga(i, j) = t.nodes_[id.idx].grad(0, 0);
    accum(t.grad_ref(a), ga);
  };
  return id;
}

TensorId Tape::sum(TensorId a) {
  Matrix out(1, 1);
  out(0, 0) = value(a).sum();
  check_finite(out, "sum");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, id](Tape& t) {
    const double g = t.nodes_[id.idx].grad(0, 0);
    accum(t.grad_ref(a),
          Matrix::Constant(t.value(a).rows(), t.value(a).cols(), g));
  };
  return id;
}

TensorId Tape::mean_over_axis(TensorId a, int axis) {
  const Matrix& av = value(a);
  Matrix out;
  if (axis == 0)
    out = av.colwise().mean();
  else if (axis == 1)
    out = av.rowwise().mean();
  else
    throw ShapeError("mean_over_axis: axis must be 0 or 1");
  check_finite(out, "mean_over_axis");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, axis, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& av = t.value(a);
    if (axis == 0)
      accum(t.grad_ref(a),
            (1.0 / static_cast<double>(av.rows())) *
                g.replicate(av.rows(), 1));
    else
      accum(t.grad_ref(a),
            (1.0 / static_cast<double>(av.cols())) *
                g.replicate(1, av.cols()));
  };
  return id;
}

TensorId Tape::softmax_over_axis(TensorId a, int axis) {
  const Matrix& av = value(a);
  if (axis != 0 && axis != 1)
    throw ShapeError("softmax_over_axis: axis must be 0 or 1");
  Matrix out = av;
  auto softmax_vec = [](Eigen::Ref<Eigen::VectorXd> v) {
    const double m = v.maxCoeff();
    v = (v.array() - m).exp();
    v /= v.sum();
  };
  if (axis == 0) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      Eigen::VectorXd col = out.col(j);
      softmax_vec(col);
      out.col(j) = col;
    }
  } else {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      Eigen::VectorXd row = out.row(i).transpose();
      softmax_vec(row);
      out.row(i) = row.transpose();
    }
  }
  check_finite(out, "softmax");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, axis, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& y = t.value(id);
    Matrix ga = Matrix::Zero(y.rows(), y.cols());
    if (axis == 0) {
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        const double dot = g.col(j).dot(y.col(j));
        ga.col(j) = y.col(j).cwiseProduct(g.col(j).array().matrix() -
                                          Eigen::VectorXd::Constant(y.rows(), dot));
      }
    } else {
      for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const double dot = g.row(i).dot(y.row(i));
        ga.row(i) = y.row(i).cwiseProduct(
            g.row(i) - Eigen::RowVectorXd::Constant(y.cols(), dot));
      }
    }
    accum(t.grad_ref(a), ga);
  };
  return id;
}

TensorId Tape::tanh(TensorId a) {
  Matrix out = value(a).array().tanh();
  check_finite(out, "tanh");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& y = t.value(id);
    accum(t.grad_ref(a),
          (g.array() * (1.0 - y.array().square())).matrix());
  };
  return id;
}

TensorId Tape::sigmoid(TensorId a) {
  Matrix out = (1.0 / (1.0 + (-value(a).array()).exp())).matrix();
  check_finite(out, "sigmoid");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& y = t.value(id);
    accum(t.grad_ref(a), (g.array() * y.array() * (1.0 - y.array())).matrix());
  };
  return id;
}

TensorId Tape::relu(TensorId a) {
  Matrix out = value(a).cwiseMax(0.0);
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& x = t.value(a);
    accum(t.grad_ref(a),
          (g.array() * (x.array() > 0.0).cast<double>()).matrix());
  };
  return id;
}

TensorId Tape::conv1d_same(TensorId x, TensorId kernel, TensorId bias,
                           int width) {
  const Matrix& xv = value(x);
  const Matrix& kv = value(kernel);
  const Matrix& bv = value(bias);
  if (width < 1 || width % 2 == 0)
    throw ShapeError("conv1d_same: kernel width must be odd and positive");
  const Eigen::Index L = xv.rows();
  const Eigen::Index C = xv.cols();
  const Eigen::Index D = kv.cols();
  if (kv.rows() != width * C)
    throw ShapeError("conv1d_same: kernel is " + shape_str(kv) +
                     ", expected " + std::to_string(width * C) + "x" +
                     std::to_string(D));
  if (bv.rows() != 1 || bv.cols() != D)
    throw ShapeError("conv1d_same: bias is " + shape_str(bv) + ", expected 1x" +
                     std::to_string(D));
  const int pad = (width - 1) / 2;
  Matrix out = bv.replicate(L, 1);
  for (int j = 0; j < width; ++j) {
    for (Eigen::Index t = 0; t < L; ++t) {
      const Eigen::Index src = t + j - pad;
      if (src < 0 || src >= L) continue;
      out.row(t).noalias() += xv.row(src) * kv.middleRows(j * C, C);
    }
  }
  check_finite(out, "conv1d_same");
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [x, kernel, bias, width, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Matrix& xv = t.value(x);
    const Matrix& kv = t.value(kernel);
    const Eigen::Index L = xv.rows();
    const Eigen::Index C = xv.cols();
    const int pad = (width - 1) / 2;
    Matrix gx = Matrix::Zero(xv.rows(), xv.cols());
    Matrix gk = Matrix::Zero(kv.rows(), kv.cols());
    for (int j = 0; j < width; ++j) {
      for (Eigen::Index tt = 0; tt < L; ++tt) {
        const Eigen::Index src = tt + j - pad;
        if (src < 0 || src >= L) continue;
        gx.row(src).noalias() += g.row(tt) * kv.middleRows(j * C, C).transpose();
        gk.middleRows(j * C, C).noalias() += xv.row(src).transpose() * g.row(tt);
      }
    }
    accum(t.grad_ref(x), gx);
    accum(t.grad_ref(kernel), gk);
    accum(t.grad_ref(bias), g.colwise().sum());
  };
  return id;
}

TensorId Tape::dropout(TensorId a, double rate, RngStream& rng, bool training) {
  if (rate < 0.0 || rate >= 1.0)
    throw NumericalError("dropout: rate must be in [0, 1)");
  if (!training || rate == 0.0) return a;  // eval mode is exactly identity
  const Matrix& av = value(a);
  Matrix mask(av.rows(), av.cols());
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < mask.rows(); ++i)
    for (Eigen::Index j = 0; j < mask.cols(); ++j)
      mask(i, j) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
  Matrix out = av.cwiseProduct(mask);
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, mask, id](Tape& t) {
    accum(t.grad_ref(a), t.nodes_[id.idx].grad.cwiseProduct(mask));
  };
  return id;
}

TensorId Tape::roll_rows(TensorId a, Eigen::Index tau) {
  const Matrix& av = value(a);
  const Eigen::Index L = av.rows();
  if (tau < 0 || tau >= L)
    throw ShapeError("roll_rows: shift " + std::to_string(tau) +
                     " out of range for " + std::to_string(L) + " rows");
  Matrix out(L, av.cols());
  for (Eigen::Index t = 0; t < L; ++t)
    out.row(t) = av.row(((t - tau) % L + L) % L);
  TensorId id = emplace(std::move(out), nullptr);
  nodes_[id.idx].backprop = [a, tau, id](Tape& t) {
    const Matrix& g = t.nodes_[id.idx].grad;
    const Eigen::Index L = g.rows();
    Matrix ga = Matrix::Zero(L, g.cols());
    for (Eigen::Index tt = 0; tt < L; ++tt)
      ga.row(((tt - tau) % L + L) % L) += g.row(tt);
    accum(t.grad_ref(a), ga);
  };
  return id;
}

void Tape::backward(TensorId loss) {
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1)
    throw ShapeError("backward: loss must be scalar, got " + shape_str(lv));
  for (Node& n : nodes_) n.grad.resize(0, 0);
  nodes_[loss.idx].grad = Matrix::Ones(1, 1);
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.size() != 0 && n.backprop) n.backprop(*this);
  }
  for (auto& [idx, p] : bindings_) {
    const Matrix& g = nodes_[idx].grad;
    if (g.size() != 0) p->grad += g;
    // parameters unreachable from the loss keep their (zero) gradient
  }
}

}  // namespace cpulse
