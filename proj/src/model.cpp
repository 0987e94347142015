#include "cryptopulse/model.hpp"

#include "cryptopulse/errors.hpp"

namespace cpulse {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::xs: return "xs";
    case Variant::xi: return "xi";
  }
  return "full";
}

Variant parse_variant(const std::string& s) {
  if (s == "full") return Variant::full;
  if (s == "xs") return Variant::xs;
  if (s == "xi") return Variant::xi;
  throw DataError("unknown variant '" + s + "' (expected full, xs or xi)");
}

ZetaHead::ZetaHead(const std::string& name, int d, int L)
    : d_in(d),
      length(L),
      ff_w1(name + ".ff_w1", d, 2 * d),
      ff_b1(name + ".ff_b1", 1, 2 * d),
      ff_w2(name + ".ff_w2", 2 * d, d),
      ff_b2(name + ".ff_b2", 1, d),
      temporal_w(name + ".temporal_w", 1, L),
      temporal_b(name + ".temporal_b", 1, 1),
      feature_w(name + ".feature_w", d, 1),
      feature_b(name + ".feature_b", 1, 1) {}

void ZetaHead::init(RngStream& rng) {
  ff_w1.init_uniform(rng, d_in);
  ff_w2.init_uniform(rng, 2 * d_in);
  temporal_w.init_uniform(rng, length);
  feature_w.init_uniform(rng, d_in);
  // biases stay zero
}

std::vector<Parameter*> ZetaHead::parameters() {
  return {&ff_w1, &ff_b1, &ff_w2, &ff_b2,
          &temporal_w, &temporal_b, &feature_w, &feature_b};
}

TensorId ZetaHead::apply(Tape& tape, TensorId x, double dropout_rate,
                         RngStream& rng, bool training) {
  const Matrix& xv = tape.value(x);
  if (xv.cols() != d_in || xv.rows() != length)
    throw ShapeError("zeta: input is " + shape_str(xv) + ", expected " +
                     std::to_string(length) + "x" + std::to_string(d_in));
  TensorId h = tape.relu(
      tape.add_rowwise(tape.matmul(x, tape.param(ff_w1)), tape.param(ff_b1)));
  TensorId ff = tape.add_rowwise(tape.matmul(h, tape.param(ff_w2)),
                                 tape.param(ff_b2));
  ff = tape.dropout(ff, dropout_rate, rng, training);
  // temporal linear: L -> 1, shared scalar bias
  TensorId temporal = tape.add_scalar(tape.matmul(tape.param(temporal_w), ff),
                                      tape.param(temporal_b));
  // feature linear: d -> 1
  return tape.add_scalar(tape.matmul(temporal, tape.param(feature_w)),
                         tape.param(feature_b));
}

TensorId lag_similarity(Tape& tape, TensorId q, TensorId r) {
  // read shapes before recording ops: node storage may reallocate
  const Eigen::Index rows = tape.value(q).rows();
  if (rows != tape.value(r).rows() ||
      tape.value(q).cols() != tape.value(r).cols())
    throw ShapeError("lag_similarity: shape mismatch " +
                     shape_str(tape.value(q)) + " vs " +
                     shape_str(tape.value(r)));
  return tape.scale(tape.sum(tape.mul(q, r)),
                    1.0 / static_cast<double>(rows));
}

MacroAttention macro_attend(Tape& tape, TensorId x_g_emb, TensorId x_m_emb) {
  const Eigen::Index L = tape.value(x_m_emb).rows();
  if (L < 2)
    throw ShapeError("macro_attend: need at least 2 time steps, got " +
                     std::to_string(L));
  std::vector<TensorId> rolled;
  std::vector<TensorId> scores;
  rolled.reserve(L - 1);
  for (Eigen::Index tau = 1; tau < L; ++tau) {
    TensorId r = tape.roll_rows(x_m_emb, tau);
    rolled.push_back(r);
    scores.push_back(lag_similarity(tape, x_g_emb, r));
  }
  TensorId weights = tape.softmax_over_axis(tape.stack_scalars(scores), 0);
  // weighted sum over shifts
  TensorId h_m{};
  for (size_t i = 0; i < rolled.size(); ++i) {
    TensorId w_i = tape.element(weights, static_cast<Eigen::Index>(i), 0);
    TensorId term = tape.mul_scalar(rolled[i], w_i);
    h_m = (i == 0) ? term : tape.add(h_m, term);
  }
  return {weights, h_m};
}

CryptoPulseModel::CryptoPulseModel(const ModelConfig& cfg)
    : cfg_(cfg),
      emb_target_("emb_target",
                  {cfg.d_model, cfg.kernel_width, 5}),
      emb_macro_("emb_macro",
                 {cfg.d_model, cfg.kernel_width, 5 * cfg.n_macro}),
      emb_sent_("emb_sent", {cfg.d_model, cfg.kernel_width, 1}),
      zeta_delta_("zeta_delta", cfg.d_model, cfg.window_length),
      zeta_kappa_("zeta_kappa", cfg.d_model, cfg.window_length),
      zeta_gamma_("zeta_gamma", 2 * cfg.d_model, cfg.window_length),
      dyn_w_("dyn.w", 1, cfg.window_length),
      dyn_b_("dyn.b", 1, 1) {}

void CryptoPulseModel::init(RngStream& rng) {
  emb_target_.init(rng);
  emb_macro_.init(rng);
  emb_sent_.init(rng);
  zeta_delta_.init(rng);
  zeta_kappa_.init(rng);
  zeta_gamma_.init(rng);
  dyn_w_.init_uniform(rng, cfg_.window_length);
}

std::vector<Parameter*> CryptoPulseModel::parameters() {
  std::vector<Parameter*> out;
  for (auto* group : {&emb_target_, &emb_macro_, &emb_sent_})
    for (Parameter* p : group->parameters()) out.push_back(p);
  for (auto* head : {&zeta_delta_, &zeta_kappa_, &zeta_gamma_})
    for (Parameter* p : head->parameters()) out.push_back(p);
  out.push_back(&dyn_w_);
  out.push_back(&dyn_b_);
  return out;
}

ForwardResult CryptoPulseModel::forward(Tape& tape, const WindowSample& sample,
                                        bool training, RngStream& rng) {
  const int L = cfg_.window_length;
  if (sample.x_g.rows() != L)
    throw ShapeError("forward: x_g has " + std::to_string(sample.x_g.rows()) +
                     " rows, expected " + std::to_string(L));
  if (sample.x_m.cols() != 5 * cfg_.n_macro)
    throw ShapeError("forward: x_m has " + std::to_string(sample.x_m.cols()) +
                     " channels, expected " + std::to_string(5 * cfg_.n_macro));
  const double rate = cfg_.dropout;

  TensorId x_g = tape.input(sample.x_g);
  TensorId x_g_emb =
      tape.dropout(emb_target_.apply(tape, x_g), rate, rng, training);
  TensorId x_m_emb = tape.dropout(emb_macro_.apply(tape, tape.input(sample.x_m)),
                                  rate, rng, training);

  MacroAttention attn = macro_attend(tape, x_g_emb, x_m_emb);
  TensorId h_m = tape.dropout(attn.h_m, rate, rng, training);
  TensorId delta1 = zeta_delta_.apply(tape, h_m, rate, rng, training);

  // dynamics branch: temporal linear over last-close-normalized closes
  Vector closes = sample.x_g.col(3);
  closes.array() -= sample.last_close;
  TensorId delta2 = tape.add_scalar(
      tape.matmul(tape.param(dyn_w_), tape.input(closes)), tape.param(dyn_b_));

  // sentiment-guided rescaling and fusion
  TensorId kappa{};
  TensorId gamma_in{};
  if (cfg_.variant == Variant::xs) {
    kappa = tape.scalar(1.0);
    gamma_in = tape.concat_cols(
        x_g_emb, tape.input(Matrix::Zero(L, cfg_.d_model)));
  } else {
    TensorId s_emb = tape.dropout(
        emb_sent_.apply(tape, tape.input(Matrix(sample.sentiment))), rate, rng,
        training);
    kappa = tape.tanh(zeta_kappa_.apply(tape, s_emb, rate, rng, training));
    gamma_in = tape.concat_cols(x_g_emb, s_emb);
  }
  TensorId gamma =
      tape.sigmoid(zeta_gamma_.apply(tape, gamma_in, rate, rng, training));

  TensorId p_last = tape.scalar(sample.last_close);
  TensorId p1 = tape.add(p_last, tape.mul(kappa, delta1));
  TensorId p2 = tape.add(p_last, tape.mul(kappa, delta2));
  TensorId one_minus_gamma = tape.sub(tape.scalar(1.0), gamma);
  TensorId pred =
      tape.add(tape.mul(gamma, p1), tape.mul(one_minus_gamma, p2));

  ForwardResult result;
  result.pred = pred;
  result.p1 = p1;
  result.p2 = p2;
  result.kappa = kappa;
  result.gamma = gamma;
  result.delta1 = delta1;
  result.delta2 = delta2;
  result.record = PredictionRecord{
      sample.target_date,        tape.scalar_value(p1),
      tape.scalar_value(p2),     tape.scalar_value(kappa),
      tape.scalar_value(gamma),  tape.scalar_value(pred),
      sample.target_close};
  return result;
}

}  // namespace cpulse
