#include <doctest.h>

#include <cmath>

#include "cryptopulse/embedding.hpp"
#include "cryptopulse/grad_check.hpp"

using namespace cpulse;

TEST_CASE("positional encoding row 0 alternates 0,1") {
  Matrix pe = positional_encoding(5, 8);
  for (int i = 0; i < 4; ++i) {
    CHECK(pe(0, 2 * i) == doctest::Approx(0.0));
    CHECK(pe(0, 2 * i + 1) == doctest::Approx(1.0));
  }
  // spot-check pos 1: first pair is sin(1), cos(1)
  CHECK(pe(1, 0) == doctest::Approx(std::sin(1.0)));
  CHECK(pe(1, 1) == doctest::Approx(std::cos(1.0)));
  // frequency decays with the feature index
  CHECK(std::abs(pe(1, 6)) < std::abs(pe(1, 0)));
  CHECK_THROWS_AS(positional_encoding(5, 7), ShapeError);
}

TEST_CASE("positional encoding entries stay in [-1, 1]") {
  Matrix pe = positional_encoding(64, 32);
  CHECK(pe.maxCoeff() <= 1.0);
  CHECK(pe.minCoeff() >= -1.0);
}

TEST_CASE("zero input with zero parameters embeds to the position matrix") {
  EmbeddingConfig cfg{6, 3, 5};
  Embedding emb("e", cfg);  // parameters start at zero
  Tape t;
  Matrix y = t.value(emb.apply(t, t.input(Matrix::Zero(7, 5))));
  CHECK(y.isApprox(positional_encoding(7, 6), 1e-15));
}

TEST_CASE("embedding preserves the time axis and maps to d_model") {
  EmbeddingConfig cfg{8, 3, 5};
  Embedding emb("e", cfg);
  RngStream rng(1);
  emb.init(rng);
  Tape t;
  Matrix y = t.value(emb.apply(t, t.input(Matrix::Random(7, 5))));
  CHECK(y.rows() == 7);
  CHECK(y.cols() == 8);

  CHECK_THROWS_AS(emb.apply(t, t.input(Matrix::Random(7, 4))), ShapeError);
}

TEST_CASE("embedding config validation") {
  CHECK_THROWS_AS(Embedding("e", EmbeddingConfig{7, 3, 5}), ShapeError);
  CHECK_THROWS_AS(Embedding("e", EmbeddingConfig{8, 2, 5}), ShapeError);
}

TEST_CASE("embedding gradients pass a finite-difference check") {
  EmbeddingConfig cfg{4, 3, 2};
  Embedding emb("e", cfg);
  RngStream rng(3);
  emb.init(rng);
  Matrix x = Matrix::Random(5, 2);
  auto params = emb.parameters();
  auto loss_fn = [&] {
    Tape t;
    TensorId y = emb.apply(t, t.input(x));
    TensorId l = t.sum(t.mul(y, y));
    t.backward(l);
    return t.scalar_value(l);
  };
  CHECK(grad_check(loss_fn, params) < 1e-6);
}

TEST_CASE("flatten_macro places asset a channel c at column a*C+c") {
  Matrix a = Matrix::Constant(3, 5, 1.0);
  Matrix b = Matrix::Constant(3, 5, 2.0);
  for (int c = 0; c < 5; ++c) b(0, c) = 20 + c;
  Matrix flat = flatten_macro({a, b});
  CHECK(flat.rows() == 3);
  CHECK(flat.cols() == 10);
  CHECK(flat(1, 2) == 1.0);
  for (int c = 0; c < 5; ++c) CHECK(flat(0, 5 + c) == 20 + c);

  CHECK_THROWS_AS(flatten_macro({}), ShapeError);
  CHECK_THROWS_AS(flatten_macro({a, Matrix::Zero(2, 5)}), ShapeError);
}
