#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "negmine/config_json.hpp"
#include "negmine/emb_io.hpp"
#include "test_helpers.hpp"

using namespace negmine;
using negmine::testing::rows_of;

TEST_CASE("validate accepts orthonormal rows") {
  CHECK_FALSE(validate(rows_of({{1, 0}, {0, 1}})).has_value());
}

TEST_CASE("validate reports the first non-unit row with its norm") {
  const auto v = validate(rows_of({{2, 0}}));
  REQUIRE(v.has_value());
  CHECK(v->kind == ErrorCode::NonUnitRow);
  CHECK(v->row == 0);
  CHECK(v->norm == doctest::Approx(2.0));

  const auto w = validate(rows_of({{1, 0}, {0, 1}, {0.5, 0.5}}));
  REQUIRE(w.has_value());
  CHECK(w->row == 2);
}

TEST_CASE("validate rejects a label count mismatch") {
  EmbeddingMatrixd m(rows_of({{1, 0}, {0, 1}}).data(), {"only-one"});
  const auto v = validate(m);
  REQUIRE(v.has_value());
  CHECK(v->kind == ErrorCode::LabelCountMismatch);
}

TEST_CASE("validate rejects empty and one-dimensional matrices") {
  CHECK(validate(EmbeddingMatrixd{})->kind == ErrorCode::EmptyMatrix);
  CHECK(validate(rows_of({{1}}))->kind == ErrorCode::EmptyMatrix);
}

TEST_CASE("norm tolerance is 1e-4") {
  CHECK_FALSE(validate(rows_of({{1.00009, 0}})).has_value());
  CHECK(validate(rows_of({{1.0002, 0}})).has_value());
  CHECK(validate(rows_of({{std::nan(""), 0}})).has_value());
}

TEST_CASE("EMB1 header is little-endian and bit-exact") {
  const auto dir = negmine::testing::scratch_dir("emb_header");
  write_emb(dir / "m.emb", rows_of({{1, 0}, {0, 1}, {0.6, 0.8}}));
  std::ifstream in(dir / "m.emb", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 16 + 3 * 2 * 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "EMB1");
  CHECK(std::vector<unsigned char>(bytes.begin() + 4, bytes.begin() + 16) ==
        std::vector<unsigned char>{1, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0});
  // 1.0f = 0x3F800000
  CHECK(std::vector<unsigned char>(bytes.begin() + 16, bytes.begin() + 20) ==
        std::vector<unsigned char>{0x00, 0x00, 0x80, 0x3F});
  CHECK_FALSE(std::filesystem::exists(dir / "m.labels"));
}

TEST_CASE("EMB1 round trip is bit-identical for random float matrices") {
  const auto dir = negmine::testing::scratch_dir("emb_roundtrip");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Index> size(1, 40);
  std::normal_distribution<float> normal;
  for (int trial = 0; trial < 25; ++trial) {
    RowMatrix<float> data(size(rng), size(rng) + 1);
    for (Index k = 0; k < data.size(); ++k) data.data()[k] = normal(rng);
    std::vector<std::string> labels;
    if (trial % 2)
      for (Index i = 0; i < data.rows(); ++i) labels.push_back("label " + std::to_string(i) + " ü");
    const EmbeddingMatrixf m(data, labels);
    write_emb(dir / "r.emb", m);
    const auto back = read_emb_f32(dir / "r.emb");
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.dim() == m.dim());
    CHECK(std::memcmp(back.data().data(), m.data().data(), sizeof(float) * m.data().size()) == 0);
    CHECK(back.labels() == labels);
    std::filesystem::remove(dir / "r.labels");
  }
}

TEST_CASE("EMB1 reader rejects malformed files") {
  const auto dir = negmine::testing::scratch_dir("emb_bad");
  write_emb(dir / "ok.emb", rows_of({{1, 0}, {0, 1}}));
  std::ifstream in(dir / "ok.emb", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  auto write_raw = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    return dir / name;
  };
  auto code_of = [](const std::filesystem::path& p) {
    try {
      read_emb(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of(write_raw("trunc.emb", bytes.substr(0, bytes.size() - 1))) == ErrorCode::Format);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(code_of(write_raw("magic.emb", bad_magic)) == ErrorCode::Format);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK(code_of(write_raw("version.emb", bad_version)) == ErrorCode::Format);
  CHECK_THROWS_AS(read_emb(dir / "missing.emb"), Error);
}

TEST_CASE("labels sidecar replaces the extension") {
  CHECK(labels_path_for("a/selected.emb") == std::filesystem::path("a/selected.labels"));
}

TEST_CASE("ScoreConfig defaults and validation") {
  ScoreConfig c;
  CHECK(c.kappa == 0.01);
  CHECK(c.B == 100);
  CHECK(c.tau == 0.5);
  CHECK(c.sigma == 0.001);
  CHECK(c.L == 12000);
  CHECK(c.alpha == 100);
  CHECK_NOTHROW(validate(c));

  auto bad = [](auto mutate) {
    ScoreConfig x;
    mutate(x);
    CHECK_THROWS_AS(validate(x), Error);
  };
  bad([](ScoreConfig& x) { x.kappa = 0; });
  bad([](ScoreConfig& x) { x.tau = 1.0; });
  bad([](ScoreConfig& x) { x.tau = -0.1; });
  bad([](ScoreConfig& x) { x.sigma = -1; });
  bad([](ScoreConfig& x) { x.B = 0; });
  bad([](ScoreConfig& x) { x.B = x.L + 1; });
  bad([](ScoreConfig& x) { x.alpha = 0; });
  bad([](ScoreConfig& x) { x.mass_floor = 0; });

  ScoreConfig zero_tau;
  zero_tau.tau = 0.0;
  CHECK_NOTHROW(validate(zero_tau));
}

TEST_CASE("ScoreConfig JSON keeps defaults for missing keys") {
  const auto c = score_config_from_json(nlohmann::json::parse(R"({"tau": 0.3, "lambda": 2.5, "B": 4})"));
  CHECK(c.tau == 0.3);
  CHECK(c.B == 4);
  CHECK(c.lambda_mode == LambdaMode::Fixed);
  CHECK(c.lambda_value == 2.5);
  CHECK(c.kappa == 0.01);
  const auto back = score_config_from_json(to_json(c));
  CHECK(back.lambda_value == 2.5);
  CHECK(score_config_from_json(nlohmann::json::parse(R"({"lambda": "group_size"})")).lambda_mode ==
        LambdaMode::GroupSize);
  CHECK_THROWS_AS(score_config_from_json(nlohmann::json::parse(R"({"lambda": "m"})")), Error);
}
