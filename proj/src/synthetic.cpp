#include "negmine/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <Eigen/QR>

#include "negmine/emb_io.hpp"
#include "negmine/positive_synthesis.hpp"

namespace negmine {

namespace {

// Rows of `centers` chosen by `which`, each perturbed with `spread`.
RowMatrix<double> scatter(const RowMatrix<double>& centers, const std::vector<Index>& which,
                          double spread, Rng& rng) {
  RowMatrix<double> out(static_cast<Index>(which.size()), centers.cols());
  for (std::size_t k = 0; k < which.size(); ++k)
    out.row(static_cast<Index>(k)) = perturb(centers.row(which[k]), spread, rng).transpose();
  return out;
}

std::vector<Index> round_robin(Index count, Index anchors) {
  std::vector<Index> which(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) which[static_cast<std::size_t>(k)] = k % anchors;
  return which;
}

std::vector<Index> uniform_choice(Index count, Index anchors, Rng& rng) {
  std::uniform_int_distribution<Index> pick(0, anchors - 1);
  std::vector<Index> which(static_cast<std::size_t>(count));
  for (auto& w : which) w = pick(rng);
  return which;
}

std::vector<std::string> numbered(const std::string& prefix, Index count) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

}  // namespace

EmbeddingMatrixd sample_cluster(const Eigen::VectorXd& center, double spread, Index count, Rng& rng) {
  if (std::abs(center.norm() - 1.0) > kUnitNormTolerance)
    throw Error(ErrorCode::NonUnitRow, "cluster center is not unit-norm");
  RowMatrix<double> out(count, center.size());
  for (Index k = 0; k < count; ++k) out.row(k) = perturb(center, spread, rng).transpose();
  return EmbeddingMatrixd(std::move(out));
}

SyntheticBenchmark build_benchmark(const BenchmarkSpec& spec) {
  if (!(spec.tau > 0.0 && spec.tau < 1.0)) throw Error(ErrorCode::InvalidConfig, "tau must lie in (0, 1)");
  if (spec.K < 2) throw Error(ErrorCode::InvalidConfig, "K must be >= 2");
  if (spec.T < 100) throw Error(ErrorCode::InvalidConfig, "T must be >= 100");
  if (spec.ood_anchors < 1) throw Error(ErrorCode::InvalidConfig, "need at least one OOD anchor");
  if (spec.extra_negative_anchors < 0 || spec.id_images < 1 || spec.ood_images < 1)
    throw Error(ErrorCode::InvalidConfig, "image and anchor counts must be positive");
  const Index fresh = spec.ood_anchors + spec.extra_negative_anchors;
  if (spec.K + fresh > spec.dim)
    throw Error(ErrorCode::InfeasibleSeparation,
                "dim " + std::to_string(spec.dim) + " cannot hold " + std::to_string(spec.K + fresh) +
                    " orthogonal anchors");
  if (!(spec.separation >= 0.0 && spec.separation < 1.0))
    throw Error(ErrorCode::InfeasibleSeparation, "separation must lie in [0, 1)");

  auto rng = make_stream(spec.seed, Stream::Synthetic);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Orthonormal frame: first K columns are ID anchors, the rest seed the
  // negative regions.
  Eigen::MatrixXd gauss(spec.dim, spec.K + fresh);
  for (Index j = 0; j < gauss.cols(); ++j)
    for (Index i = 0; i < gauss.rows(); ++i) gauss(i, j) = normal(rng);
  const Eigen::MatrixXd frame =
      Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ() *
      Eigen::MatrixXd::Identity(spec.dim, spec.K + fresh);

  RowMatrix<double> id_anchors = frame.leftCols(spec.K).transpose();

  // Each OOD anchor leans toward a random direction t inside the ID span, so
  // its cosine to ID anchor j is separation * <t, a_j> <= separation.
  RowMatrix<double> neg_anchors(fresh, spec.dim);
  const double lean = spec.separation;
  for (Index b = 0; b < fresh; ++b) {
    Eigen::VectorXd anchor = frame.col(spec.K + b);
    if (b < spec.ood_anchors && lean > 0.0) {
      Eigen::VectorXd coeffs(spec.K);
      for (Index i = 0; i < spec.K; ++i) coeffs(i) = normal(rng);
      const Eigen::VectorXd t = (frame.leftCols(spec.K) * coeffs).normalized();
      anchor = std::sqrt(1.0 - lean * lean) * anchor + lean * t;
      anchor.normalize();
    }
    neg_anchors.row(b) = anchor.transpose();
  }
  RowMatrix<double> ood_anchors = neg_anchors.topRows(spec.ood_anchors);

  SyntheticBenchmark bench;
  bench.spec = spec;
  bench.id_texts = EmbeddingMatrixd(id_anchors, numbered("id_", spec.K));
  bench.id_images = EmbeddingMatrixd(
      scatter(id_anchors, round_robin(spec.id_images, spec.K), spec.spreads.id_image, rng));
  bench.ood_images = EmbeddingMatrixd(scatter(
      ood_anchors, round_robin(spec.ood_images, spec.ood_anchors), spec.spreads.ood_image, rng));

  const auto n_pos = static_cast<Index>(std::llround(spec.tau * static_cast<double>(spec.T)));
  const RowMatrix<double> pos = scatter(id_anchors, uniform_choice(n_pos, spec.K, rng),
                                        spec.spreads.wild_positive, rng);
  const RowMatrix<double> neg = scatter(neg_anchors, uniform_choice(spec.T - n_pos, fresh, rng),
                                        spec.spreads.wild_negative, rng);

  std::vector<Index> perm(static_cast<std::size_t>(spec.T));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  RowMatrix<double> wild(spec.T, spec.dim);
  bench.wild_truth.resize(static_cast<std::size_t>(spec.T));
  for (Index r = 0; r < spec.T; ++r) {
    const Index src = perm[static_cast<std::size_t>(r)];
    if (src < n_pos) {
      wild.row(r) = pos.row(src);
      bench.wild_truth[static_cast<std::size_t>(r)] = WildTag::Positive;
    } else {
      wild.row(r) = neg.row(src - n_pos);
      bench.wild_truth[static_cast<std::size_t>(r)] = WildTag::Negative;
    }
  }
  bench.wild_corpus = EmbeddingMatrixd(std::move(wild), numbered("wild_", spec.T));
  bench.true_tau = static_cast<double>(n_pos) / static_cast<double>(spec.T);
  return bench;
}

BenchmarkSpec benchmark_spec_from_json(const nlohmann::json& j) {
  BenchmarkSpec s;
  s.dim = j.value("dim", s.dim);
  s.K = j.value("K", s.K);
  s.T = j.value("T", s.T);
  s.tau = j.value("tau", s.tau);
  s.separation = j.value("separation", s.separation);
  s.id_images = j.value("id_images", s.id_images);
  s.ood_images = j.value("ood_images", s.ood_images);
  s.ood_anchors = j.value("ood_anchors", s.ood_anchors);
  s.extra_negative_anchors = j.value("extra_negative_anchors", s.extra_negative_anchors);
  s.seed = j.value("seed", s.seed);
  if (j.contains("spreads")) {
    const auto& sp = j.at("spreads");
    s.spreads.id_image = sp.value("id_image", s.spreads.id_image);
    s.spreads.ood_image = sp.value("ood_image", s.spreads.ood_image);
    s.spreads.wild_positive = sp.value("wild_positive", s.spreads.wild_positive);
    s.spreads.wild_negative = sp.value("wild_negative", s.spreads.wild_negative);
  }
  return s;
}

nlohmann::json to_json(const BenchmarkSpec& s) {
  return {{"dim", s.dim},
          {"K", s.K},
          {"T", s.T},
          {"tau", s.tau},
          {"separation", s.separation},
          {"id_images", s.id_images},
          {"ood_images", s.ood_images},
          {"ood_anchors", s.ood_anchors},
          {"extra_negative_anchors", s.extra_negative_anchors},
          {"seed", s.seed},
          {"spreads",
           {{"id_image", s.spreads.id_image},
            {"ood_image", s.spreads.ood_image},
            {"wild_positive", s.spreads.wild_positive},
            {"wild_negative", s.spreads.wild_negative}}}};
}

void write_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_emb(dir / "id_texts.emb", bench.id_texts);
  write_emb(dir / "id_images.emb", bench.id_images);
  write_emb(dir / "ood_images.emb", bench.ood_images);
  write_emb(dir / "wild.emb", bench.wild_corpus);

  std::ofstream truth(dir / "wild_truth.csv");
  if (!truth) throw Error(ErrorCode::Io, "cannot write wild_truth.csv");
  truth << "row,tag\n";
  for (std::size_t r = 0; r < bench.wild_truth.size(); ++r)
    truth << r << ',' << (bench.wild_truth[r] == WildTag::Positive ? "positive" : "negative") << '\n';

  nlohmann::json meta{{"true_tau", bench.true_tau},
                      {"seed", bench.spec.seed},
                      {"spreads", to_json(bench.spec)["spreads"]},
                      {"spec", to_json(bench.spec)}};
  std::ofstream out(dir / "meta.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace negmine
