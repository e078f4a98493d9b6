#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "negmine/core_types.hpp"
#include "negmine/rng.hpp"

namespace negmine {

struct ClusterSpreads {
  double id_image = 0.08;
  double ood_image = 0.08;
  double wild_positive = 0.08;
  double wild_negative = 0.08;
};

struct BenchmarkSpec {
  Index dim = 64;
  Index K = 10;
  Index T = 2000;
  double tau = 0.5;
  ClusterSpreads spreads;
  double separation = 0.2;  // max cosine between an OOD anchor and any ID anchor
  Index id_images = 500;
  Index ood_images = 500;
  Index ood_anchors = 10;
  Index extra_negative_anchors = 10;  // negative-only wild regions no OOD image comes from
  std::uint64_t seed = 0;
};

enum class WildTag { Positive, Negative };

/// Seeded ID/OOD/wild embeddings with the ground-truth mixture tags. The tags
/// and realized tau are for evaluation only; scoring takes the matrices alone.
struct SyntheticBenchmark {
  EmbeddingMatrixd id_texts;
  EmbeddingMatrixd id_images;
  EmbeddingMatrixd ood_images;
  EmbeddingMatrixd wild_corpus;
  std::vector<WildTag> wild_truth;
  double true_tau = 0.0;
  BenchmarkSpec spec;
};

/// `count` rows of l2(center + spread * eps). spread == 0 reproduces center.
EmbeddingMatrixd sample_cluster(const Eigen::VectorXd& center, double spread, Index count, Rng& rng);

SyntheticBenchmark build_benchmark(const BenchmarkSpec& spec);

BenchmarkSpec benchmark_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchmarkSpec& spec);

/// id_texts.emb, id_images.emb, ood_images.emb, wild.emb, wild_truth.csv, meta.json
void write_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir);

}  // namespace negmine
