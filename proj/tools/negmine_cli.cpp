// negmine: command-line front end for selection, positive synthesis, scoring,
// evaluation and the verification experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "negmine/config_json.hpp"
#include "negmine/emb_io.hpp"
#include "negmine/metrics.hpp"
#include "negmine/positive_synthesis.hpp"
#include "negmine/scoring.hpp"
#include "negmine/selection.hpp"
#include "negmine/synthetic.hpp"
#include "negmine/verify.hpp"

namespace fs = std::filesystem;
using namespace negmine;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return nlohmann::json::parse(in);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

EmbeddingMatrixd load_valid(const fs::path& path) {
  auto m = read_emb(path);
  require_valid(m, path.string());
  return m;
}

// Rows of a two-column integer/real CSV with a header line.
std::vector<std::pair<std::string, std::string>> read_csv_pairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::pair<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Format, path.string() + ": bad row '" + line + "'");
    rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return rows;
}

std::vector<std::vector<Index>> read_groups(const fs::path& path) {
  std::map<long long, std::vector<Index>> by_id;
  for (const auto& [gid, idx] : read_csv_pairs(path)) by_id[std::stoll(gid)].push_back(std::stoll(idx));
  std::vector<std::vector<Index>> groups;
  for (auto& [gid, members] : by_id) groups.push_back(std::move(members));
  return groups;
}

Eigen::VectorXd read_scores(const fs::path& path) {
  const auto rows = read_csv_pairs(path);
  Eigen::VectorXd s(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) s(static_cast<Index>(k)) = std::stod(rows[k].second);
  return s;
}

int run_synth(const fs::path& config, const fs::path& out) {
  const auto bench = build_benchmark(benchmark_spec_from_json(read_json(config)));
  write_benchmark(bench, out);
  std::cout << "wrote benchmark to " << out << " (true tau " << bench.true_tau << ")\n";
  return 0;
}

int run_select(const fs::path& corpus_path, Index alpha, Index top, Index groups,
               const std::string& grouping, std::uint64_t seed, const fs::path& out) {
  const auto corpus = load_valid(corpus_path);
  ScoreConfig config;
  config.alpha = alpha;
  config.L = top;
  config.B = groups;
  config.seed = seed;
  config.grouping = grouping == "random" ? GroupingMode::Random : GroupingMode::RoundRobin;
  const auto result = select_and_partition(corpus, config);

  fs::create_directories(out);
  write_emb(out / "selected.emb", corpus.gather(result.selected));
  std::ofstream order(out / "order.csv");
  order << "rank,corpus_index,rep_score\n";
  for (std::size_t r = 0; r < result.order.size(); ++r)
    order << r << ',' << result.order[r] << ',' << format_g(result.rep_scores(result.order[r]), 17) << '\n';
  std::ofstream gcsv(out / "groups.csv");
  gcsv << "group_id,corpus_index\n";
  for (std::size_t g = 0; g < result.groups.size(); ++g)
    for (Index idx : result.groups[g]) gcsv << g << ',' << idx << '\n';
  std::cout << "selected " << result.selected.size() << " of " << corpus.rows() << " rows into "
            << result.groups.size() << " groups\n";
  return 0;
}

int run_synth_positives(const fs::path& id_path, double sigma, std::uint64_t seed, const fs::path& out) {
  const auto bank = synthesize_bank(load_valid(id_path), sigma, seed);
  write_emb(out, bank.vectors);
  return 0;
}

int run_score(const fs::path& id_path, const fs::path& wild_path, const std::string& groups_path,
              const std::string& positives_path, const fs::path& images_path,
              const std::string& config_path, const std::string& method_name, const fs::path& out) {
  const Method method = method_from_string(method_name);
  const ScoreConfig config =
      config_path.empty() ? ScoreConfig{} : score_config_from_json(read_json(config_path));
  const auto id_texts = load_valid(id_path);
  const auto images = load_valid(images_path);
  const auto wild_all = load_valid(wild_path);

  // The negative pool is every wild row a group mentions, in group order.
  EmbeddingMatrixd pool = wild_all;
  std::vector<std::vector<Index>> groups;
  if (!groups_path.empty()) {
    std::vector<Index> rows;
    for (auto g : read_groups(groups_path)) {
      auto& cols = groups.emplace_back();
      for (Index corpus_index : g) {
        if (corpus_index < 0 || corpus_index >= wild_all.rows())
          throw Error(ErrorCode::Format, "group row " + std::to_string(corpus_index) + " not in " + wild_path.string());
        cols.push_back(static_cast<Index>(rows.size()));
        rows.push_back(corpus_index);
      }
    }
    pool = wild_all.gather(rows);
  }

  std::optional<PositiveBank> positives;
  if (!positives_path.empty()) {
    positives = PositiveBank{load_valid(positives_path), config.sigma, config.seed};
  } else if (method == Method::Debiased || method == Method::GroupedDebiased) {
    positives = synthesize_bank(id_texts, config.sigma, config.seed);
  }

  const auto ctx = make_context(images, id_texts, pool, std::move(groups),
                                positives ? &*positives : nullptr, config);
  const auto report = score(ctx, method);

  std::ofstream csv(out);
  if (!csv) throw Error(ErrorCode::Io, "cannot write " + out.string());
  csv << "index,score\n";
  for (Index i = 0; i < report.scores.size(); ++i) csv << i << ',' << format_g(report.scores(i), 9) << '\n';
  std::cerr << "scored " << report.scores.size() << " inputs with " << to_string(method)
            << ", clamped " << report.clamp_count << '\n';
  return 0;
}

int run_eval(const fs::path& id_scores, const fs::path& ood_scores, double tpr, const fs::path& out) {
  const auto report = evaluate(read_scores(id_scores), read_scores(ood_scores), tpr);
  write_json(out, to_json(report));
  std::cout << "AUROC " << report.auroc << "  FPR@" << tpr << " " << report.fpr95 << '\n';
  return 0;
}

int run_verify(const std::string& experiment, std::uint64_t seed, const std::string& config_path,
               const std::string& out) {
  if (experiment == "mixture-expansion") {
    const auto check = run_expansion_check(seed);
    std::cout << "spaces " << check.spaces << " max_abs_deviation "
              << format_g(check.max_abs_deviation, 6) << '\n';
    return check.max_abs_deviation <= 1e-10 ? 0 : 1;
  }
  if (experiment == "bias-rate") {
    const nlohmann::json j = config_path.empty() ? nlohmann::json::object() : read_json(config_path);
    const double kappa = j.value("kappa", 0.01);
    const double tau = j.value("tau", 0.5);
    const auto scenario = make_bias_scenario(j.value("labels", Index{4}), j.value("id_labels", Index{10}),
                                             j.value("dim", Index{16}), kappa, tau,
                                             j.value("seed", seed));
    BiasExperimentConfig cfg;
    cfg.kappa = kappa;
    cfg.trials = j.value("trials", Index{1000});
    cfg.lambda = j.value("lambda", 1.0);
    cfg.seed = j.value("seed", seed);
    if (j.contains("grid")) {
      for (const auto& p : j.at("grid")) cfg.grid.push_back({p.at("m").get<Index>(), p.at("n").get<Index>()});
    } else {
      const Index n = j.value("n", Index{100000});
      for (Index m : j.value("m_grid", std::vector<Index>{100, 1000, 10000, 100000})) cfg.grid.push_back({m, n});
    }
    const auto report = run_bias_experiment(scenario.space, scenario.x_aff, scenario.id_aff, cfg);
    const auto doc = to_json(report);
    if (out.empty()) std::cout << doc.dump(2) << '\n';
    else write_json(out, doc);
    return 0;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + experiment + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debiased negative-label OOD scoring"};
  app.require_subcommand(1);

  fs::path synth_config, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic benchmark");
  synth->add_option("--config", synth_config, "Benchmark JSON")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  fs::path sel_corpus, sel_out;
  Index sel_alpha = 100, sel_top = 0, sel_groups = 1;
  std::string sel_grouping = "round_robin";
  std::uint64_t sel_seed = 0;
  auto* select = app.add_subcommand("select", "Rank a wild corpus by representativeness and group the top rows");
  select->add_option("--corpus", sel_corpus)->required();
  select->add_option("--alpha", sel_alpha)->required();
  select->add_option("--top", sel_top, "L")->required();
  select->add_option("--groups", sel_groups, "B")->required();
  select->add_option("--grouping", sel_grouping)->check(CLI::IsMember({"round_robin", "random"}));
  select->add_option("--seed", sel_seed, "Seed for random grouping");
  select->add_option("--out", sel_out)->required();

  fs::path pos_id, pos_out;
  double pos_sigma = 0.001;
  std::uint64_t pos_seed = 0;
  auto* positives = app.add_subcommand("synth-positives", "Perturb ID text embeddings into a positive bank");
  positives->add_option("--id", pos_id)->required();
  positives->add_option("--sigma", pos_sigma)->required();
  positives->add_option("--seed", pos_seed)->required();
  positives->add_option("--out", pos_out)->required();

  fs::path sc_id, sc_wild, sc_images, sc_out;
  std::string sc_groups, sc_positives, sc_config, sc_method = "grouped";
  auto* scorecmd = app.add_subcommand("score", "Score test images");
  scorecmd->add_option("--id", sc_id)->required();
  scorecmd->add_option("--wild", sc_wild)->required();
  scorecmd->add_option("--groups", sc_groups);
  scorecmd->add_option("--positives", sc_positives);
  scorecmd->add_option("--images", sc_images)->required();
  scorecmd->add_option("--config", sc_config);
  scorecmd->add_option("--method", sc_method)->check(CLI::IsMember({"mcm", "neglabel", "debiased", "grouped"}));
  scorecmd->add_option("--out", sc_out)->required();

  fs::path ev_id, ev_ood, ev_out;
  double ev_tpr = 0.95;
  auto* eval = app.add_subcommand("eval", "AUROC and FPR at a target TPR");
  eval->add_option("--id-scores", ev_id)->required();
  eval->add_option("--ood-scores", ev_ood)->required();
  eval->add_option("--tpr", ev_tpr);
  eval->add_option("--out", ev_out)->required();

  std::string vf_experiment, vf_config, vf_out;
  std::uint64_t vf_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run a verification experiment");
  // Short aliases are kept for scripts written against the original experiment names.
  const std::map<std::string, std::string> experiments{{"mixture-expansion", "mixture-expansion"},
                                                       {"bias-rate", "bias-rate"},
                                                       {"oracle-eq7", "mixture-expansion"},
                                                       {"thm2", "bias-rate"}};
  verify->add_option("--experiment", vf_experiment)->required()->transform(CLI::Transformer(experiments));
  verify->add_option("--seed", vf_seed);
  verify->add_option("--config", vf_config);
  verify->add_option("--out", vf_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return run_synth(synth_config, synth_out);
    if (*select) return run_select(sel_corpus, sel_alpha, sel_top, sel_groups, sel_grouping, sel_seed, sel_out);
    if (*positives) return run_synth_positives(pos_id, pos_sigma, pos_seed, pos_out);
    if (*scorecmd)
      return run_score(sc_id, sc_wild, sc_groups, sc_positives, sc_images, sc_config, sc_method, sc_out);
    if (*eval) return run_eval(ev_id, ev_ood, ev_tpr, ev_out);
    if (*verify) return run_verify(vf_experiment, vf_seed, vf_config, vf_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
