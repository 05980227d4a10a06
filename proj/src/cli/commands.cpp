// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "procalign/embedspace.hpp"
#include "procalign/eval.hpp"
#include "procalign/lexicon.hpp"
#include "procalign/log.hpp"
#include "procalign/retrieval.hpp"
#include "procalign/simd/kernels.hpp"
#include "procalign/solver.hpp"
#include "procalign/synthkit.hpp"
#include "procalign/trainer.hpp"

#ifndef PROCALIGN_VERSION
#define PROCALIGN_VERSION "dev"
#endif

namespace procalign::cli {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

// Routes library warnings to the command's error stream while alive.
class ScopedSink {
 public:
  explicit ScopedSink(std::ostream& err)
      : previous_(set_log_sink([&err](std::string_view line) { err << line << '\n'; })) {}
  ~ScopedSink() { set_log_sink(std::move(previous_)); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  LogSink previous_;
};

// Parses `args` with CLI11. Returns an exit code when the command should
// stop (help requested or a parse error), nullopt to continue.
std::optional<int> parse(CLI::App& app, std::span<const std::string> args, Streams io) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << app.get_name() << ": " << e.what() << '\n';
    return kExitConfig;
  }
  return std::nullopt;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string general9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string platform_note() {
  std::string note;
#if defined(__linux__)
  note = "linux";
#elif defined(__APPLE__)
  note = "darwin";
#else
  note = "unknown-os";
#endif
#if defined(__x86_64__)
  note += " x86_64";
#elif defined(__aarch64__)
  note += " aarch64";
#endif
  note += " simd=" + std::string(simd::isa_name(simd::active_isa()));
  return note;
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "csls") return Metric::Csls;
  if (name == "cosine") return Metric::Cosine;
  return std::nullopt;
}

struct EmbeddingFlags {
  std::size_t max_vocab = 200000;
  bool normalize = true;

  void add_to(CLI::App& app) {
    app.add_option("--max-vocab", max_vocab, "Rows read per embedding file")
        ->capture_default_str();
    app.add_option("--normalize", normalize, "Unit-normalize rows on load (true/false)")
        ->capture_default_str();
  }

  EmbeddingSpace load(const std::string& path, const std::string& lang) const {
    return load_embeddings(path, LoadOptions{max_vocab, normalize, lang});
  }
};

// "key = value" lines, readable back through --config.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, "\"" + value + "\"");
  }
  void set(const std::string& key, std::size_t value) {
    entries_.emplace_back(key, std::to_string(value));
  }
  void set_bool(const std::string& key, bool value) {
    entries_.emplace_back(key, value ? "true" : "false");
  }
  void note(const std::string& text) { notes_.push_back(text); }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    out << "# procalign " << PROCALIGN_VERSION << " run manifest\n";
    out << "# re-run: procalign align --config " << path.filename().string()
        << " --out <fresh-dir>\n";
    for (const auto& n : notes_) out << "# " << n << '\n';
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> notes_;
};

std::string epoch_dir_name(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%03zu", epoch);
  return buf;
}

SeedLexicon build_seed(const std::string& spec, const SpaceSet& spaces, bool three_way) {
  auto pairs_with = [&](const EmbeddingSpace& other, const std::string& file) -> PairLexicon {
    if (spec == "identical") return seed_identical(spaces.pivot, other);
    if (spec == "numerals") return seed_numerals(spaces.pivot, other);
    return parse_dictionary_file(file, spaces.pivot, other).lexicon;
  };
  std::string target_file;
  std::string support_file;
  if (spec.rfind("file:", 0) == 0) {
    const std::string files = spec.substr(5);
    const auto comma = files.find(',');
    target_file = files.substr(0, comma);
    if (comma != std::string::npos) support_file = files.substr(comma + 1);
    if (three_way && support_file.empty()) {
      throw ShapeError("three-way file seeds take two dictionaries: file:PIVOT_TGT,PIVOT_SUP");
    }
  } else if (spec != "identical" && spec != "numerals") {
    throw ShapeError("unknown seed '" + spec + "' (identical, numerals, file:PATH)");
  }
  PairLexicon to_target = pairs_with(spaces.target, target_file);
  if (!three_way) return to_target;
  TripleLexicon triples = triangulate(to_target, pairs_with(*spaces.support, support_file));
  if (triples.empty()) throw EmptyLexiconError("empty seed: no pivot word shared by both seeds");
  return triples;
}

void write_metrics_line(std::ostream& out, const EpochRecord& r) {
  out << r.epoch << '\t' << r.induced_size << '\t' << general9(r.validation) << '\t'
      << general9(r.objective) << '\n';
}

template <typename Fn>
int guarded(Streams io, const char* command, bool empty_is_config_error, Fn&& body) {
  try {
    return body();
  } catch (const EmptyLexiconError& e) {
    io.err << command << ": " << e.what() << '\n';
    return empty_is_config_error ? kExitConfig : kExitEmptyLexicon;
  } catch (const std::exception& e) {
    io.err << command << ": " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int cmd_align(std::span<const std::string> args, Streams io) {
  ScopedSink sink(io.err);
  CLI::App app{"Bootstrapped alignment of embedding spaces", "procalign align"};
  app.set_config("--config", "", "key = value configuration file");

  std::string src_path, tgt_path, sup_path, out_dir, test_dict;
  std::string mode_str = "gpa";
  std::string seed_spec = "identical";
  std::string rank_filter = "both";
  TrainConfig config;
  EmbeddingFlags emb;

  app.add_option("--src-emb", src_path, "Source (pivot) embeddings")->required();
  app.add_option("--tgt-emb", tgt_path, "Target embeddings")->required();
  app.add_option("--sup-emb", sup_path, "Support embeddings (mgpa, mgpa+)");
  app.add_option("--mode", mode_str, "pa, gpa, mgpa or mgpa+")
      ->check(CLI::IsMember({"pa", "gpa", "mgpa", "mgpa+"}))
      ->capture_default_str();
  app.add_option("--seed", seed_spec, "identical, numerals or file:PATH[,PATH]")
      ->capture_default_str();
  app.add_option("--out", out_dir, "Fresh run directory")->required();
  app.add_option("--test-dict", test_dict, "Evaluate the best map on this dictionary");
  app.add_option("--patience", config.patience)->capture_default_str();
  app.add_option("--inner-iters", config.inner_iters)->capture_default_str();
  app.add_option("--rank-max", config.rank_max)->capture_default_str();
  app.add_option("--csls-knn", config.csls_k_density)->capture_default_str();
  app.add_option("--validation-top", config.validation_top)->capture_default_str();
  app.add_option("--mgpa-epochs", config.mgpa_epochs)->capture_default_str();
  app.add_option("--finetune-epochs", config.finetune_epochs)->capture_default_str();
  app.add_option("--max-epochs", config.max_epochs)->capture_default_str();
  app.add_option("--rng-seed", config.rng_seed)->capture_default_str();
  app.add_option("--mutual", config.mutual, "Mutual CSLS filter (true/false)")->capture_default_str();
  app.add_option("--union-seed", config.union_seed, "Keep seed pairs every epoch (true/false)")
      ->capture_default_str();
  app.add_option("--rank-filter", rank_filter, "both or source")
      ->check(CLI::IsMember({"both", "source"}))
      ->capture_default_str();
  emb.add_to(app);

  if (auto code = parse(app, args, io)) return *code;

  config.mode = *parse_mode(mode_str);
  config.rank_filter = rank_filter == "source" ? RankFilter::SourceOnly : RankFilter::Both;
  const bool three_way = config.mode == Mode::Mgpa || config.mode == Mode::MgpaPlus;
  if (three_way && sup_path.empty()) {
    io.err << "align: --mode " << mode_str << " requires --sup-emb\n";
    return kExitConfig;
  }
  if (!three_way && !sup_path.empty()) {
    io.err << "align: --sup-emb is only used by mgpa and mgpa+\n";
    return kExitConfig;
  }
  try {
    config.validate();
  } catch (const std::exception& e) {
    io.err << "align: " << e.what() << '\n';
    return kExitConfig;
  }

  const fs::path out(out_dir);
  std::error_code ec;
  if (fs::exists(out, ec) && !fs::is_empty(out, ec)) {
    io.err << "align: output directory " << out << " is not empty; use a fresh directory\n";
    return kExitConfig;
  }
  fs::create_directories(out, ec);
  if (ec) {
    io.err << "align: cannot create " << out << ": " << ec.message() << '\n';
    return kExitConfig;
  }

  Manifest manifest;
  manifest.set("src-emb", fs::absolute(src_path).string());
  manifest.set("tgt-emb", fs::absolute(tgt_path).string());
  if (!sup_path.empty()) manifest.set("sup-emb", fs::absolute(sup_path).string());
  manifest.set("mode", mode_str);
  {
    // Dictionary paths are stored absolute so the manifest works from anywhere.
    std::string resolved = seed_spec;
    if (seed_spec.rfind("file:", 0) == 0) {
      resolved = "file:";
      std::stringstream files(seed_spec.substr(5));
      std::string part;
      for (bool first = true; std::getline(files, part, ','); first = false) {
        resolved += (first ? "" : ",") + fs::absolute(part).string();
      }
    }
    manifest.set("seed", resolved);
  }
  if (!test_dict.empty()) manifest.set("test-dict", fs::absolute(test_dict).string());
  manifest.set("patience", config.patience);
  manifest.set("inner-iters", config.inner_iters);
  manifest.set("rank-max", config.rank_max);
  manifest.set("csls-knn", config.csls_k_density);
  manifest.set("validation-top", config.validation_top);
  manifest.set("mgpa-epochs", config.mgpa_epochs);
  manifest.set("finetune-epochs", config.finetune_epochs);
  manifest.set("max-epochs", config.max_epochs);
  manifest.set("rng-seed", static_cast<std::size_t>(config.rng_seed));
  manifest.set_bool("mutual", config.mutual);
  manifest.set_bool("union-seed", config.union_seed);
  manifest.set("rank-filter", rank_filter);
  manifest.set("max-vocab", emb.max_vocab);
  manifest.set_bool("normalize", emb.normalize);
  manifest.note("platform: " + platform_note());

  auto stage_start = Clock::now();
  auto lap = [&](const std::string& stage) {
    const auto now = Clock::now();
    const double secs = std::chrono::duration<double>(now - stage_start).count();
    manifest.note("wall-clock " + stage + ": " + general9(secs) + " s");
    stage_start = now;
  };

  const int code = guarded(io, "align", false, [&]() -> int {
    const EmbeddingSpace src = emb.load(src_path, "src");
    const EmbeddingSpace tgt = emb.load(tgt_path, "tgt");
    std::optional<EmbeddingSpace> sup;
    if (three_way) sup.emplace(emb.load(sup_path, "sup"));
    lap("load");

    const SpaceSet spaces{src, tgt, sup ? &*sup : nullptr};
    const SeedLexicon seed = build_seed(seed_spec, spaces, three_way);
    manifest.note("seed size: " + std::to_string(std::visit([](const auto& l) { return l.size(); }, seed)));
    lap("seed");

    std::ofstream metrics(out / "metrics.tsv", std::ios::app);
    auto observer = [&](const EpochRecord& record, std::span<const OrthogonalMap> transforms,
                        const OrthogonalMap& composed) {
      write_metrics_line(metrics, record);
      metrics.flush();
      const fs::path dir = out / epoch_dir_name(record.epoch);
      fs::create_directories(dir);
      for (std::size_t i = 0; i < transforms.size(); ++i) {
        write_transform(dir / ("T" + std::to_string(i) + ".txt"), transforms[i].matrix());
      }
      write_transform(dir / "composed.txt", composed.matrix());
      io.err << "epoch " << record.epoch << " (phase " << record.phase << "): train "
             << record.train_size << ", induced " << record.induced_size << ", validation "
             << general9(record.validation) << '\n';
    };

    const TrainResult result = run_bootstrap(spaces, seed, config, observer);
    lap("train");

    write_transform(out / "map.txt", result.composed.matrix());
    {
      std::ofstream report(out / "report.txt");
      report << "mode\t" << mode_str << '\n';
      report << "epochs\t" << result.report.epochs.size() << '\n';
      report << "best_epoch\t" << result.report.best_epoch << '\n';
      report << "best_validation\t" << general9(result.report.best().validation) << '\n';
      report << "stop_reason\t" << stop_reason_name(result.report.stop_reason) << '\n';
      if (result.report.phase_boundary) {
        report << "phase_boundary\t" << *result.report.phase_boundary << '\n';
      }
      report << "gpa_warm_start\t" << (result.report.gpa_warm_start ? "true" : "false") << '\n';
    }
    io.out << "best epoch " << result.report.best_epoch << " of " << result.report.epochs.size()
           << " (" << stop_reason_name(result.report.stop_reason) << "), validation "
           << general9(result.report.best().validation) << '\n';

    if (!test_dict.empty()) {
      const DictionaryParse test = parse_dictionary_file(test_dict, src, tgt);
      EvalOptions options;
      options.k_density = config.csls_k_density;
      const EvalResult eval = evaluate_map(src, tgt, result.composed, test, options);
      print_eval(io.out, eval, options.metric);
      std::ofstream eval_file(out / "eval.tsv");
      print_eval(eval_file, eval, options.metric);
      lap("evaluate");
    }
    return kExitOk;
  });

  manifest.note("exit code: " + std::to_string(code));
  manifest.write(out / "manifest.txt");
  return code;
}

int cmd_evaluate(std::span<const std::string> args, Streams io) {
  ScopedSink sink(io.err);
  CLI::App app{"Precision@k of a composed map", "procalign evaluate"};
  std::string src_path, tgt_path, map_path, dict_path, metric_str = "csls";
  std::vector<std::size_t> ks{1, 10};
  std::size_t k_density = 10;
  EmbeddingFlags emb;
  app.add_option("--src-emb", src_path)->required();
  app.add_option("--tgt-emb", tgt_path)->required();
  app.add_option("--map", map_path, "Composed source→target transform")->required();
  app.add_option("--test-dict", dict_path)->required();
  app.add_option("--k", ks, "Comma-separated k values")->delimiter(',')->capture_default_str();
  app.add_option("--metric", metric_str)->check(CLI::IsMember({"csls", "cosine"}))->capture_default_str();
  app.add_option("--csls-knn", k_density)->capture_default_str();
  emb.add_to(app);
  if (auto code = parse(app, args, io)) return *code;

  return guarded(io, "evaluate", true, [&] {
    const EmbeddingSpace src = emb.load(src_path, "src");
    const EmbeddingSpace tgt = emb.load(tgt_path, "tgt");
    const OrthogonalMap map = read_transform(fs::path(map_path));
    const DictionaryParse test = parse_dictionary_file(dict_path, src, tgt);
    EvalOptions options{ks, *parse_metric(metric_str), k_density};
    print_eval(io.out, evaluate_map(src, tgt, map, test, options), options.metric);
    return kExitOk;
  });
}

int cmd_fit_test(std::span<const std::string> args, Streams io) {
  ScopedSink sink(io.err);
  CLI::App app{"Procrustes fit: train and test on the same dictionary", "procalign fit-test"};
  std::string src_path, tgt_path, dict_path, mode_str = "gpa", metric_str = "csls";
  std::vector<std::size_t> ks{1, 10};
  TrainConfig config;
  EmbeddingFlags emb;
  app.add_option("--src-emb", src_path)->required();
  app.add_option("--tgt-emb", tgt_path)->required();
  app.add_option("--test-dict", dict_path)->required();
  app.add_option("--mode", mode_str)->check(CLI::IsMember({"pa", "gpa"}))->capture_default_str();
  app.add_option("--k", ks)->delimiter(',')->capture_default_str();
  app.add_option("--metric", metric_str)->check(CLI::IsMember({"csls", "cosine"}))->capture_default_str();
  app.add_option("--inner-iters", config.inner_iters)->capture_default_str();
  app.add_option("--csls-knn", config.csls_k_density)->capture_default_str();
  app.add_option("--rng-seed", config.rng_seed)->capture_default_str();
  emb.add_to(app);
  if (auto code = parse(app, args, io)) return *code;

  return guarded(io, "fit-test", true, [&] {
    const EmbeddingSpace src = emb.load(src_path, "src");
    const EmbeddingSpace tgt = emb.load(tgt_path, "tgt");
    const DictionaryParse test = parse_dictionary_file(dict_path, src, tgt);
    if (std::find(ks.begin(), ks.end(), std::size_t{1}) == ks.end()) ks.insert(ks.begin(), 1);
    EvalOptions options{ks, *parse_metric(metric_str), config.csls_k_density};
    const EvalResult fit = procrustes_fit(src, tgt, test, *parse_mode(mode_str), config, options);
    io.out << "fit P@1 (" << mode_str << ") " << fixed2(fit.p_at.at(1)) << '\n';
    print_eval(io.out, fit, options.metric);
    return kExitOk;
  });
}

int cmd_translate(std::span<const std::string> args, Streams io) {
  ScopedSink sink(io.err);
  CLI::App app{"Translate words read from standard input", "procalign translate"};
  std::string src_path, tgt_path, map_path, metric_str = "csls";
  std::size_t k = 10;
  std::size_t k_density = 10;
  EmbeddingFlags emb;
  app.add_option("--src-emb", src_path)->required();
  app.add_option("--tgt-emb", tgt_path)->required();
  app.add_option("--map", map_path)->required();
  app.add_option("--k", k)->capture_default_str();
  app.add_option("--metric", metric_str)->check(CLI::IsMember({"csls", "cosine"}))->capture_default_str();
  app.add_option("--csls-knn", k_density)->capture_default_str();
  emb.add_to(app);
  if (auto code = parse(app, args, io)) return *code;

  return guarded(io, "translate", true, [&] {
    const EmbeddingSpace src = emb.load(src_path, "src");
    const EmbeddingSpace tgt = emb.load(tgt_path, "tgt");
    const OrthogonalMap map = read_transform(fs::path(map_path));
    std::vector<std::string> words;
    for (std::string line; std::getline(io.in, line);) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
      }
      if (!line.empty()) words.push_back(line);
    }
    const auto result =
        translate_topk(words, src, tgt, map, std::min(k, tgt.size()), *parse_metric(metric_str), k_density);
    // Output follows input order, OOV lines included.
    std::size_t next = 0;
    char buf[64];
    for (const auto& w : words) {
      if (next < result.scored.size() && result.scored[next].word == w) {
        const auto& t = result.scored[next++];
        io.out << w;
        for (std::size_t r = 0; r < t.targets.size(); ++r) {
          std::snprintf(buf, sizeof(buf), ":%.6f", t.scores[r]);
          io.out << '\t' << tgt.word(t.targets[r]) << buf;
        }
        io.out << '\n';
      } else {
        io.out << w << "\tOOV\n";
      }
    }
    return kExitOk;
  });
}

int cmd_synth_check(std::span<const std::string> args, Streams io) {
  ScopedSink sink(io.err);
  CLI::App app{"Planted-map recovery check; optionally exports the synthetic pair",
               "procalign synth-check"};
  std::size_t n = 2000, d = 50;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--n", n)->capture_default_str();
  app.add_option("--d", d)->capture_default_str();
  app.add_option("--sigma", sigma)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--out", out_dir, "Write src.vec, tgt.vec, identity.dict, planted.txt here");
  if (auto code = parse(app, args, io)) return *code;

  return guarded(io, "synth-check", true, [&] {
    const SyntheticPair pair = make_synthetic_pair(n, d, sigma, seed);
    const OrthogonalMap recovered = procrustes_solve(pair.e, pair.f);
    const double error = (recovered.matrix() - pair.planted.matrix()).norm();
    io.out << "recovery_error\t" << general9(error) << '\n';
    io.out << "orthogonality_error\t" << general9(recovered.orthogonality_error()) << '\n';
    if (!out_dir.empty()) {
      const fs::path out(out_dir);
      fs::create_directories(out);
      const EmbeddingSpace src = synthetic_space(pair.e, "src");
      const EmbeddingSpace tgt = synthetic_space(pair.f, "tgt", sigma > 0.0);
      write_embeddings(out / "src.vec", src);
      write_embeddings(out / "tgt.vec", tgt);
      std::ofstream dict(out / "identity.dict");
      write_dictionary(dict, identity_lexicon(n, "src", "tgt"), src, tgt);
      write_transform(out / "planted.txt", pair.planted.matrix());
    }
    return kExitOk;
  });
}

int run(std::span<const std::string> args, Streams io) {
  static constexpr const char* kUsage =
      "usage: procalign <command> [options]\n"
      "commands:\n"
      "  align        bootstrapped PA / GPA / MGPA / MGPA+ alignment\n"
      "  evaluate     P@k of a composed map on a test dictionary\n"
      "  fit-test     Procrustes fit (train and test on one dictionary)\n"
      "  translate    rank translations for words on standard input\n"
      "  synth-check  planted-map recovery on synthetic spaces\n"
      "run 'procalign <command> --help' for options\n";
  if (args.empty()) {
    io.err << kUsage;
    return kExitConfig;
  }
  const std::string& command = args.front();
  const auto rest = args.subspan(1);
  if (command == "align") return cmd_align(rest, io);
  if (command == "evaluate") return cmd_evaluate(rest, io);
  if (command == "fit-test") return cmd_fit_test(rest, io);
  if (command == "translate") return cmd_translate(rest, io);
  if (command == "synth-check") return cmd_synth_check(rest, io);
  if (command == "--help" || command == "-h") {
    io.out << kUsage;
    return kExitOk;
  }
  if (command == "--version") {
    io.out << "procalign " << PROCALIGN_VERSION << '\n';
    return kExitOk;
  }
  io.err << "procalign: unknown command '" << command << "'\n" << kUsage;
  return kExitConfig;
}

}  // namespace procalign::cli
