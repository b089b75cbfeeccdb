#include "edospipe/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "edospipe/csv.hpp"
#include "edospipe/ensemble.hpp"
#include "edospipe/metrics.hpp"
#include "edospipe/translator.hpp"
#include "edospipe/util.hpp"

namespace edos {

namespace {

using nlohmann::json;

NormalizationConfig parse_normalization(const json& j) {
  NormalizationConfig cfg;
  cfg.lowercase = j.value("lowercase", cfg.lowercase);
  cfg.strip_emoji = j.value("strip_emoji", cfg.strip_emoji);
  cfg.strip_hash_symbol = j.value("strip_hash_symbol", cfg.strip_hash_symbol);
  cfg.strip_hashtag_tokens =
      j.value("strip_hashtag_tokens", cfg.strip_hashtag_tokens);
  cfg.strip_digits = j.value("strip_digits", cfg.strip_digits);
  cfg.collapse_repeats = j.value("collapse_repeats", cfg.collapse_repeats);
  cfg.max_run = j.value("max_run", cfg.max_run);
  cfg.collapse_whitespace =
      j.value("collapse_whitespace", cfg.collapse_whitespace);
  return cfg;
}

ClassifierConfig parse_classifier(const json& j, const std::string& task) {
  ClassifierConfig cfg;
  cfg.backend_name = j.value("backend", cfg.backend_name);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.epochs = j.value("epochs", task == "B" ? 4 : 3);
  cfg.optimizer_name = j.value("optimizer", cfg.optimizer_name);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("extras")) {
    cfg.extras = j["extras"].get<std::map<std::string, std::string>>();
  }
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j = json::parse(json_text);
  RunConfig cfg;
  cfg.task = j.value("task", cfg.task);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.allow_stage_override =
      j.value("allow_stage_override", cfg.allow_stage_override);

  if (j.contains("data")) {
    const json& d = j["data"];
    cfg.data.train = d.value("train", "");
    cfg.data.eval = d.value("eval", "");
    cfg.data.eval_fraction = d.value("eval_fraction", cfg.data.eval_fraction);
    cfg.data.pool = d.value("pool", "");
    cfg.data.columns.id = d.value("id_column", cfg.data.columns.id);
    cfg.data.columns.text = d.value("text_column", cfg.data.columns.text);
    cfg.data.columns.label = d.value("label_column", cfg.data.columns.label);
  }
  if (j.contains("normalization")) {
    cfg.normalization = parse_normalization(j["normalization"]);
  }
  if (j.contains("augmentation")) {
    const json& a = j["augmentation"];
    cfg.augmentation.enabled = a.value("enabled", false);
    if (a.contains("mode")) {
      cfg.augmentation.mode =
          augmentation_mode_from_string(a["mode"].get<std::string>());
    }
    if (a.contains("pivots")) {
      cfg.augmentation.chain.pivots =
          a["pivots"].get<std::vector<std::string>>();
    }
    cfg.augmentation.chain.collect_each_stage =
        a.value("collect_each_stage", true);
    cfg.augmentation.chain.parallel_chains = a.value("parallel_chains", false);
    cfg.augmentation.translator = a.value("translator", "identity");
    cfg.augmentation.min_confidence = a.value("min_confidence", 0.0);
    cfg.augmentation.gatekeeper = a.value("gatekeeper", 0);
  }
  if (j.contains("weak_label")) {
    const json& w = j["weak_label"];
    cfg.weak_label.enabled = w.value("enabled", false);
    cfg.weak_label.policy.confidence_threshold =
        w.value("confidence_threshold", 0.9);
    if (w.contains("mode")) {
      cfg.weak_label.policy.mode =
          WeakLabelPolicy::mode_from_string(w["mode"].get<std::string>());
    }
    cfg.weak_label.policy.budget = w.value("budget", size_t{7000});
    cfg.weak_label.labeler = w.value("labeler", 0);
  }
  if (j.contains("classifiers")) {
    for (const json& c : j["classifiers"]) {
      cfg.classifiers.push_back(parse_classifier(c, cfg.task));
    }
  }
  if (j.contains("ensemble")) {
    cfg.ensemble.rule = j["ensemble"].value("rule", "hard");
    cfg.ensemble.average_logits = j["ensemble"].value("average_logits", false);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(util::read_file(path));
}

std::vector<Finding> validate_config(const RunConfig& cfg) {
  std::vector<Finding> findings;
  auto error = [&](const std::string& field, const std::string& message) {
    findings.push_back({Severity::Error, field, message});
  };
  auto warning = [&](const std::string& field, const std::string& message) {
    findings.push_back({Severity::Warning, field, message});
  };

  if (cfg.task != "A" && cfg.task != "B" && cfg.task != "C") {
    error("task", "task must be A, B, or C");
  }
  if (cfg.data.train.empty()) {
    error("data.train", "training data path is required");
  } else if (!std::filesystem::exists(cfg.data.train)) {
    error("data.train", "path does not exist: " + cfg.data.train);
  }
  if (!cfg.data.eval.empty() && !std::filesystem::exists(cfg.data.eval)) {
    error("data.eval", "path does not exist: " + cfg.data.eval);
  }
  if (cfg.data.eval.empty() &&
      !(cfg.data.eval_fraction > 0.0 && cfg.data.eval_fraction < 1.0)) {
    error("data.eval_fraction", "must be in (0,1) when no eval file is given");
  }
  if (cfg.output_dir.empty()) {
    error("output_dir", "output directory is required");
  }
  if (cfg.normalization.max_run < 1) {
    error("normalization.max_run", "must be >= 1");
  }

  if (cfg.classifiers.empty()) {
    error("classifiers", "at least one classifier is required");
  }
  for (size_t i = 0; i < cfg.classifiers.size(); ++i) {
    const ClassifierConfig& c = cfg.classifiers[i];
    const std::string field = "classifiers[" + std::to_string(i) + "]";
    if (!backend_registered(c.backend_name)) {
      error(field + ".backend", "unknown backend: " + c.backend_name);
    }
    try {
      c.validate();
    } catch (const ConfigError& e) {
      error(field, e.what());
    }
  }

  if (cfg.augmentation.enabled) {
    try {
      cfg.augmentation.chain.validate();
    } catch (const ConfigError& e) {
      error("augmentation.pivots", e.what());
    }
    if (cfg.augmentation.gatekeeper < 0 ||
        static_cast<size_t>(cfg.augmentation.gatekeeper) >=
            std::max<size_t>(cfg.classifiers.size(), 1)) {
      error("augmentation.gatekeeper", "index outside classifiers list");
    }
    if (cfg.task == "C" && !cfg.allow_stage_override) {
      warning("augmentation.enabled",
              "task C runs module 2 only; augmentation will be skipped "
              "(set allow_stage_override to force)");
    }
  }

  if (cfg.weak_label.enabled) {
    try {
      cfg.weak_label.policy.validate();
    } catch (const ConfigError& e) {
      error("weak_label.confidence_threshold", e.what());
    }
    if (cfg.data.pool.empty()) {
      error("data.pool", "weak labeling requires an unlabeled pool");
    } else if (!std::filesystem::exists(cfg.data.pool)) {
      error("data.pool", "path does not exist: " + cfg.data.pool);
    }
    if ((cfg.task == "B" || cfg.task == "C") && !cfg.allow_stage_override) {
      warning("weak_label.enabled",
              "task " + cfg.task + " runs without weak labeling; stage will "
              "be skipped (set allow_stage_override to force)");
    }
  }

  if (cfg.ensemble.rule != "hard" && cfg.ensemble.rule != "soft") {
    error("ensemble.rule", "rule must be \"hard\" or \"soft\"");
  }
  return findings;
}

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json stage_to_json(const StageRecord& s) {
  return json{{"name", s.name},       {"status", s.status},
              {"detail", s.detail},   {"outputs", s.outputs},
              {"started", s.started}, {"finished", s.finished}};
}

json config_to_json(const RunConfig& cfg) {
  json members = json::array();
  for (const ClassifierConfig& c : cfg.classifiers) {
    members.push_back({{"backend", c.backend_name},
                       {"learning_rate", c.learning_rate},
                       {"batch_size", c.batch_size},
                       {"epochs", c.epochs},
                       {"optimizer", c.optimizer_name},
                       {"seed", c.seed},
                       {"extras", c.extras}});
  }
  return json{
      {"task", cfg.task},
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"allow_stage_override", cfg.allow_stage_override},
      {"data",
       {{"train", cfg.data.train},
        {"eval", cfg.data.eval},
        {"eval_fraction", cfg.data.eval_fraction},
        {"pool", cfg.data.pool},
        {"id_column", cfg.data.columns.id},
        {"text_column", cfg.data.columns.text},
        {"label_column", cfg.data.columns.label}}},
      {"normalization",
       {{"lowercase", cfg.normalization.lowercase},
        {"strip_emoji", cfg.normalization.strip_emoji},
        {"strip_hash_symbol", cfg.normalization.strip_hash_symbol},
        {"strip_hashtag_tokens", cfg.normalization.strip_hashtag_tokens},
        {"strip_digits", cfg.normalization.strip_digits},
        {"collapse_repeats", cfg.normalization.collapse_repeats},
        {"max_run", cfg.normalization.max_run},
        {"collapse_whitespace", cfg.normalization.collapse_whitespace}}},
      {"augmentation",
       {{"enabled", cfg.augmentation.enabled},
        {"mode", to_string(cfg.augmentation.mode)},
        {"pivots", cfg.augmentation.chain.pivots},
        {"collect_each_stage", cfg.augmentation.chain.collect_each_stage},
        {"parallel_chains", cfg.augmentation.chain.parallel_chains},
        {"translator", cfg.augmentation.translator},
        {"min_confidence", cfg.augmentation.min_confidence},
        {"gatekeeper", cfg.augmentation.gatekeeper}}},
      {"weak_label",
       {{"enabled", cfg.weak_label.enabled},
        {"confidence_threshold", cfg.weak_label.policy.confidence_threshold},
        {"mode",
         cfg.weak_label.policy.mode == WeakLabelPolicy::Mode::Balanced
             ? "balanced"
             : "double"},
        {"budget", cfg.weak_label.policy.budget},
        {"labeler", cfg.weak_label.labeler}}},
      {"classifiers", std::move(members)},
      {"ensemble",
       {{"rule", cfg.ensemble.rule},
        {"average_logits", cfg.ensemble.average_logits}}}};
}

class ManifestWriter {
 public:
  ManifestWriter(const RunConfig& cfg, std::filesystem::path dir)
      : dir_(std::move(dir)) {
    manifest_.task = cfg.task;
    manifest_.seed = cfg.seed;
    resolved_config_ = config_to_json(cfg);
  }

  StageRecord& begin_stage(const std::string& name) {
    manifest_.stages.push_back(StageRecord{name, "running", "", {},
                                           iso_timestamp(), ""});
    return manifest_.stages.back();
  }

  void finish_stage(StageRecord& stage, const std::string& status,
                    const std::string& detail = "") {
    stage.status = status;
    stage.detail = detail;
    stage.finished = iso_timestamp();
    persist();
  }

  void persist() {
    json j{{"task", manifest_.task},
           {"seed", manifest_.seed},
           {"resolved_config", resolved_config_},
           {"model_fingerprints", manifest_.model_fingerprints},
           {"metrics",
            {{"macro_f1", manifest_.macro_f1},
             {"per_class_f1", manifest_.per_class_f1}}},
           {"stages", json::array()}};
    for (const StageRecord& s : manifest_.stages) {
      j["stages"].push_back(stage_to_json(s));
    }
    manifest_.manifest_path = dir_ / "manifest.json";
    util::write_file(manifest_.manifest_path, j.dump(2) + "\n");
  }

  RunManifest& manifest() { return manifest_; }

 private:
  std::filesystem::path dir_;
  json resolved_config_;
  RunManifest manifest_;
};

}  // namespace

RunManifest run_experiment(const RunConfig& cfg) {
  {
    const auto findings = validate_config(cfg);
    for (const Finding& f : findings) {
      if (f.severity == Severity::Error) {
        throw ConfigError("invalid config: " + f.field + ": " + f.message);
      }
    }
  }

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  util::write_file(out_dir / "resolved_config.json",
                   config_to_json(cfg).dump(2) + "\n");

  ManifestWriter writer(cfg, out_dir);
  const TaskSchema schema = TaskSchema::for_task(cfg.task);

  auto run_stage = [&](const std::string& name, bool enabled,
                       const std::string& skip_reason, auto&& body) {
    StageRecord& stage = writer.begin_stage(name);
    if (!enabled) {
      writer.finish_stage(stage, "skipped", skip_reason);
      return;
    }
    try {
      const std::string detail = body(stage);
      writer.finish_stage(stage, "ok", detail);
    } catch (const std::exception& e) {
      writer.finish_stage(stage, "failed", e.what());
      throw StageError(name, e.what());
    }
  };

  const bool augment_allowed =
      cfg.augmentation.enabled && (cfg.task != "C" || cfg.allow_stage_override);
  const bool weak_allowed =
      cfg.weak_label.enabled && (cfg.task == "A" || cfg.allow_stage_override);

  Dataset train;        // grows through the stages
  Dataset gold_train;   // post-normalization, pre-synthetic
  Dataset eval_set;
  UnlabeledPool pool;

  // --- preprocess -------------------------------------------------------
  run_stage("preprocess", true, "", [&](StageRecord& stage) {
    LoadStats load_stats;
    Dataset raw = load_dataset(cfg.data.train, schema, cfg.data.columns,
                               &load_stats);
    size_t dropped = 0;
    if (!cfg.data.eval.empty()) {
      gold_train = normalize_dataset(raw, cfg.normalization, &dropped);
      Dataset raw_eval = load_dataset(cfg.data.eval, schema, cfg.data.columns);
      eval_set = normalize_dataset(raw_eval, cfg.normalization);
    } else {
      auto [train_part, eval_part] =
          stratified_split(raw, 1.0 - cfg.data.eval_fraction, cfg.seed);
      gold_train = normalize_dataset(train_part, cfg.normalization, &dropped);
      eval_set = normalize_dataset(eval_part, cfg.normalization);
    }
    train = gold_train;

    const auto train_path = (out_dir / "train.normalized.csv").string();
    const auto eval_path = (out_dir / "eval.normalized.csv").string();
    save_dataset(train_path, gold_train);
    save_dataset(eval_path, eval_set);
    stage.outputs = {train_path, eval_path};

    if (weak_allowed) {
      pool = normalize_pool(load_pool(cfg.data.pool), cfg.normalization);
      const auto pool_path = (out_dir / "pool.normalized.jsonl").string();
      save_pool(pool_path, pool);
      stage.outputs.push_back(pool_path);
    }
    return "train=" + std::to_string(gold_train.size()) +
           " eval=" + std::to_string(eval_set.size()) +
           " empty_dropped=" + std::to_string(dropped + load_stats.synthetic_empty_dropped);
  });

  // --- augment (module 1.A) ---------------------------------------------
  run_stage("augment", augment_allowed,
            cfg.augmentation.enabled ? "disabled for task " + cfg.task
                                     : "disabled in config",
            [&](StageRecord& stage) {
    ClassifierConfig gk_cfg =
        cfg.classifiers[static_cast<size_t>(cfg.augmentation.gatekeeper)];
    auto gatekeeper = fine_tune(gold_train, gk_cfg);
    auto translator = make_translator(cfg.augmentation.translator);

    AugmentReport report;
    train = augment_dataset(train, cfg.augmentation.mode,
                            cfg.augmentation.chain, *translator, *gatekeeper,
                            &report, cfg.augmentation.min_confidence,
                            cfg.normalization);

    json per_class = json::object();
    for (const auto& [name, counts] : report.per_class) {
      per_class[name] = {{"generated", counts.generated},
                         {"accepted", counts.accepted},
                         {"rejected", counts.rejected}};
    }
    const json report_json{
        {"mode", to_string(report.mode)},
        {"target", report.target},
        {"added", report.added},
        {"shortfall", report.shortfall},
        {"per_class", per_class},
        {"translation_failures", report.translation.translation_failures},
        {"duplicates_dropped", report.translation.duplicates_dropped},
        {"empty_dropped", report.translation.empty_dropped}};
    const auto report_path = (out_dir / "augment_report.json").string();
    util::write_file(report_path, report_json.dump(2) + "\n");

    const auto data_path = (out_dir / "train.augmented.csv").string();
    save_dataset(data_path, train);
    stage.outputs = {data_path, report_path};
    return "added=" + std::to_string(report.added) +
           " shortfall=" + std::to_string(report.shortfall);
  });

  // --- weak labeling (module 1.B) ----------------------------------------
  run_stage("weaklabel", weak_allowed,
            cfg.weak_label.enabled ? "disabled for task " + cfg.task
                                   : "disabled in config",
            [&](StageRecord& stage) {
    ClassifierConfig labeler_cfg =
        cfg.classifiers[static_cast<size_t>(cfg.weak_label.labeler)];
    auto labeler = fine_tune(gold_train, labeler_cfg);

    const auto records = weak_label(pool, *labeler);
    std::unordered_set<std::string> gold_texts;
    for (const LabeledSample& s : gold_train.samples) gold_texts.insert(s.text);

    const ClassDistribution dist = class_distribution(gold_train);
    const WeakSelection selection =
        select_weak(records, cfg.weak_label.policy, dist, &gold_texts);

    Dataset weak_set{schema, selection.samples};
    const auto data_path = (out_dir / "weak_selected.csv").string();
    save_dataset(data_path, weak_set);
    const json report_json{{"pool_size", pool.size()},
                           {"qualifying", selection.qualifying},
                           {"selected", selection.samples.size()},
                           {"target", selection.target},
                           {"shortfall", selection.shortfall},
                           {"dedup_dropped", selection.dedup_dropped}};
    const auto report_path = (out_dir / "weaklabel_report.json").string();
    util::write_file(report_path, report_json.dump(2) + "\n");

    train = merge(train, weak_set);
    stage.outputs = {data_path, report_path};
    return "selected=" + std::to_string(selection.samples.size()) +
           " shortfall=" + std::to_string(selection.shortfall);
  });

  // --- train ensemble members --------------------------------------------
  std::vector<std::unique_ptr<TrainedClassifier>> members;
  run_stage("train", true, "", [&](StageRecord& stage) {
    for (size_t i = 0; i < cfg.classifiers.size(); ++i) {
      auto model = fine_tune(train, cfg.classifiers[i]);
      const auto model_dir = out_dir / ("model_" + std::to_string(i));
      model->save(model_dir);
      writer.manifest().model_fingerprints.push_back(model->fingerprint());
      stage.outputs.push_back(model_dir.string());
      members.push_back(std::move(model));
    }
    return "members=" + std::to_string(members.size()) +
           " train_size=" + std::to_string(train.size());
  });

  // --- ensemble predictions ----------------------------------------------
  EnsembleDecision decision;
  run_stage("ensemble", true, "", [&](StageRecord& stage) {
    std::vector<std::string> texts;
    texts.reserve(eval_set.size());
    for (const LabeledSample& s : eval_set.samples) texts.push_back(s.text);

    EnsembleInput input;
    input.schema = schema;
    for (const auto& model : members) {
      input.model_probs.push_back(model->predict_proba(texts));
    }
    decision = cfg.ensemble.rule == "soft"
                   ? soft_vote(input, cfg.ensemble.average_logits)
                   : hard_vote(input);

    csv::Table table;
    table.header = {"id", "label"};
    const bool soft = cfg.ensemble.rule == "soft";
    if (soft) {
      for (const auto& c : schema.classes) table.header.push_back("p." + c);
    }
    for (size_t i = 0; i < eval_set.size(); ++i) {
      csv::Row row{eval_set.samples[i].id, decision.labels[i]};
      if (soft) {
        for (double v : decision.mean_probs[i].values) {
          row.push_back(util::format_double(v));
        }
      }
      table.rows.push_back(std::move(row));
    }
    const auto pred_path = (out_dir / "predictions.csv").string();
    csv::write_file(pred_path, table);
    stage.outputs = {pred_path};
    return "rule=" + cfg.ensemble.rule +
           " rows=" + std::to_string(decision.labels.size());
  });

  // --- evaluate ------------------------------------------------------------
  run_stage("evaluate", true, "", [&](StageRecord& stage) {
    std::vector<std::string> gold;
    gold.reserve(eval_set.size());
    for (const LabeledSample& s : eval_set.samples) gold.push_back(s.label);

    const EvaluationReport report = evaluate(gold, decision.labels, schema);
    const auto metrics_dir = out_dir / "metrics";
    render_report(report, metrics_dir);
    writer.manifest().macro_f1 = report.macro_f1;
    writer.manifest().per_class_f1 = report.per_class_f1;
    stage.outputs = {(metrics_dir / "scores.txt").string(),
                     (metrics_dir / "confusion.csv").string(),
                     (metrics_dir / "confusion.svg").string()};
    return "macro_f1=" + util::format_double(report.macro_f1);
  });

  writer.persist();
  return writer.manifest();
}

}  // namespace edos
