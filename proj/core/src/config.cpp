#include "attex/config.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "attex/io_util.hpp"

namespace attex {

std::string train_mode_str(TrainMode m) { return m == TrainMode::Sl ? "sl" : "ds"; }

TrainMode parse_train_mode(const std::string& s) {
  if (s == "sl") return TrainMode::Sl;
  if (s == "ds") return TrainMode::Ds;
  throw std::invalid_argument("unknown training mode: " + s);
}

PipelineOptions RunConfig::pipeline_options() const {
  PipelineOptions opts;
  opts.n_max = feat_dims.n_max;
  opts.eta = eta;
  opts.negation = negation;
  return opts;
}

void RunConfig::validate() const {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  check(feat_dims.n_max >= 2, "features.n_max must be >= 2");
  check(feat_dims.d_feat >= 1, "features.d_feat must be >= 1");
  check(eta >= 1 && eta < feat_dims.n_max, "features.eta must be in [1, n_max)");
  check(!negation.empty(), "features.negation must not be empty");
  check(trainer.batch_bags >= 1, "train.batch_bags must be >= 1");
  check(trainer.bag_size >= 1, "train.bag_size must be >= 1");
  check(trainer.keep_prob > 0.0 && trainer.keep_prob <= 1.0,
        "train.keep_prob must be in (0, 1]");
  check(trainer.rho > 0.0 && trainer.rho < 1.0, "train.rho must be in (0, 1)");
  check(trainer.epsilon > 0.0, "train.epsilon must be positive");
  check(trainer.schedule.max_epochs >= 1, "train.max_epochs must be >= 1");
  check(trainer.schedule.eval_every >= 1 &&
            trainer.schedule.eval_every <= trainer.schedule.max_epochs,
        "train.eval_every must be in [1, max_epochs]");
  check(encoder.conv_window >= 1, "model.conv_window must be >= 1");
  check(encoder.filter_count >= 1, "model.filters must be >= 1");
  check(encoder.lstm_hidden >= 1, "model.lstm_hidden must be >= 1");
  check(encoder.mlp_hidden >= 1, "model.mlp_hidden must be >= 1");
  check(fold < 3 || task.format != EvalFormat::Cv3, "task.fold must be 0, 1 or 2");
  check(analysis.kde_points >= 2, "analysis.kde_points must be >= 2");
  check(synth.d_word >= 1, "synth.d_word must be >= 1");
  if (!errors.empty()) {
    std::string msg = "configuration invalid:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
}

namespace {

struct KeyHandler {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::uint64_t to_u64(const std::string& v) { return std::stoull(v); }
std::size_t to_sz(const std::string& v) { return static_cast<std::size_t>(std::stoull(v)); }
double to_f64(const std::string& v) { return std::stod(v); }

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected boolean, got '" + v + "'");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

std::string from_f64(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

using Schema = std::map<std::string, std::map<std::string, KeyHandler>>;

const Schema& schema() {
  static const Schema s = [] {
    Schema m;
    auto add = [&](const std::string& section, const std::string& key,
                   std::function<void(RunConfig&, const std::string&)> set,
                   std::function<std::string(const RunConfig&)> get) {
      m[section][key] = {std::move(set), std::move(get)};
    };

    add("task", "scale",
        [](RunConfig& c, const std::string& v) { c.task.scale = parse_scale(v); },
        [](const RunConfig& c) { return scale_str(c.task.scale); });
    add("task", "eval_format",
        [](RunConfig& c, const std::string& v) {
          if (v == "fixed") c.task.format = EvalFormat::Fixed;
          else if (v == "cv3") c.task.format = EvalFormat::Cv3;
          else throw std::invalid_argument("task.eval_format must be fixed or cv3");
        },
        [](const RunConfig& c) {
          return c.task.format == EvalFormat::Fixed ? "fixed" : "cv3";
        });
    add("task", "fold",
        [](RunConfig& c, const std::string& v) { c.fold = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.fold); });

    auto add_path = [&](const std::string& key, std::string PathsConfig::* member) {
      add("paths", key,
          [member](RunConfig& c, const std::string& v) { c.paths.*member = v; },
          [member](const RunConfig& c) { return c.paths.*member; });
    };
    add_path("corpus", &PathsConfig::corpus);
    add_path("train_corpus", &PathsConfig::train_corpus);
    add_path("test_corpus", &PathsConfig::test_corpus);
    add_path("ds_corpus", &PathsConfig::ds_corpus);
    add_path("embedding", &PathsConfig::embedding);
    add_path("frames", &PathsConfig::frames);
    add_path("sentiment", &PathsConfig::sentiment);
    add_path("pos", &PathsConfig::pos);
    add_path("lemmas", &PathsConfig::lemmas);
    add_path("pairs", &PathsConfig::pairs);
    add_path("news", &PathsConfig::news);
    add_path("out_dir", &PathsConfig::out_dir);

    add("features", "d_feat",
        [](RunConfig& c, const std::string& v) { c.feat_dims.d_feat = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.feat_dims.d_feat); });
    add("features", "n_max",
        [](RunConfig& c, const std::string& v) { c.feat_dims.n_max = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.feat_dims.n_max); });
    add("features", "eta",
        [](RunConfig& c, const std::string& v) { c.eta = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.eta); });
    add("features", "negation",
        [](RunConfig& c, const std::string& v) { c.negation = v; },
        [](const RunConfig& c) { return c.negation; });

    add("model", "kind",
        [](RunConfig& c, const std::string& v) { c.encoder.kind = parse_encoder_kind(v); },
        [](const RunConfig& c) { return encoder_kind_str(c.encoder.kind); });
    add("model", "conv_window",
        [](RunConfig& c, const std::string& v) { c.encoder.conv_window = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.encoder.conv_window); });
    add("model", "filters",
        [](RunConfig& c, const std::string& v) { c.encoder.filter_count = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.encoder.filter_count); });
    add("model", "lstm_hidden",
        [](RunConfig& c, const std::string& v) { c.encoder.lstm_hidden = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.encoder.lstm_hidden); });
    add("model", "mlp_hidden",
        [](RunConfig& c, const std::string& v) { c.encoder.mlp_hidden = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.encoder.mlp_hidden); });
    add("model", "sum_bidirectional",
        [](RunConfig& c, const std::string& v) { c.encoder.sum_bidirectional = to_bool(v); },
        [](const RunConfig& c) { return from_bool(c.encoder.sum_bidirectional); });

    add("train", "seed",
        [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
        [](const RunConfig& c) { return std::to_string(c.seed); });
    add("train", "mode",
        [](RunConfig& c, const std::string& v) { c.mode = parse_train_mode(v); },
        [](const RunConfig& c) { return train_mode_str(c.mode); });
    add("train", "batch_bags",
        [](RunConfig& c, const std::string& v) { c.trainer.batch_bags = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.trainer.batch_bags); });
    add("train", "bag_size",
        [](RunConfig& c, const std::string& v) { c.trainer.bag_size = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.trainer.bag_size); });
    add("train", "keep_prob",
        [](RunConfig& c, const std::string& v) { c.trainer.keep_prob = to_f64(v); },
        [](const RunConfig& c) { return from_f64(c.trainer.keep_prob); });
    add("train", "rho",
        [](RunConfig& c, const std::string& v) { c.trainer.rho = to_f64(v); },
        [](const RunConfig& c) { return from_f64(c.trainer.rho); });
    add("train", "epsilon",
        [](RunConfig& c, const std::string& v) { c.trainer.epsilon = to_f64(v); },
        [](const RunConfig& c) { return from_f64(c.trainer.epsilon); });
    add("train", "max_epochs",
        [](RunConfig& c, const std::string& v) { c.trainer.schedule.max_epochs = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.trainer.schedule.max_epochs); });
    add("train", "eval_every",
        [](RunConfig& c, const std::string& v) { c.trainer.schedule.eval_every = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.trainer.schedule.eval_every); });
    add("train", "stop_f1",
        [](RunConfig& c, const std::string& v) { c.trainer.schedule.stop_f1 = to_f64(v); },
        [](const RunConfig& c) { return from_f64(c.trainer.schedule.stop_f1); });
    add("train", "stop_eval",
        [](RunConfig& c, const std::string& v) {
          if (v == "mixture") c.trainer.stop_eval = StopEval::Mixture;
          else if (v == "main") c.trainer.stop_eval = StopEval::Main;
          else throw std::invalid_argument("train.stop_eval must be mixture or main");
        },
        [](const RunConfig& c) {
          return c.trainer.stop_eval == StopEval::Mixture ? "mixture" : "main";
        });

    add("annotate", "mode",
        [](RunConfig& c, const std::string& v) { c.annotate_mode = parse_annotate_mode(v); },
        [](const RunConfig& c) { return annotate_mode_str(c.annotate_mode); });

    auto add_synth_sz = [&](const std::string& key, std::size_t SynthParams::* member) {
      add("synth", key,
          [member](RunConfig& c, const std::string& v) { c.synth.*member = to_sz(v); },
          [member](const RunConfig& c) { return std::to_string(c.synth.*member); });
    };
    auto add_synth_f64 = [&](const std::string& key, double SynthParams::* member) {
      add("synth", key,
          [member](RunConfig& c, const std::string& v) { c.synth.*member = to_f64(v); },
          [member](const RunConfig& c) { return from_f64(c.synth.*member); });
    };
    add_synth_sz("train_docs", &SynthParams::train_docs);
    add_synth_sz("test_docs", &SynthParams::test_docs);
    add_synth_sz("news_docs", &SynthParams::news_docs);
    add_synth_sz("entities", &SynthParams::entities);
    add_synth_sz("frames_pos", &SynthParams::frames_pos);
    add_synth_sz("frames_neg", &SynthParams::frames_neg);
    add_synth_sz("nouns", &SynthParams::nouns);
    add_synth_sz("verbs", &SynthParams::verbs);
    add_synth_sz("preps", &SynthParams::preps);
    add_synth_sz("sentiment_words", &SynthParams::sentiment_words);
    add_synth_sz("events_min", &SynthParams::events_per_doc_min);
    add_synth_sz("events_max", &SynthParams::events_per_doc_max);
    add_synth_sz("event_sentences_min", &SynthParams::sentences_per_event_min);
    add_synth_sz("event_sentences_max", &SynthParams::sentences_per_event_max);
    add_synth_sz("neutral_sentences_min", &SynthParams::neutral_sentences_min);
    add_synth_sz("neutral_sentences_max", &SynthParams::neutral_sentences_max);
    add_synth_f64("distractor_prob", &SynthParams::distractor_prob);
    add_synth_f64("neutral_frame_prob", &SynthParams::neutral_frame_prob);
    add_synth_f64("negation_prob", &SynthParams::negation_prob);
    add_synth_f64("alias_prob", &SynthParams::alias_prob);
    add_synth_f64("other_entity_prob", &SynthParams::other_entity_prob);
    add_synth_f64("pair_list_fraction", &SynthParams::pair_list_fraction);
    add_synth_sz("d_word", &SynthParams::d_word);
    add("synth", "negation",
        [](RunConfig& c, const std::string& v) { c.synth.negation = v; },
        [](const RunConfig& c) { return c.synth.negation; });

    add("analysis", "kde_points",
        [](RunConfig& c, const std::string& v) { c.analysis.kde_points = to_sz(v); },
        [](const RunConfig& c) { return std::to_string(c.analysis.kde_points); });
    add("analysis", "bandwidth",
        [](RunConfig& c, const std::string& v) { c.analysis.bandwidth = to_f64(v); },
        [](const RunConfig& c) { return from_f64(c.analysis.bandwidth); });

    return m;
  }();
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  const Schema& s = schema();
  std::vector<std::string> errors;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (!s.count(section)) {
        errors.push_back("line " + std::to_string(line_no) + ": unknown section [" + section +
                         "]");
        section.clear();
      }
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": key '" + key +
                       "' outside any section");
      continue;
    }
    auto sit = s.find(section);
    if (sit == s.end()) continue;  // already reported
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + section + "." +
                       key + "'");
      continue;
    }
    try {
      kit->second.set(config, value);
    } catch (const std::exception& e) {
      errors.push_back("line " + std::to_string(line_no) + ": bad value for '" + section + "." +
                       key + "': " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "configuration errors:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  config.encoder.class_count = class_count(config.task.scale);
  config.trainer.scale = config.task.scale;
  return config;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  for (const auto& [section, keys] : schema()) {
    os << '[' << section << "]\n";
    for (const auto& [key, handler] : keys) {
      os << key << " = " << handler.get(config) << '\n';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace attex
