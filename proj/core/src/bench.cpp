#include "vf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vf/error.hpp"
#include "vf/parallel.hpp"

namespace vf {

const char* to_string(Stage s) {
  return s == Stage::extractive_only ? "extractive_only" : "extractive_plus_generation";
}

Stage parse_stage(const std::string& s) {
  if (s == "extractive_only") return Stage::extractive_only;
  if (s == "extractive_plus_generation") return Stage::extractive_plus_generation;
  throw UsageError("unknown stage '" + s + "'");
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<std::string> split_dots(const std::string& key) {
  std::vector<std::string> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) out.push_back(part);
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("grid key '" + key + "' expects a number, got '" + value + "'");
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "stage=" << to_string(stage) << ";dataset=" << dataset
     << ";method=" << to_string(extract.method) << ";selection=" << to_string(extract.selection)
     << ";ordering=" << to_string(extract.ordering) << ";k=" << extract.k_label()
     << ";lexrank=" << num(extract.lexrank.damping) << "/" << num(extract.lexrank.tolerance) << "/"
     << extract.lexrank.max_iters << ";embedder=" << embedder << ";text=" << text_config
     << ";seed=" << seed;
  if (generation) {
    os << ";model=" << generation->model << ";finetuning=" << generation->finetuning
       << ";endpoint=" << generation->endpoint << ";mode=" << to_string(generation->mode)
       << ";budget=" << generation->budget << ";decoding=" << generation->decoding.label();
  }
  return os.str();
}

std::string RunConfig::fingerprint() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec spec;
  spec.methods = {Method::truncation, Method::lexrank, Method::claimdriven};
  spec.selections = {Selection::top};
  spec.orderings = {Ordering::article};
  spec.ks = {std::nullopt};
  spec.stages = {Stage::extractive_only};
  spec.seeds = {0};

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line(trim(std::string_view(raw).substr(0, hash)));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("grid line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string value(trim(std::string_view(line).substr(eq + 1)));
    const auto items = split_list(value);
    auto require_items = [&] {
      if (items.empty()) throw UsageError("grid axis '" + key + "' is empty");
    };

    if (key == "datasets") {
      require_items();
      spec.datasets = items;
    } else if (key == "methods") {
      require_items();
      spec.methods.clear();
      for (const auto& v : items) spec.methods.push_back(parse_method(v));
    } else if (key == "selections") {
      require_items();
      spec.selections.clear();
      for (const auto& v : items) spec.selections.push_back(parse_selection(v));
    } else if (key == "orderings") {
      require_items();
      spec.orderings.clear();
      for (const auto& v : items) spec.orderings.push_back(parse_ordering(v));
    } else if (key == "k") {
      require_items();
      spec.ks.clear();
      for (const auto& v : items) {
        if (v == "auto") {
          spec.ks.push_back(std::nullopt);
          continue;
        }
        const double k = parse_number(key, v);
        if (k < 1 || k != static_cast<double>(static_cast<std::size_t>(k))) {
          throw UsageError("unknown k value '" + v + "'");
        }
        spec.ks.push_back(static_cast<std::size_t>(k));
      }
    } else if (key == "stages") {
      require_items();
      spec.stages.clear();
      for (const auto& v : items) spec.stages.push_back(parse_stage(v));
    } else if (key == "models") {
      require_items();
      spec.models = items;
    } else if (key == "finetunings") {
      require_items();
      spec.finetunings = items;
    } else if (key == "decodings") {
      require_items();
      spec.decodings.clear();
      for (const auto& v : items) spec.decodings.push_back(parse_decoding_strategy(v));
    } else if (key == "seeds") {
      require_items();
      spec.seeds.clear();
      for (const auto& v : items) {
        spec.seeds.push_back(static_cast<std::int64_t>(parse_number(key, v)));
      }
    } else if (key == "gen_endpoint") {
      spec.gen_endpoint = value;
    } else if (key == "lexrank.damping") {
      spec.lexrank.damping = parse_number(key, value);
    } else if (key == "lexrank.tolerance") {
      spec.lexrank.tolerance = parse_number(key, value);
    } else if (key == "lexrank.max_iters") {
      spec.lexrank.max_iters = static_cast<int>(parse_number(key, value));
    } else {
      const auto parts = split_dots(key);
      if (parts.size() == 3 && parts[0] == "model" && parts[2] == "budget") {
        const double b = parse_number(key, value);
        if (b < 1) throw UsageError("grid key '" + key + "' must be >= 1");
        spec.model_budget[parts[1]] = static_cast<std::size_t>(b);
      } else if (parts.size() == 3 && parts[0] == "model" && parts[2] == "endpoint") {
        spec.model_endpoint[parts[1]] = value;
      } else if (parts.size() == 3 && parts[0] == "endpoint") {
        spec.cell_endpoint[{parts[1], parts[2]}] = value;
      } else if (parts.size() == 3 && parts[0] == "finetuning" && parts[2] == "mode") {
        spec.finetuning_mode[parts[1]] = parse_input_mode(value);
      } else if (parts.size() == 3 && parts[0] == "decoding") {
        spec.decoding_params[parse_decoding_strategy(parts[1])][parts[2]] =
            parse_number(key, value);
      } else {
        throw UsageError("grid line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
    }
  }
  if (spec.datasets.empty()) throw UsageError("grid declares no datasets");
  const bool generation = std::find(spec.stages.begin(), spec.stages.end(),
                                    Stage::extractive_plus_generation) != spec.stages.end();
  if (generation && (spec.models.empty() || spec.finetunings.empty() || spec.decodings.empty())) {
    throw UsageError("generation stage needs models, finetunings and decodings");
  }
  return spec;
}

GridSpec GridSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t GridSpec::summary_count() const {
  std::set<std::tuple<Method, Selection, Ordering>> cells;
  for (Method m : methods) {
    for (Selection s : selections) {
      for (Ordering o : orderings) cells.emplace(m, s, m == Method::truncation ? Ordering::article : o);
    }
  }
  return cells.size();
}

std::vector<RunConfig> expand_grid(const GridSpec& spec, const std::string& embedder,
                                   const std::string& text_config) {
  std::map<std::string, RunConfig> cells;
  auto add = [&](RunConfig c) {
    c.extract.validate();
    cells.emplace(c.canonical(), std::move(c));
  };
  for (Stage stage : spec.stages) {
    for (const auto& dataset : spec.datasets) {
      for (Method method : spec.methods) {
        for (Selection selection : spec.selections) {
          for (Ordering ordering : spec.orderings) {
            for (const auto& k : spec.ks) {
              for (std::int64_t seed : spec.seeds) {
                RunConfig base;
                base.dataset = dataset;
                base.stage = stage;
                base.seed = seed;
                base.embedder = embedder;
                base.text_config = text_config;
                base.extract.method = method;
                base.extract.selection = selection;
                base.extract.ordering =
                    method == Method::truncation ? Ordering::article : ordering;
                base.extract.k = k;
                base.extract.lexrank = spec.lexrank;
                if (stage == Stage::extractive_only) {
                  add(base);
                  continue;
                }
                for (const auto& model : spec.models) {
                  for (const auto& ft : spec.finetunings) {
                    for (DecodingStrategy d : spec.decodings) {
                      RunConfig c = base;
                      GenerationSetup g;
                      g.model = model;
                      g.finetuning = ft;
                      if (auto it = spec.cell_endpoint.find({model, ft});
                          it != spec.cell_endpoint.end()) {
                        g.endpoint = it->second;
                      } else if (auto m = spec.model_endpoint.find(model);
                                 m != spec.model_endpoint.end()) {
                        g.endpoint = m->second;
                      } else {
                        g.endpoint = spec.gen_endpoint;
                      }
                      if (auto it = spec.finetuning_mode.find(ft); it != spec.finetuning_mode.end()) {
                        g.mode = it->second;
                      } else {
                        g.mode = ft == "claim_article" || ft == "claim+article"
                                     ? InputMode::claim_article
                                     : InputMode::article;
                      }
                      if (auto it = spec.model_budget.find(model); it != spec.model_budget.end()) {
                        g.budget = it->second;
                      }
                      g.decoding = DecodingSpec::defaults(d);
                      if (auto it = spec.decoding_params.find(d); it != spec.decoding_params.end()) {
                        for (const auto& [key, value] : it->second) g.decoding.params[key] = value;
                      }
                      g.decoding.validate();
                      c.generation = std::move(g);
                      add(std::move(c));
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  std::vector<RunConfig> out;
  out.reserve(cells.size());
  for (auto& [key, cfg] : cells) out.push_back(std::move(cfg));
  return out;
}

RunResult run(const Corpus& corpus, const RunConfig& config, const Backends& backends) {
  const auto started = std::chrono::steady_clock::now();
  if (corpus.name() != config.dataset && corpus.dataset_tag() != config.dataset) {
    throw DataError("corpus '" + corpus.name() + "' does not match dataset '" + config.dataset +
                    "'");
  }
  if (corpus.empty()) throw DataError("corpus '" + corpus.name() + "' is empty");
  if ((config.stage == Stage::extractive_plus_generation) != config.generation.has_value()) {
    throw UsageError("generation settings must be present exactly for the generation stage");
  }
  if (config.extract.method == Method::claimdriven && backends.embedder == nullptr) {
    throw UsageError("claim-driven runs need an embedding backend");
  }
  ExtractContext ctx{backends.embedder, config.extract.k ? 0 : auto_k(corpus)};

  auto extracts = ordered_parallel_map(
      corpus.size(), backends.jobs, [&](std::size_t i) -> std::optional<Extract> {
        const auto& seg = corpus.segmented(i);
        try {
          return extract(seg.article, seg.claim, config.extract, ctx);
        } catch (const DataError&) {
          return std::nullopt;
        }
      });

  RunResult result;
  result.config = config;
  std::vector<RougeTriplet> scores;
  if (config.stage == Stage::extractive_only) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!extracts[i]) {
        ++result.excluded;
        continue;
      }
      scores.push_back(rouge_all(tokenize(extracts[i]->text), corpus.segmented(i).verdict.words()));
    }
  } else {
    const GenerationSetup& g = *config.generation;
    if (g.endpoint.empty()) {
      throw UsageError("no generation endpoint for model '" + g.model + "'");
    }
    std::vector<GenInput> inputs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!extracts[i]) {
        ++result.excluded;
        continue;
      }
      try {
        inputs.push_back(assemble_input(corpus.segmented(i).claim, *extracts[i], g.mode, g.budget,
                                        backends.subword_calibration, corpus.at(i).id));
      } catch (const DataError&) {
        ++result.excluded;
      }
    }
    const GenerationClient client(g.endpoint, backends.generation);
    for (const auto& r : client.generate_all(inputs, g.decoding, config.seed)) {
      if (r.empty) {
        ++result.excluded;
        continue;
      }
      scores.push_back(
          rouge_all(tokenize(r.text), corpus.segmented(*corpus.find(r.triple_id)).verdict.words()));
    }
  }

  result.triples = scores.size();
  if (!scores.empty()) result.mean = aggregate(scores);
  result.unreliable = scores.empty() || result.excluded * 10 > corpus.size();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

namespace {

std::vector<const RunResult*> sorted(const std::vector<RunResult>& results) {
  std::vector<const RunResult*> out;
  for (const auto& r : results) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const RunResult* a, const RunResult* b) {
    return a->config.canonical() < b->config.canonical();
  });
  return out;
}

int method_rank(Method m) {
  return m == Method::truncation ? 0 : (m == Method::lexrank ? 1 : 2);
}

std::string selection_label(const RunConfig& c) {
  if (c.extract.method == Method::truncation) {
    return c.extract.selection == Selection::top ? "head" : "tail";
  }
  return to_string(c.extract.selection);
}

}  // namespace

std::string results_csv(const std::vector<RunResult>& results) {
  std::ostringstream os;
  os << "config_fingerprint,dataset,method,selection,ordering,stage,R1,R2,RL,"
        "R1_recall,R2_recall,RL_recall,k,embedder,model,finetuning,mode,budget,decoding,seed,"
        "triples,excluded,unreliable\n";
  for (const RunResult* r : sorted(results)) {
    const RunConfig& c = r->config;
    os << c.fingerprint() << "," << c.dataset << "," << to_string(c.extract.method) << ","
       << to_string(c.extract.selection) << "," << to_string(c.extract.ordering) << ","
       << to_string(c.stage) << "," << fixed(r->mean.r1.f1, 6) << "," << fixed(r->mean.r2.f1, 6)
       << "," << fixed(r->mean.rl.f1, 6) << "," << fixed(r->mean.r1.recall, 6) << ","
       << fixed(r->mean.r2.recall, 6) << "," << fixed(r->mean.rl.recall, 6) << ","
       << c.extract.k_label() << "," << c.embedder << ",";
    if (c.generation) {
      os << c.generation->model << "," << c.generation->finetuning << ","
         << to_string(c.generation->mode) << "," << c.generation->budget << ","
         << to_string(c.generation->decoding.strategy);
    } else {
      os << ",,,,";
    }
    os << "," << c.seed << "," << r->triples << "," << r->excluded << ","
       << (r->unreliable ? "yes" : "no") << "\n";
  }
  return os.str();
}

std::string results_markdown(const std::vector<RunResult>& results) {
  std::ostringstream os;
  os << "# Benchmark results\n\n";
  std::set<std::string> embedders, text_configs;
  for (const auto& r : results) {
    embedders.insert(r.config.embedder);
    text_configs.insert(r.config.text_config);
  }
  for (const auto& e : embedders) os << "- embedder: `" << e << "`\n";
  for (const auto& t : text_configs) os << "- text configuration: `" << t << "`\n";
  os << "- scores: mean ROUGE F1 against the gold verdict; bottom selection in ranking order "
        "lists the chosen sentences by descending score\n";

  const auto rows = sorted(results);
  std::set<std::string> datasets;
  for (const RunResult* r : rows) datasets.insert(r->config.dataset);

  auto row_order = [](const RunResult* a, const RunResult* b) {
    const auto ka = std::make_tuple(method_rank(a->config.extract.method),
                                    a->config.extract.selection, a->config.extract.k_label(),
                                    a->config.canonical());
    const auto kb = std::make_tuple(method_rank(b->config.extract.method),
                                    b->config.extract.selection, b->config.extract.k_label(),
                                    b->config.canonical());
    return ka < kb;
  };
  auto emit_table = [&](const std::string& title, std::vector<const RunResult*> view) {
    if (view.empty()) return;
    std::stable_sort(view.begin(), view.end(), row_order);
    os << "\n### " << title << "\n\n| method | selection | k | R1 | R2 | RL | triples | note |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (const RunResult* r : view) {
      os << "| " << to_string(r->config.extract.method) << " | " << selection_label(r->config)
         << " | " << r->config.extract.k_label() << " | " << fixed(r->mean.r1.f1, 3) << " | "
         << fixed(r->mean.r2.f1, 3) << " | " << fixed(r->mean.rl.f1, 3) << " | " << r->triples
         << " | " << (r->unreliable ? "unreliable" : "") << " |\n";
    }
  };

  for (const auto& ds : datasets) {
    std::vector<const RunResult*> best, article, ranking;
    for (const RunResult* r : rows) {
      const auto& c = r->config;
      if (c.dataset != ds || c.stage != Stage::extractive_only) continue;
      (c.extract.ordering == Ordering::article ? article : ranking).push_back(r);
      if (c.extract.ordering == Ordering::article && c.extract.selection == Selection::top) {
        best.push_back(r);
      }
    }
    if (best.empty() && article.empty() && ranking.empty()) continue;
    os << "\n## " << ds << ": extractive\n";
    emit_table(ds + ": top selection, article order", best);
    emit_table(ds + ": article order", article);
    emit_table(ds + ": ranking order", ranking);
  }

  for (const auto& ds : datasets) {
    std::vector<const RunResult*> gen;
    for (const RunResult* r : rows) {
      if (r->config.dataset == ds && r->config.stage == Stage::extractive_plus_generation) {
        gen.push_back(r);
      }
    }
    if (gen.empty()) continue;
    os << "\n## " << ds << ": extractive + generation\n\n"
       << "| model | finetuning | mode | budget | decoding | method | selection | ordering | k "
          "| R1 | R2 | RL | triples | note |\n"
       << "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const RunResult* r : gen) {
      const auto& c = r->config;
      const auto& g = *c.generation;
      os << "| " << g.model << " | " << g.finetuning << " | " << to_string(g.mode) << " | "
         << g.budget << " | " << to_string(g.decoding.strategy) << " | "
         << to_string(c.extract.method) << " | " << selection_label(c) << " | "
         << to_string(c.extract.ordering) << " | " << c.extract.k_label() << " | "
         << fixed(r->mean.r1.f1, 3) << " | " << fixed(r->mean.r2.f1, 3) << " | "
         << fixed(r->mean.rl.f1, 3) << " | " << r->triples << " | "
         << (r->unreliable ? "unreliable" : "") << " |\n";
    }
  }
  return os.str();
}

void compare(const std::vector<RunResult>& results, const std::filesystem::path& out_dir) {
  if (results.empty()) throw DataError("nothing to compare");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  const auto write = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write '" + path.string() + "'");
  };
  write(out_dir / "bench.csv", results_csv(results));
  write(out_dir / "bench.md", results_markdown(results));
}

}  // namespace vf
