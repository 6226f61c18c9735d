#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "vf/analysis.hpp"
#include "vf/bench.hpp"
#include "vf/corpus.hpp"
#include "vf/embedder.hpp"
#include "vf/error.hpp"
#include "vf/extractive.hpp"
#include "vf/genbridge.hpp"
#include "vf/http.hpp"

namespace vf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kEmbedEnv = "VF_EMBED_ENDPOINT";

std::string resolve_embed_endpoint(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kEmbedEnv)) return env;
  return {};
}

std::unique_ptr<EmbeddingBackend> make_embedder(const std::string& endpoint) {
  if (endpoint.empty()) return std::make_unique<LexicalEmbedder>();
  return std::make_unique<RemoteEmbedder>(endpoint);
}

Corpus load_with_sidecar(const std::string& path, const std::string& subwords) {
  Corpus corpus = load_corpus(path);
  if (!subwords.empty()) corpus.apply_subword_counts(load_subword_counts(subwords));
  return corpus;
}

void print_fingerprint(std::ostream& out, const std::string& command, const std::string& canonical,
                       const std::string& fingerprint) {
  out << "[" << command << "] config: " << canonical << "\n";
  out << "[" << command << "] fingerprint: " << fingerprint << "\n";
}

std::string simple_fingerprint(const std::string& canonical) {
  RunConfig probe;
  probe.text_config = canonical;
  return probe.fingerprint();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

// ---- probe -----------------------------------------------------------------

void probe_embed(const Endpoint& ep, std::ostream& out) {
  const std::vector<std::string> texts = {"a", "a", "The claim was rated false."};
  const auto first = post_json(ep, "/embed", make_embed_request(texts));
  if (first.status != 200) {
    throw ProtocolError("/embed answered HTTP " + std::to_string(first.status));
  }
  const auto vectors = parse_embed_response(first.body, texts.size());
  const std::size_t dims = vectors.front().dims();
  if (dims == 0) throw ProtocolError("/embed advertised zero dims");
  if (!(vectors[0] == vectors[1])) {
    throw ProtocolError("/embed returned different vectors for identical texts");
  }
  const auto second = post_json(ep, "/embed", make_embed_request(texts));
  if (second.status != 200 || !(parse_embed_response(second.body, texts.size()) == vectors)) {
    throw ProtocolError("/embed is not deterministic across identical requests");
  }
  const auto empty = post_json(ep, "/embed", make_embed_request({}));
  if (empty.status != 200) {
    throw ProtocolError("/embed rejected an empty text list");
  }
  parse_embed_response(empty.body, 0);
  out << "embed: ok dims=" << dims << "\n";
}

void probe_generate(const Endpoint& ep, std::ostream& out) {
  GenInput input;
  input.triple_id = "probe";
  input.mode = InputMode::claim_article;
  input.claim = "The moon is made of cheese.";
  input.context = "Samples returned by missions show the moon is made of rock.";
  const auto beam = DecodingSpec::defaults(DecodingStrategy::beam);
  const auto body = make_generate_request(input, beam, 7);
  const auto first = post_json(ep, "/generate", body);
  if (first.status != 200) {
    throw ProtocolError("/generate answered HTTP " + std::to_string(first.status));
  }
  const auto text = parse_generate_response(first.body);
  const auto second = post_json(ep, "/generate", body);
  if (second.status != 200 || parse_generate_response(second.body) != text) {
    throw ProtocolError("/generate beam decoding is not repeatable with a fixed seed");
  }
  auto bad = json::parse(body);
  bad["decoding"]["strategy"] = "greedy+";
  const auto rejected = post_json(ep, "/generate", bad.dump());
  if (rejected.status != 422) {
    throw ProtocolError("/generate answered HTTP " + std::to_string(rejected.status) +
                        " to an unsupported strategy (expected 422)");
  }
  out << "generate: ok (" << text.size() << " bytes)\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Claim-driven summarization benchmark toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string in_path, corpus_path, out_path, subwords, candidates, grid_path, corpus_dir,
      embed_endpoint, gen_endpoint, endpoint;
  std::string method = "truncation", k_text = "auto", selection = "top", ordering = "article";
  double damping = 0.85;
  std::size_t jobs = 1;
  bool validate = false, embed_only = false;

  auto* ingest = app.add_subcommand("ingest", "Load and validate a JSONL corpus");
  ingest->add_option("--in", in_path, "Corpus JSONL")->required();
  ingest->add_flag("--validate", validate, "Only validate; print counts");
  ingest->add_option("--subwords", subwords, "Exact subword-count sidecar JSONL");

  auto* analyze = app.add_subcommand("analyze", "Corpus length and overlap statistics");
  analyze->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  analyze->add_option("--out", out_path, "Output directory")->required();
  analyze->add_option("--subwords", subwords, "Exact subword-count sidecar JSONL");

  auto* extract_cmd = app.add_subcommand("extract", "Extractive summaries for every triple");
  extract_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  extract_cmd->add_option("--method", method, "truncation | lexrank | claimdriven");
  extract_cmd->add_option("--k", k_text, "Sentence count or 'auto'");
  extract_cmd->add_option("--selection", selection, "top | bottom");
  extract_cmd->add_option("--ordering", ordering, "article | ranking");
  extract_cmd->add_option("--damping", damping, "LexRank damping");
  extract_cmd->add_option("--out", out_path, "Output JSONL")->required();
  extract_cmd->add_option("--embed-endpoint", embed_endpoint,
                          "Remote /embed server (default: $VF_EMBED_ENDPOINT, else lexical)");

  auto* score = app.add_subcommand("score", "ROUGE of candidate texts against gold verdicts");
  score->add_option("--candidates", candidates, "JSONL with id and text")->required();
  score->add_option("--corpus", corpus_path, "Corpus JSONL")->required();

  auto* bench = app.add_subcommand("bench", "Run a configuration grid");
  bench->add_option("--grid", grid_path, "Grid spec file")->required();
  bench->add_option("--corpus-dir", corpus_dir, "Directory of <dataset>.jsonl files")->required();
  bench->add_option("--out", out_path, "Output directory")->required();
  bench->add_option("--embed-endpoint", embed_endpoint, "Remote /embed server");
  bench->add_option("--gen-endpoint", gen_endpoint, "Default /generate server");
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* probe = app.add_subcommand("probe", "Check a server against the wire protocols");
  probe->add_option("--endpoint", endpoint, "Server URL")->required();
  probe->add_flag("--embed-only", embed_only, "Skip the /generate checks");

  std::vector<std::string> argv_reversed(args.rbegin(), args.rend());
  try {
    app.parse(argv_reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ErrorKind::usage);
  }

  auto usage_failure = [&](const std::string& what, CLI::App* sub) {
    err << "error: " << what << "\n\n" << sub->help();
    return static_cast<int>(ErrorKind::usage);
  };

  try {
    if (*ingest) {
      const std::string canonical = "ingest;in=" + in_path + ";subwords=" + subwords;
      print_fingerprint(out, "ingest", canonical, simple_fingerprint(canonical));
      const Corpus corpus = load_with_sidecar(in_path, subwords);
      std::set<std::string> datasets;
      for (const auto& t : corpus.triples()) datasets.insert(t.dataset);
      out << "triples: " << corpus.size() << "\n";
      for (const auto& ds : datasets) out << "dataset: " << ds << "\n";
      if (!validate) {
        const auto stats = length_stats(corpus);
        for (const auto& e : stats.elements) {
          out << to_string(e.element) << ": sentences=" << e.mean_sentences
              << " tokens=" << e.mean_tokens << " subwords=" << e.mean_subwords << "\n";
        }
      }
      out << "valid\n";
      return 0;
    }

    if (*analyze) {
      const Corpus corpus = load_with_sidecar(corpus_path, subwords);
      const std::string canonical = "analyze;corpus=" + corpus_path + ";" +
                                    text_config_fingerprint(corpus.segmenter());
      print_fingerprint(out, "analyze", canonical, simple_fingerprint(canonical));
      report(corpus, out_path);
      out << "wrote " << (fs::path(out_path) / "analysis.csv").string() << "\n";
      return 0;
    }

    if (*extract_cmd) {
      ExtractConfig config;
      try {
        config.method = parse_method(method);
        config.selection = parse_selection(selection);
        config.ordering = parse_ordering(ordering);
        if (k_text != "auto") {
          std::size_t used = 0;
          const long long k = std::stoll(k_text, &used);
          if (used != k_text.size() || k < 1) throw UsageError("k");
          config.k = static_cast<std::size_t>(k);
        }
        config.lexrank.damping = damping;
        config.validate();
      } catch (const std::exception& e) {
        return usage_failure(std::string("invalid extract option: ") + e.what(), extract_cmd);
      }
      const Corpus corpus = load_corpus(corpus_path);
      const auto embed_url = resolve_embed_endpoint(embed_endpoint);
      auto embedder = make_embedder(embed_url);
      RunConfig rc;
      rc.dataset = corpus.dataset_tag();
      rc.extract = config;
      rc.embedder = embedder->name();
      rc.text_config = text_config_fingerprint(corpus.segmenter());
      const std::string fingerprint = rc.fingerprint();
      print_fingerprint(out, "extract", rc.canonical(), fingerprint);

      ExtractContext ctx{embedder.get(), config.k ? 0 : auto_k(corpus)};
      std::string lines;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& seg = corpus.segmented(i);
        const Extract ex = extract(seg.article, seg.claim, config, ctx);
        lines += json{{"id", corpus.at(i).id},
                      {"indices", ex.indices},
                      {"text", ex.text},
                      {"config_fingerprint", fingerprint}}
                     .dump() +
                 "\n";
      }
      write_file(out_path, lines);
      out << "extracted " << corpus.size() << " triples to " << out_path << "\n";
      return 0;
    }

    if (*score) {
      const Corpus corpus = load_corpus(corpus_path);
      const std::string canonical = "score;candidates=" + candidates + ";corpus=" + corpus_path +
                                    ";" + text_config_fingerprint(corpus.segmenter());
      print_fingerprint(out, "score", canonical, simple_fingerprint(canonical));
      std::ifstream in(candidates);
      if (!in) throw IoError("cannot open candidates '" + candidates + "'");
      std::vector<GenResult> results;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
          const json obj = json::parse(line);
          GenResult r;
          r.triple_id = obj.at("id").get<std::string>();
          r.text = obj.at("text").get<std::string>();
          r.empty = trim(r.text).empty();
          results.push_back(std::move(r));
        } catch (const json::exception& e) {
          throw DataError("candidates line " + std::to_string(line_no) + ": " + e.what());
        }
      }
      const auto scores = score_generations(results, corpus);
      out << "scored: " << scores.scored << " excluded: " << scores.excluded << "\n";
      for (const auto* s : {&scores.mean.r1, &scores.mean.r2, &scores.mean.rl}) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s precision=%.6f recall=%.6f f1=%.6f\n",
                      to_string(s->variant), s->precision, s->recall, s->f1);
        out << buf;
      }
      return 0;
    }

    if (*bench) {
      GridSpec spec = GridSpec::load(grid_path);
      if (!gen_endpoint.empty()) spec.gen_endpoint = gen_endpoint;
      const auto embed_url = resolve_embed_endpoint(embed_endpoint);
      auto embedder = make_embedder(embed_url);
      const SegmenterOptions segmenter;
      const auto configs = expand_grid(spec, embedder->name(), text_config_fingerprint(segmenter));
      out << "[bench] " << configs.size() << " configurations\n";

      std::map<std::string, Corpus> corpora;
      for (const auto& ds : spec.datasets) {
        corpora.emplace(ds, load_corpus(fs::path(corpus_dir) / (ds + ".jsonl"),
                                        CorpusFormat::jsonl, segmenter));
      }
      Backends backends;
      backends.embedder = embedder.get();
      backends.jobs = jobs;
      backends.subword_calibration = segmenter.subword_calibration;

      std::vector<RunResult> results;
      for (const auto& cfg : configs) {
        print_fingerprint(out, "bench", cfg.canonical(), cfg.fingerprint());
        auto result = run(corpora.at(cfg.dataset), cfg, backends);
        char buf[160];
        std::snprintf(buf, sizeof buf, "[bench] R1=%.4f R2=%.4f RL=%.4f triples=%zu excluded=%zu%s (%.2fs)\n",
                      result.mean.r1.f1, result.mean.r2.f1, result.mean.rl.f1, result.triples,
                      result.excluded, result.unreliable ? " unreliable" : "",
                      result.wall_seconds);
        out << buf;
        results.push_back(std::move(result));
      }
      compare(results, out_path);
      out << "wrote " << (fs::path(out_path) / "bench.csv").string() << "\n";
      return 0;
    }

    if (*probe) {
      const Endpoint ep = Endpoint::parse(endpoint);
      print_fingerprint(out, "probe", "probe;endpoint=" + endpoint,
                        simple_fingerprint("probe;endpoint=" + endpoint));
      if (auto health = http_get(ep, "/health"); health && health->status == 200) {
        out << "health: " << health->body << "\n";
      }
      probe_embed(ep, out);
      if (!embed_only) probe_generate(ep, out);
      out << "conformant\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::data);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::io);
  }
  return static_cast<int>(ErrorKind::usage);
}

}  // namespace vf::cli
