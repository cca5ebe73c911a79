#include "dox/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "dox/archetypes.hpp"
#include "dox/corpus.hpp"
#include "dox/error.hpp"
#include "dox/extraction.hpp"
#include "dox/oracle.hpp"
#include "dox/report.hpp"
#include "dox/text.hpp"

namespace dox::cli {
namespace {

struct ComputeArgs {
  std::vector<std::string> corpus;
  std::string triplets;
  std::string input_format = "plain";
  std::string aspects_file;
  std::vector<std::string> aspect_phrases;
  std::string auto_aspects;
  std::string archetypes = "all";
  std::string backend = "lexical";
  std::string model = "default";
  double t = 0.15;
  double r = 0.97;
  std::string format = "json";
  std::string out;
  std::size_t jobs = 4;
  std::string match_scope = "extended";
  bool no_cache = false;
};

struct ExtractArgs {
  std::vector<std::string> corpus;
  std::string input_format = "plain";
  std::string out;
  std::string graph;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InputFormat parse_input_format(const std::string& name) {
  if (name == "plain") return InputFormat::kPlain;
  if (name == "markup" || name == "markup-stripped") return InputFormat::kMarkupStripped;
  throw ConfigError("--input-format must be plain or markup-stripped");
}

std::vector<std::filesystem::path> to_paths(const std::vector<std::string>& raw) {
  return {raw.begin(), raw.end()};
}

std::vector<Archetype> resolve_archetypes(const std::string& spec) {
  if (spec == "all") return default_archetypes(TierSelection::kAll);
  if (spec == "primary") return default_archetypes(TierSelection::kPrimary);
  if (spec == "secondary") return default_archetypes(TierSelection::kSecondary);
  if (!std::filesystem::exists(spec)) {
    throw ConfigError("--archetypes: \"" + spec + "\" is neither a tier nor a readable file");
  }
  return load_custom_archetypes(spec);
}

std::shared_ptr<EmbeddingBackend> make_backend(const ComputeArgs& a) {
  if (a.backend == "lexical") return std::make_shared<LexicalBackend>();
  if (a.backend.rfind("http://", 0) == 0 || a.backend.rfind("https://", 0) == 0) {
    RemoteOptions opts;
    opts.url = a.backend;
    opts.model = a.model;
    if (const char* tok = std::getenv("DOX_BACKEND_TOKEN")) opts.bearer_token = tok;
    return std::make_shared<RemoteBackend>(std::move(opts));
  }
  throw ConfigError("--backend must be \"lexical\" or an http(s) URL");
}

std::shared_ptr<EmbeddingCache> make_cache() {
  if (const char* dir = std::getenv("DOX_CACHE_DIR"); dir && *dir) {
    return std::make_shared<EmbeddingCache>(std::filesystem::path(dir));
  }
  return std::make_shared<EmbeddingCache>();
}

RunParams build_params(const ComputeArgs& a) {
  RunParams params;
  params.pertinence_threshold = a.t;
  params.dedup_threshold = a.r;
  params.archetype_selection = a.archetypes;
  if (a.match_scope == "extended") {
    params.match_scope = MatchScope::kExtended;
  } else if (a.match_scope == "subject-object") {
    params.match_scope = MatchScope::kSubjectObject;
  } else {
    throw ConfigError("--match-scope must be extended or subject-object");
  }
  if (!a.aspects_file.empty()) {
    auto more = load_aspect_file(a.aspects_file, "--aspects");
    params.aspects.insert(params.aspects.end(), more.begin(), more.end());
  }
  for (const std::string& phrase : a.aspect_phrases) params.aspects.push_back(make_aspect(phrase));
  if (!a.auto_aspects.empty()) {
    std::string description;
    try {
      description = read_text(a.auto_aspects);
    } catch (const IoError&) {
      throw ConfigError("--auto-aspects: cannot read " + a.auto_aspects);
    }
    auto more = derive_aspects(description);
    params.aspects.insert(params.aspects.end(), more.begin(), more.end());
  }
  if (params.aspects.empty()) {
    throw ConfigError("no explanandum aspects: pass --aspects FILE, --aspect PHRASE or --auto-aspects FILE");
  }
  return params;
}

std::vector<TemplateTriplet> gather_triplets(const ComputeArgs& a) {
  std::vector<TemplateTriplet> triplets;
  if (!a.corpus.empty()) {
    triplets = extract_corpus(load_corpus(to_paths(a.corpus), parse_input_format(a.input_format)));
  }
  if (!a.triplets.empty()) {
    auto imported = import_triplets(a.triplets);
    triplets.insert(triplets.end(), imported.begin(), imported.end());
  }
  if (a.corpus.empty() && a.triplets.empty()) {
    throw ConfigError("--corpus or --triplets is required");
  }
  return triplets;
}

int do_compute(const ComputeArgs& a, bool use_oracle, std::ostream& out, std::ostream& err) {
  const RunParams params = build_params(a);
  validate(params);
  const auto archetypes = resolve_archetypes(a.archetypes);
  const ReportFormat format = parse_report_format(a.format);
  const auto triplets = gather_triplets(a);

  PertinenceEngine engine(make_backend(a), EngineOptions{a.jobs, !a.no_cache}, make_cache());
  const DoXResult result = use_oracle
                               ? oracle_dox(triplets, params, archetypes, engine)
                               : compute_dox(build_graph(triplets), params, archetypes, engine);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";

  const std::string rendered = render_report(result, format);
  if (a.out.empty()) {
    out << rendered;
  } else {
    write_atomic(a.out, rendered);
  }
  return kOk;
}

int do_extract(const ExtractArgs& a, std::ostream& out) {
  const Corpus corpus = load_corpus(to_paths(a.corpus), parse_input_format(a.input_format));
  const auto triplets = extract_corpus(corpus);
  const std::string jsonl = triplets_to_jsonl(triplets);
  if (a.out.empty()) {
    out << jsonl;
  } else {
    write_atomic(a.out, jsonl);
  }
  if (!a.graph.empty()) write_atomic(a.graph, graph_to_json(build_graph(triplets)).dump(2) + "\n");
  return kOk;
}

void add_compute_options(CLI::App* cmd, ComputeArgs& a) {
  cmd->add_option("--corpus", a.corpus, "Corpus files or directories")->expected(1, -1);
  cmd->add_option("--triplets", a.triplets, "Triplet JSONL to import instead of (or with) extraction");
  cmd->add_option("--input-format", a.input_format, "plain | markup-stripped");
  cmd->add_option("--aspects", a.aspects_file, "Aspect file, one phrase per line");
  cmd->add_option("--aspect", a.aspect_phrases, "Aspect phrase (repeatable)");
  cmd->add_option("--auto-aspects", a.auto_aspects, "Derive aspects from a textual description");
  cmd->add_option("--archetypes", a.archetypes, "primary | secondary | all | config FILE");
  cmd->add_option("--backend", a.backend, "lexical | http(s) URL of an embedding service");
  cmd->add_option("--model", a.model, "Model name sent to the remote backend");
  cmd->add_option("--t", a.t, "Pertinence threshold");
  cmd->add_option("--r", a.r, "Dedup similarity threshold");
  cmd->add_option("--format", a.format, "json | csv | table");
  cmd->add_option("--out", a.out, "Report path (stdout if omitted)");
  cmd->add_option("--jobs", a.jobs, "Concurrent embedding batches")->check(CLI::PositiveNumber);
  cmd->add_option("--match-scope", a.match_scope, "extended | subject-object");
  cmd->add_flag("--no-cache", a.no_cache, "Disable the embedding cache");
}

}  // namespace

std::vector<Aspect> load_aspect_file(const std::filesystem::path& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw ConfigError(flag + ": cannot read aspect file " + path.string());
  std::vector<Aspect> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string phrase = text::trim(line);
    if (phrase.empty()) continue;
    out.push_back(make_aspect(phrase));
  }
  return out;
}

std::vector<Aspect> derive_aspects(const std::string& description) {
  std::vector<Aspect> out;
  std::set<std::string> seen;
  for (const std::string& chunk : noun_chunks(description)) {
    Aspect a = make_aspect(chunk);
    if (!a.key.empty() && seen.insert(a.key).second) out.push_back(std::move(a));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degree-of-explainability measurement for text corpora", "dox"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* compute_cmd = app.add_subcommand("compute", "Compute the DoX report of a corpus");
  add_compute_options(compute_cmd, compute);

  ComputeArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run the brute-force reference implementation");
  oracle_cmd->group("");
  add_compute_options(oracle_cmd, oracle);

  std::string left, right;
  double tolerance = 1e-6;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two DoX reports");
  compare_cmd->add_option("left", left, "Left report")->required();
  compare_cmd->add_option("right", right, "Right report")->required();
  compare_cmd->add_option("--tolerance", tolerance, "Average-DoX tie tolerance");

  std::string gate_path;
  double min_average = 0.0;
  double min_coverage = 0.0;
  auto* gate_cmd = app.add_subcommand("gate", "Fail unless a report meets minimum explainability");
  gate_cmd->add_option("report", gate_path, "Report JSON")->required();
  gate_cmd->add_option("--min-average", min_average, "Minimum average DoX");
  gate_cmd->add_option("--min-coverage", min_coverage, "Minimum aspect coverage");

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract", "Export extracted template-triplets");
  extract_cmd->add_option("--corpus", extract.corpus, "Corpus files or directories")
      ->expected(1, -1)
      ->required();
  extract_cmd->add_option("--input-format", extract.input_format, "plain | markup-stripped");
  extract_cmd->add_option("--out", extract.out, "Triplet JSONL path (stdout if omitted)");
  extract_cmd->add_option("--graph", extract.graph, "Also write the knowledge graph JSON here");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "dox: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*compute_cmd) return do_compute(compute, false, out, err);
    if (*oracle_cmd) return do_compute(oracle, true, out, err);
    if (*extract_cmd) return do_extract(extract, out);
    if (*compare_cmd) {
      const auto cmp = compare_reports(read_report(left), read_report(right), tolerance);
      out << comparison_json(cmp).dump(2) << "\n";
      return kOk;
    }
    if (*gate_cmd) {
      nlohmann::json report;
      GateOutcome outcome;
      try {
        report = read_report(gate_path);
        outcome = gate_report(report, min_average, min_coverage);
      } catch (const SchemaError& e) {
        throw IoError(e.what());
      }
      (outcome.passed ? out : err) << outcome.message;
      return outcome.passed ? kOk : kGateFailed;
    }
  } catch (const ConfigError& e) {
    err << "dox: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SchemaError& e) {
    err << "dox: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SizeError& e) {
    err << "dox: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BackendError& e) {
    err << "dox: backend error: " << e.what() << "\n";
    return kBackendError;
  } catch (const IngestError& e) {
    err << "dox: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const IoError& e) {
    err << "dox: I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kConfigError;
}

}  // namespace dox::cli
