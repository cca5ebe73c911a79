// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Checks that need a retrieval-tuned neural backend run
// only when DOX_NEURAL_URL (and optionally DOX_NEURAL_MODEL) is set.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "properties.hpp"
#include "stub_server.hpp"

namespace dox::testing {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::ostringstream notes;
  void fail(const std::string& why) {
    pass = false;
    notes << "[" << why << "] ";
  }
  void note(const std::string& what) { notes << what << "; "; }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(4) << v;
  return ss.str();
}

std::optional<RemoteOptions> neural_options() {
  const char* url = std::getenv("DOX_NEURAL_URL");
  if (!url || !*url) return std::nullopt;
  RemoteOptions o;
  o.url = url;
  const char* model = std::getenv("DOX_NEURAL_MODEL");
  o.model = model && *model ? model : "default";
  if (const char* tok = std::getenv("DOX_BACKEND_TOKEN")) o.bearer_token = tok;
  return o;
}

PertinenceEngine remote_engine(const RemoteOptions& o) {
  return PertinenceEngine(std::make_shared<RemoteBackend>(o), EngineOptions{4, true},
                          std::make_shared<EmbeddingCache>());
}

RemoteOptions stub_options(const StubEmbedServer& server) {
  RemoteOptions o;
  o.url = server.url();
  o.model = "stub";
  return o;
}

DoXResult score(const Corpus& corpus, const std::vector<Aspect>& aspects, PertinenceEngine& engine) {
  return compute_dox(build_graph(extract_corpus(corpus)), default_params(aspects),
                     default_archetypes(), engine);
}

const char* kZero = "I am happy that my article has been accepted in this prestigious journal";
const char* kAngina = "angina happens when some part of your heart does not get enough oxygen";

void zero_example(Verdict& v) {
  const Corpus c = corpus_of({kZero});
  StubEmbedServer stub;
  std::vector<std::pair<std::string, PertinenceEngine>> engines;
  engines.emplace_back("lexical", lexical_engine());
  engines.emplace_back("remote-stub", remote_engine(stub_options(stub)));
  if (auto o = neural_options()) engines.emplace_back("neural", remote_engine(*o));
  for (auto& [name, engine] : engines) {
    const DoXResult r = score(c, heart_aspects(), engine);
    bool all_zero = r.average == 0.0 && r.coverage == 0.0 && r.per_archetype.size() == 25;
    for (const auto& s : r.per_archetype) all_zero = all_zero && s.value == 0.0;
    if (!all_zero) v.fail(name + ": non-zero result, average " + fmt(r.average));
    v.note(name + " average=" + fmt(r.average) + " coverage=" + fmt(r.coverage));
  }
}

void angina_example(Verdict& v) {
  const Corpus c = corpus_of({kAngina});
  const KnowledgeGraph g = build_graph(extract_corpus(c));
  for (const char* a : {"angina", "heart"}) {
    if (details_about(g, a).empty()) v.fail(std::string("D_a empty for ") + a);
  }
  StubEmbedServer stub;
  auto lexical = lexical_engine();
  auto remote = remote_engine(stub_options(stub));
  for (auto& [name, e] : {std::pair{"lexical", &lexical}, std::pair{"remote-stub", &remote}}) {
    const DoXResult r = score(c, heart_aspects(), *e);
    if (!(r.average > 0.0)) v.fail(std::string(name) + ": average not > 0");
    v.note(std::string(name) + " average=" + fmt(r.average));
  }
  const auto o = neural_options();
  if (!o) {
    v.note("neural sub-checks NOT RUN (DOX_NEURAL_URL unset)");
    return;
  }
  auto neural = remote_engine(*o);
  const DoXResult r = score(c, heart_aspects(), neural);
  if (!(r.average > 0.0)) v.fail("neural: average not > 0");
  if (r.average < 0.15 || r.average > 0.45) v.fail("neural: average " + fmt(r.average) + " outside [0.15, 0.45]");
  for (const char* hi : {"why", "how", "in-what-case", "what-is-the-result"}) {
    for (const char* lo : {"who", "when"}) {
      if (!(r.r(hi) > r.r(lo))) {
        v.fail(std::string("neural: R[") + hi + "]=" + fmt(r.r(hi)) + " <= R[" + lo +
               "]=" + fmt(r.r(lo)));
      }
    }
  }
  v.note("neural average=" + fmt(r.average));
}

std::vector<Aspect> credit_aspects() {
  return aspects_of({"factors to consider", "relative importance of factors", "risk performance",
                     "result of the application"});
}

void credit_ordering(Verdict& v) {
  const Corpus ai = load_corpus({fixture("credit/ai_only.txt")});
  const Corpus xai = load_corpus({fixture("credit/ai_xai.txt")});
  std::vector<std::pair<std::string, PertinenceEngine>> engines;
  engines.emplace_back("lexical", lexical_engine());
  if (auto o = neural_options()) engines.emplace_back("neural", remote_engine(*o));
  for (auto& [name, engine] : engines) {
    const DoXResult a = score(ai, credit_aspects(), engine);
    const DoXResult b = score(xai, credit_aspects(), engine);
    if (!(b.average > a.average)) v.fail(name + ": AI+XAI average not above AI-only");
    if (b.coverage != 1.0) v.fail(name + ": AI+XAI coverage " + fmt(b.coverage));
    if (!(a.coverage < 1.0)) v.fail(name + ": AI-only coverage " + fmt(a.coverage));
    v.note(name + " AI=" + fmt(a.average) + " AI+XAI=" + fmt(b.average) + " coverage " +
           fmt(a.coverage) + "/" + fmt(b.coverage));
  }
  if (!neural_options()) v.note("neural ordering NOT RUN (DOX_NEURAL_URL unset)");
}

std::vector<Aspect> heart_quiz_aspects() {
  std::vector<Aspect> out;
  std::istringstream lines(read_file(fixture("heart/aspects.txt")));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(make_aspect(line));
  }
  return out;
}

void enrichment_ordering(Verdict& v) {
  const Corpus base = load_corpus({fixture("heart/xai_only.txt")});
  const Corpus enriched = load_corpus({fixture("heart/xai_only.txt"), fixture("heart/enrichment")});
  auto engine = lexical_engine();
  const DoXResult a = score(base, heart_quiz_aspects(), engine);
  const DoXResult b = score(enriched, heart_quiz_aspects(), engine);
  const double factor = a.average > 0 ? b.average / a.average : 0.0;
  if (!(b.average >= 2.0 * a.average && b.average > a.average)) {
    v.fail("factor " + fmt(factor) + " < 2");
  }
  v.note("documents " + std::to_string(base.size()) + " -> " + std::to_string(enriched.size()) +
         ", average " + fmt(a.average) + " -> " + fmt(b.average) + " (x" + fmt(factor) + ")");
}

void oracle_equivalence(Verdict& v) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    if (auto f = check_oracle_equivalence(0xACCE55 + seed)) {
      if (++failures <= 3) v.fail("seed " + std::to_string(seed) + ": " + *f);
    }
  }
  v.note("200 instances, " + std::to_string(failures) + " mismatches");
}

void property_suite(Verdict& v) {
  constexpr int kCases = 100;
  const std::vector<std::pair<std::string, std::function<Failure(std::uint64_t)>>> checks = {
      {"duplicate-corpus", check_duplicate_invariance},
      {"unrelated-document", check_unrelated_invariance},
      {"threshold-monotonicity", check_threshold_monotonicity},
      {"permutation", check_permutation_invariance},
  };
  for (const auto& [name, check] : checks) {
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
      if (auto f = check(0xB0B0 + i)) {
        if (++bad == 1) v.fail(name + ": " + *f);
      }
    }
    v.note(name + " " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));
  }
  int checked = 0, bad = 0;
  for (int i = 0; checked < kCases && i < 10 * kCases; ++i) {
    bool skipped = false;
    if (auto f = check_additive_monotonicity(0xADD0 + i, skipped)) {
      if (++bad == 1) v.fail("additive: " + *f);
    }
    checked += skipped ? 0 : 1;
  }
  if (checked < kCases) v.fail("additive: only " + std::to_string(checked) + " qualifying cases");
  v.note("additive " + std::to_string(checked - bad) + "/" + std::to_string(checked));
}

void formula_spot_checks(Verdict& v) {
  const std::vector<PertinenceScore> kept = {{"a", {}, 0.5}, {"b", {}, 0.3}, {"c", {}, 0.1}};
  const double p = cumulative_pertinence(kept, 0.15);
  if (std::abs(p - 0.8) > 1e-12) v.fail("cumulative pertinence " + fmt(p));
  const double r = mean_over_aspects({0.8, 0.0});
  if (std::abs(r - 0.4) > 1e-12) v.fail("R " + fmt(r));
  const double avg = mean_over_archetypes({0.4, 0.2});
  if (std::abs(avg - 0.3) > 1e-12) v.fail("average " + fmt(avg));
  v.note("P=" + fmt(p) + " R=" + fmt(r) + " avg=" + fmt(avg));
}

void remote_contract(Verdict& v) {
  StubEmbedServer server;
  RemoteOptions o = stub_options(server);
  o.bearer_token = "acceptance-token";
  o.backoff = std::chrono::milliseconds(50);
  auto cache = std::make_shared<EmbeddingCache>();
  PertinenceEngine engine(std::make_shared<RemoteBackend>(o), EngineOptions{2, true}, cache);

  std::vector<std::string> texts;
  for (int i = 0; i < 100; ++i) texts.push_back("passage " + std::to_string(i));
  engine.embed(texts, Role::kPassage);
  auto reqs = server.requests();
  std::size_t largest = 0;
  for (const auto& r : reqs) largest = std::max(largest, r.texts.size());
  if (reqs.size() != 2 || largest > 64) {
    v.fail("100 texts took " + std::to_string(reqs.size()) + " requests, largest " +
           std::to_string(largest));
  }
  for (const auto& r : reqs) {
    if (r.authorization != "Bearer acceptance-token") v.fail("bearer token not forwarded");
  }

  server.fail_next(3, 503);
  const auto before = server.attempts();
  const auto start = Clock::now();
  const std::vector<std::string> fresh = {"needs retries"};
  engine.embed(fresh, Role::kQuery);
  const auto waited = std::chrono::duration<double>(Clock::now() - start).count();
  if (server.attempts() - before != 4) {
    v.fail("expected 4 attempts, saw " + std::to_string(server.attempts() - before));
  }
  if (waited < 0.35) v.fail("backoff too short: " + fmt(waited) + "s");

  server.fail_next(4, 503);
  try {
    engine.embed(std::vector<std::string>{"never served"}, Role::kQuery);
    v.fail("persistent 5xx did not raise");
  } catch (const BackendError& e) {
    if (e.failed_batch() != std::vector<std::string>{"never served"}) v.fail("failed batch missing");
  }

  const auto requests_before = server.requests().size();
  const auto hits_before = cache->hits();
  engine.embed(texts, Role::kPassage);
  if (server.requests().size() != requests_before) v.fail("repeat text reached the server");
  if (cache->hits() < hits_before + texts.size()) v.fail("cache hits not recorded");
  v.note("requests=" + std::to_string(reqs.size()) + " largest=" + std::to_string(largest) +
         " retry wait=" + fmt(waited) + "s");
}

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;
  std::function<void(Verdict&)> body;
};

}  // namespace
}  // namespace dox::testing

int main() {
  using namespace dox::testing;
  const std::vector<Criterion> criteria = {
      {1, "zero-dox worked example", 1, zero_example},
      {2, "angina worked example", 30, angina_example},
      {3, "xai-vs-ai ordering", 10, credit_ordering},
      {4, "more-material ordering", 30, enrichment_ordering},
      {5, "oracle equivalence", 60, oracle_equivalence},
      {6, "property suite", 120, property_suite},
      {7, "formula spot-checks", 1, formula_spot_checks},
      {8, "remote-backend contract", 10, remote_contract},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = Clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > c.budget_seconds) v.fail("runtime " + fmt(secs) + "s over budget");
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << c.number << " " << c.name << " ("
              << std::fixed << std::setprecision(2) << secs << "s) " << v.notes.str() << "\n"
              << std::defaultfloat;
  }
  std::cout << (failed ? "ACCEPTANCE FAILED: " + std::to_string(failed) + " criterion(s)"
                       : std::string("ACCEPTANCE PASSED"))
            << "\n";
  return failed ? 1 : 0;
}
