#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ldforge/bm25.hpp"
#include "ldforge/editops.hpp"
#include "ldforge/errors.hpp"
#include "ldforge/exec.hpp"
#include "ldforge/format.hpp"
#include "ldforge/io.hpp"
#include "ldforge/pipeline.hpp"
#include "ldforge/synthgen.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

// Progress and diagnostics go to stderr; stdout and files carry machine
// output only, so every subcommand pipes cleanly.

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    ldforge::write_file(out_path, text);
}

std::vector<ldforge::Sample> load_corpus_cli(const std::string& path,
                                             ldforge::FormatKind format,
                                             bool lenient) {
  std::vector<std::string> problems;
  std::vector<ldforge::Sample> samples =
      ldforge::load_corpus(path, format, lenient, &problems);
  for (const std::string& p : problems)
    std::cerr << path << ": skipped " << p << "\n";
  return samples;
}

ordered_json summary_to_json(const ldforge::PredictionOutcome& outcome) {
  ordered_json j;
  j["n_samples"] = outcome.summary.n_samples;
  j["node_f1"] = outcome.summary.node_f1;
  j["edge_f1"] = outcome.summary.edge_f1;
  j["node_em"] = outcome.summary.node_em;
  j["edge_em"] = outcome.summary.edge_em;
  j["program_em"] = outcome.summary.program_em;
  j["unparseable"] = outcome.unparseable;
  j["missing"] = outcome.missing_ids.size();
  j["extra_ids"] = outcome.extra_ids;
  return j;
}

struct ConvertOpts {
  std::string from, to, input, out;
  bool lenient = false;
};

void run_convert(const ConvertOpts& o) {
  ldforge::LDGraph g = ldforge::decode(ldforge::read_file(o.input),
                                       ldforge::format_from(o.from), o.lenient);
  write_or_print(o.out, ldforge::encode(g, ldforge::format_from(o.to)));
}

struct ValidateOpts {
  std::string format, input;
};

void run_validate(const ValidateOpts& o) {
  ldforge::LDGraph g = ldforge::decode(ldforge::read_file(o.input),
                                       ldforge::format_from(o.format));
  std::cerr << o.input << ": OK, " << g.nodes.size() << " node(s), "
            << g.edges.size() << " edge(s), " << g.rung_starts.size()
            << " rung(s)\n";
}

struct EvalOpts {
  std::string gt, pred, format, report;
  bool strip_fences = false;
  bool lenient = false;
  bool serial = false;
  int buckets = 0;
};

void run_eval(const EvalOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> gt = load_corpus_cli(o.gt, format, o.lenient);
  ldforge::PredictionOutcome outcome = ldforge::evaluate_predictions(
      ldforge::read_file(o.pred), gt, format, o.strip_fences, o.buckets,
      o.serial ? ldforge::ExecMode::Serial : ldforge::ExecMode::Parallel);
  if (!o.report.empty())
    ldforge::write_file(o.report, ldforge::evaluation_report_jsonl(outcome));
  std::cout << summary_to_json(outcome).dump() << "\n";
  std::cerr << "evaluated " << outcome.sample_ids.size() << " sample(s), "
            << outcome.unparseable << " unparseable, "
            << outcome.missing_ids.size() << " missing\n";
}

struct NegativesOpts {
  std::string format, input, out;
  double tau = 0.1;
  std::size_t num_seeds = 10;
  std::uint64_t base_seed = 0;
};

ldforge::EditConfig edit_config_of(const NegativesOpts& o) {
  ldforge::EditConfig config;
  config.tau = o.tau;
  config.num_seeds = o.num_seeds;
  config.base_seed = o.base_seed;
  return config;
}

void run_negatives(const NegativesOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  ldforge::LDGraph g = ldforge::decode(ldforge::read_file(o.input), format);
  std::string out;
  for (const ldforge::NegativeCandidate& c :
       ldforge::generate_negatives(g, edit_config_of(o))) {
    ordered_json j;
    j["seed_index"] = c.seed_index;
    j["seed"] = c.seed_value;
    try {
      j["code"] = ldforge::encode(c.graph, format);
    } catch (const ldforge::Error& e) {
      j["error"] = e.what();
    }
    out += j.dump();
    out += '\n';
  }
  write_or_print(o.out, out);
}

void run_hardneg(const NegativesOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  ldforge::LDGraph g = ldforge::decode(ldforge::read_file(o.input), format);
  std::vector<ldforge::NegativeCandidate> candidates =
      ldforge::generate_negatives(g, edit_config_of(o));
  ldforge::PreferencePair pair =
      ldforge::select_hard_negative(g, candidates, o.tau);
  ordered_json j;
  j["seed_index"] = pair.seed_index;
  j["seed"] = pair.seed_value;
  j["tau"] = pair.tau;
  j["ged"] = pair.ged;
  j["ged_exact"] = pair.ged_exact;
  try {
    j["code"] = ldforge::encode(pair.rejected, format);
  } catch (const ldforge::Error& e) {
    throw ldforge::Error(std::string("selected hard negative does not render as ") +
                         std::string(ldforge::to_string(format)) + ": " + e.what());
  }
  write_or_print(o.out, j.dump() + "\n");
}

struct IndexOpts {
  std::string corpus, format, out;
  double k1 = 1.2;
  double b = 0.75;
  bool lenient = false;
};

void run_index(const IndexOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> samples =
      load_corpus_cli(o.corpus, format, o.lenient);
  ldforge::Bm25Index index =
      ldforge::build_prompt_index(samples, {o.k1, o.b});
  ldforge::write_file(o.out, index.serialize());
  std::cerr << "indexed " << index.doc_count() << " document(s) into " << o.out
            << "\n";
}

struct RetrieveOpts {
  std::string index, query, exclude, out;
  std::size_t k = 5;
};

void run_retrieve(const RetrieveOpts& o) {
  ldforge::Bm25Index index =
      ldforge::Bm25Index::parse(ldforge::read_file(o.index));
  std::optional<std::string> exclude;
  if (!o.exclude.empty()) exclude = o.exclude;
  std::string out;
  for (const ldforge::RankedHit& h : index.top_k(o.query, o.k, exclude)) {
    ordered_json j;
    j["sample_id"] = h.sample_id;
    j["score"] = h.score;
    out += j.dump();
    out += '\n';
  }
  write_or_print(o.out, out);
}

struct PrepareSftOpts {
  std::string corpus, format, out;
  std::size_t k = 1;
  double k1 = 1.2;
  double b = 0.75;
  bool lenient = false;
  bool serial = false;
};

void run_prepare_sft(const PrepareSftOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> samples =
      load_corpus_cli(o.corpus, format, o.lenient);
  ldforge::Bm25Index index =
      ldforge::build_prompt_index(samples, {o.k1, o.b});
  std::size_t n = ldforge::emit_sft_records(
      samples, index, format, o.k, o.out,
      o.serial ? ldforge::ExecMode::Serial : ldforge::ExecMode::Parallel);
  std::cerr << "wrote " << n << " sft record(s) to " << o.out << "\n";
}

struct PrepareDpoOpts {
  std::string corpus, pool, format, out;
  std::size_t k = 1;
  double k1 = 1.2;
  double b = 0.75;
  double tau = 0.1;
  std::size_t num_seeds = 10;
  std::uint64_t base_seed = 0;
  bool lenient = false;
  bool serial = false;
};

void run_prepare_dpo(const PrepareDpoOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> pref =
      load_corpus_cli(o.corpus, format, o.lenient);
  std::vector<ldforge::Sample> pool =
      load_corpus_cli(o.pool, format, o.lenient);
  ldforge::Bm25Index index = ldforge::build_prompt_index(pool, {o.k1, o.b});
  ldforge::EditConfig config;
  config.tau = o.tau;
  config.num_seeds = o.num_seeds;
  config.base_seed = o.base_seed;
  ldforge::DpoEmitStats stats = ldforge::emit_dpo_records(
      pref, pool, index, format, o.k, config, o.out,
      o.serial ? ldforge::ExecMode::Serial : ldforge::ExecMode::Parallel);
  std::cerr << "wrote " << stats.written << " dpo record(s) to " << o.out
            << " (" << stats.skipped << " skipped)\n";
}

struct SplitOpts {
  std::string corpus, format, sft_out, pref_out;
  double sft_fraction = 0.8;
  std::uint64_t seed = 0;
  bool lenient = false;
};

void run_split(const SplitOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> samples =
      load_corpus_cli(o.corpus, format, o.lenient);
  auto [sft, pref] = ldforge::split_corpus(samples, o.sft_fraction, o.seed);
  ldforge::write_file(o.sft_out, ldforge::corpus_to_jsonl(sft, format));
  ldforge::write_file(o.pref_out, ldforge::corpus_to_jsonl(pref, format));
  std::cerr << "split " << samples.size() << " -> " << sft.size() << " + "
            << pref.size() << "\n";
}

struct BucketsOpts {
  std::string corpus, format, out;
  int n = 5;
  bool lenient = false;
};

void run_buckets(const BucketsOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> samples =
      load_corpus_cli(o.corpus, format, o.lenient);
  std::string out;
  for (const ldforge::ComplexityBucket& b :
       ldforge::bucket_by_complexity(samples, o.n)) {
    ordered_json j;
    j["label"] = b.label;
    j["size"] = b.sample_ids.size();
    j["min_complexity"] = b.min_complexity;
    j["max_complexity"] = b.max_complexity;
    j["sample_ids"] = b.sample_ids;
    out += j.dump();
    out += '\n';
  }
  write_or_print(o.out, out);
}

struct SynthOpts {
  std::string format, out;
  ldforge::SynthParams params;
};

void run_synth(const SynthOpts& o) {
  ldforge::FormatKind format = ldforge::format_from(o.format);
  std::vector<ldforge::Sample> corpus = ldforge::generate_corpus(o.params);
  write_or_print(o.out, ldforge::corpus_to_jsonl(corpus, format));
  std::cerr << "generated " << corpus.size() << " sample(s)\n";
}

void add_format_option(CLI::App* cmd, std::string& slot) {
  cmd->add_option("--format", slot, "program text format: xml, json, or metaprogram")
      ->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ladder program toolkit: codecs, metrics, retrieval, and "
               "training-record preparation"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "read options from an INI/TOML file (subcommand options go "
                 "under a [subcommand] section)");

  auto convert_opts = std::make_shared<ConvertOpts>();
  CLI::App* convert =
      app.add_subcommand("convert", "re-render a program in another format");
  convert->add_option("--from", convert_opts->from, "input format")->required();
  convert->add_option("--to", convert_opts->to, "output format")->required();
  convert->add_option("input", convert_opts->input, "program file")->required();
  convert->add_flag("--lenient", convert_opts->lenient,
                    "tolerate recoverable input defects");
  convert->add_option("--out", convert_opts->out, "output file (default stdout)");
  convert->callback([convert_opts] { run_convert(*convert_opts); });

  auto validate_opts = std::make_shared<ValidateOpts>();
  CLI::App* validate =
      app.add_subcommand("validate", "parse and validate a program file");
  add_format_option(validate, validate_opts->format);
  validate->add_option("input", validate_opts->input, "program file")->required();
  validate->callback([validate_opts] { run_validate(*validate_opts); });

  auto eval_opts = std::make_shared<EvalOpts>();
  CLI::App* eval =
      app.add_subcommand("eval", "score predictions against a ground-truth corpus");
  eval->add_option("--gt", eval_opts->gt, "ground-truth corpus (JSONL)")->required();
  eval->add_option("--pred", eval_opts->pred, "predictions file (JSONL)")->required();
  add_format_option(eval, eval_opts->format);
  eval->add_option("--report", eval_opts->report, "write a per-sample report here");
  eval->add_option("--buckets", eval_opts->buckets,
                   "also summarize per complexity bucket");
  eval->add_flag("--strip-fences", eval_opts->strip_fences,
                 "strip Markdown code fences from predictions");
  eval->add_flag("--lenient", eval_opts->lenient, "skip bad ground-truth records");
  eval->add_flag("--serial", eval_opts->serial, "use the serial reference lane");
  eval->callback([eval_opts] { run_eval(*eval_opts); });

  auto negatives_opts = std::make_shared<NegativesOpts>();
  CLI::App* negatives = app.add_subcommand(
      "negatives", "emit every edited negative candidate for one program");
  add_format_option(negatives, negatives_opts->format);
  negatives->add_option("input", negatives_opts->input, "program file")->required();
  negatives->add_option("--tau", negatives_opts->tau, "deletion ratio");
  negatives->add_option("--num-seeds,--num_seeds", negatives_opts->num_seeds,
                        "candidates per sample");
  negatives
      ->add_option("--base-seed,--base_seed", negatives_opts->base_seed,
                   "first editing seed")
      ->envname("LADDER_FORGE_SEED");
  negatives->add_option("--out", negatives_opts->out, "output file (default stdout)");
  negatives->callback([negatives_opts] { run_negatives(*negatives_opts); });

  auto hardneg_opts = std::make_shared<NegativesOpts>();
  CLI::App* hardneg = app.add_subcommand(
      "hardneg", "select the minimum-distance hard negative for one program");
  add_format_option(hardneg, hardneg_opts->format);
  hardneg->add_option("input", hardneg_opts->input, "program file")->required();
  hardneg->add_option("--tau", hardneg_opts->tau, "deletion ratio");
  hardneg->add_option("--num-seeds,--num_seeds", hardneg_opts->num_seeds,
                      "candidates per sample");
  hardneg
      ->add_option("--base-seed,--base_seed", hardneg_opts->base_seed,
                   "first editing seed")
      ->envname("LADDER_FORGE_SEED");
  hardneg->add_option("--out", hardneg_opts->out, "output file (default stdout)");
  hardneg->callback([hardneg_opts] { run_hardneg(*hardneg_opts); });

  auto index_opts = std::make_shared<IndexOpts>();
  CLI::App* index =
      app.add_subcommand("index", "build a BM25 index over corpus prompts");
  index->add_option("--corpus", index_opts->corpus, "corpus file (JSONL)")->required();
  add_format_option(index, index_opts->format);
  index->add_option("--k1", index_opts->k1, "BM25 k1");
  index->add_option("--b", index_opts->b, "BM25 b");
  index->add_flag("--lenient", index_opts->lenient, "skip bad records");
  index->add_option("--out", index_opts->out, "index file")->required();
  index->callback([index_opts] { run_index(*index_opts); });

  auto retrieve_opts = std::make_shared<RetrieveOpts>();
  CLI::App* retrieve =
      app.add_subcommand("retrieve", "rank indexed documents for a query");
  retrieve->add_option("--index", retrieve_opts->index, "index file")->required();
  retrieve->add_option("--query", retrieve_opts->query, "query text")->required();
  retrieve->add_option("--k", retrieve_opts->k, "results to return");
  retrieve->add_option("--exclude", retrieve_opts->exclude,
                       "sample_id to leave out");
  retrieve->add_option("--out", retrieve_opts->out, "output file (default stdout)");
  retrieve->callback([retrieve_opts] { run_retrieve(*retrieve_opts); });

  auto sft_opts = std::make_shared<PrepareSftOpts>();
  CLI::App* prepare_sft = app.add_subcommand(
      "prepare-sft", "emit supervised fine-tuning records with leave-one-out retrieval");
  prepare_sft->add_option("--corpus", sft_opts->corpus, "training corpus (JSONL)")
      ->required();
  add_format_option(prepare_sft, sft_opts->format);
  prepare_sft->add_option("--k", sft_opts->k, "retrieved pairs per record");
  prepare_sft->add_option("--k1", sft_opts->k1, "BM25 k1");
  prepare_sft->add_option("--b", sft_opts->b, "BM25 b");
  prepare_sft->add_flag("--lenient", sft_opts->lenient, "skip bad records");
  prepare_sft->add_flag("--serial", sft_opts->serial,
                        "use the serial reference lane");
  prepare_sft->add_option("--out", sft_opts->out, "records file")->required();
  prepare_sft->callback([sft_opts] { run_prepare_sft(*sft_opts); });

  auto dpo_opts = std::make_shared<PrepareDpoOpts>();
  CLI::App* prepare_dpo = app.add_subcommand(
      "prepare-dpo", "emit preference records with graph-edited hard negatives");
  prepare_dpo->add_option("--corpus", dpo_opts->corpus, "preference corpus (JSONL)")
      ->required();
  prepare_dpo
      ->add_option("--pool", dpo_opts->pool,
                   "retrieval pool corpus (the sft subset)")
      ->required();
  add_format_option(prepare_dpo, dpo_opts->format);
  prepare_dpo->add_option("--k", dpo_opts->k, "retrieved pairs per record");
  prepare_dpo->add_option("--k1", dpo_opts->k1, "BM25 k1");
  prepare_dpo->add_option("--b", dpo_opts->b, "BM25 b");
  prepare_dpo->add_option("--tau", dpo_opts->tau, "deletion ratio");
  prepare_dpo->add_option("--num-seeds,--num_seeds", dpo_opts->num_seeds,
                          "candidates per sample");
  prepare_dpo
      ->add_option("--base-seed,--base_seed", dpo_opts->base_seed,
                   "first editing seed")
      ->envname("LADDER_FORGE_SEED");
  prepare_dpo->add_flag("--lenient", dpo_opts->lenient, "skip bad records");
  prepare_dpo->add_flag("--serial", dpo_opts->serial,
                        "use the serial reference lane");
  prepare_dpo->add_option("--out", dpo_opts->out, "records file")->required();
  prepare_dpo->callback([dpo_opts] { run_prepare_dpo(*dpo_opts); });

  auto split_opts = std::make_shared<SplitOpts>();
  CLI::App* split =
      app.add_subcommand("split", "shuffle a corpus and split it in two");
  split->add_option("--corpus", split_opts->corpus, "corpus file (JSONL)")->required();
  add_format_option(split, split_opts->format);
  split->add_option("--sft-fraction,--sft_fraction,--fractions",
                    split_opts->sft_fraction, "share of the first half");
  split->add_option("--seed", split_opts->seed, "shuffle seed");
  split->add_flag("--lenient", split_opts->lenient, "skip bad records");
  split->add_option("--sft-out", split_opts->sft_out, "first-half corpus file")
      ->required();
  split->add_option("--pref-out", split_opts->pref_out, "second-half corpus file")
      ->required();
  split->callback([split_opts] { run_split(*split_opts); });

  auto buckets_opts = std::make_shared<BucketsOpts>();
  CLI::App* buckets =
      app.add_subcommand("buckets", "partition a corpus into complexity buckets");
  buckets->add_option("--corpus", buckets_opts->corpus, "corpus file (JSONL)")
      ->required();
  add_format_option(buckets, buckets_opts->format);
  buckets->add_option("--n", buckets_opts->n, "bucket count");
  buckets->add_flag("--lenient", buckets_opts->lenient, "skip bad records");
  buckets->add_option("--out", buckets_opts->out, "output file (default stdout)");
  buckets->callback([buckets_opts] { run_buckets(*buckets_opts); });

  auto synth_opts = std::make_shared<SynthOpts>();
  CLI::App* synth =
      app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  synth->add_option("--n", synth_opts->params.n_samples, "sample count");
  synth->add_option("--min-nodes", synth_opts->params.min_nodes,
                    "minimum nodes per graph");
  synth->add_option("--max-nodes", synth_opts->params.max_nodes,
                    "maximum nodes per graph");
  synth->add_option("--branch-prob", synth_opts->params.branch_probability,
                    "parallel-branch probability");
  synth->add_option("--fb-prob", synth_opts->params.fb_probability,
                    "function-block probability");
  synth->add_option("--seed", synth_opts->params.seed, "corpus seed");
  add_format_option(synth, synth_opts->format);
  synth->add_option("--out", synth_opts->out, "corpus file (default stdout)");
  synth->callback([synth_opts] { run_synth(*synth_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the flag error
    return code == 0 ? 0 : 2;
  } catch (const ldforge::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ldforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
