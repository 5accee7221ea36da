#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ldforge/editops.hpp"
#include "ldforge/pipeline.hpp"
#include "ldforge/synthgen.hpp"

using namespace ldforge;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            bool identical) {
  std::cout << std::left << std::setw(22) << name << std::right << std::fixed
            << std::setprecision(1) << std::setw(12) << serial_ms
            << std::setw(14) << parallel_ms << std::setw(10)
            << std::setprecision(2) << (serial_ms / parallel_ms) << "   "
            << (identical ? "outputs identical" : "OUTPUTS DIFFER") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"timing of the serial reference lane vs the OpenMP lane"};
  std::size_t n = 300;
  std::uint64_t seed = 0;
  std::string format_name = "json";
  std::size_t k = 1;
  std::size_t num_seeds = 10;
  app.add_option("--n", n, "corpus size");
  app.add_option("--seed", seed, "corpus seed");
  app.add_option("--format", format_name, "record format");
  app.add_option("--k", k, "retrieved pairs per record");
  app.add_option("--num-seeds", num_seeds, "negative candidates per sample");
  CLI11_PARSE(app, argc, argv);

  const FormatKind format = format_from(format_name);
  SynthParams params;
  params.n_samples = n;
  params.seed = seed;
  std::cerr << "generating " << n << " samples...\n";
  const std::vector<Sample> corpus = generate_corpus(params);
  auto [sft_set, pref_set] = split_corpus(corpus, 0.8, seed);
  const Bm25Index index = build_prompt_index(sft_set);
  EditConfig config;
  config.num_seeds = num_seeds;
  config.base_seed = seed;

  std::cout << std::left << std::setw(22) << "workload" << std::right
            << std::setw(12) << "serial ms" << std::setw(14) << "parallel ms"
            << std::setw(10) << "speedup" << "\n";

  {
    std::string a, b;
    double s = time_ms([&] {
      a = sft_records_to_jsonl(
          make_sft_records(sft_set, index, format, k, ExecMode::Serial));
    });
    double p = time_ms([&] {
      b = sft_records_to_jsonl(
          make_sft_records(sft_set, index, format, k, ExecMode::Parallel));
    });
    report("sft records", s, p, a == b);
  }

  {
    std::string a, b;
    double s = time_ms([&] {
      a = dpo_records_to_jsonl(
          make_dpo_records(pref_set, sft_set, index, format, k, config,
                           ExecMode::Serial)
              .records);
    });
    double p = time_ms([&] {
      b = dpo_records_to_jsonl(
          make_dpo_records(pref_set, sft_set, index, format, k, config,
                           ExecMode::Parallel)
              .records);
    });
    report("dpo records (ged)", s, p, a == b);
  }

  {
    // Score the corpus against itself: parse + canonical comparison per
    // sample, the evaluation hot path.
    std::string preds;
    for (const Sample& smp : corpus) {
      nlohmann::ordered_json j;
      j["sample_id"] = smp.sample_id;
      j["code"] = encode(smp.graph, format);
      preds += j.dump();
      preds += '\n';
    }
    std::string a, b;
    double s = time_ms([&] {
      a = evaluation_report_jsonl(evaluate_predictions(
          preds, corpus, format, false, 5, ExecMode::Serial));
    });
    double p = time_ms([&] {
      b = evaluation_report_jsonl(evaluate_predictions(
          preds, corpus, format, false, 5, ExecMode::Parallel));
    });
    report("evaluate predictions", s, p, a == b);
  }

  return 0;
}
