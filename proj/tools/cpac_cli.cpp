// Command-line front end for the cpac workbench.
//
// Exit codes: 0 success, 1 verdict false (validation failure, no witness,
// failed reduction or PAC verdict), 2 usage or input error, 3 internal
// invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cpac/cpac.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFalse = 1;
constexpr int kUsage = 2;
constexpr int kInvariant = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t window = 16;
};

struct ClassOptions {
  std::string spec = "thresholds";
  std::uint64_t budget = 32;
  std::uint64_t max_index = 16;

  void attach(CLI::App* sub) {
    sub->add_option("--class,--family", spec,
                    "monotone|cut|thresholds|counterexample|full|all-functions, or a class file");
    sub->add_option("--budget", budget, "step budget B for the counterexample class");
    sub->add_option("--max", max_index, "program count E for the counterexample class");
  }

  cpac::HypothesisClass resolve(const Globals& g) const {
    return cpac::resolve_class(spec, g.window, budget, max_index);
  }
};

// Writes to --out when given, otherwise stdout.
void emit(const Globals& g, const std::function<void(std::ostream&)>& body) {
  if (g.out.empty()) {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw cpac::Error("cannot open '" + g.out + "' for writing");
  body(file);
  file.flush();
  if (!file) throw cpac::Error("failed writing '" + g.out + "'");
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw cpac::Error("cannot open '" + path + "' for writing");
  body(file);
}

struct SampleOptions {
  std::string sample_file;
  std::size_t count = 200;
  std::size_t size = 8;
  std::string counterexample = "counterexample.txt";

  void attach(CLI::App* sub) {
    sub->add_option("--sample", sample_file, "validate on this sample file only");
    sub->add_option("--samples", count, "number of random samples");
    sub->add_option("--sample-size", size, "size of each random sample");
    sub->add_option("--counterexample", counterexample, "where to dump a violating sample");
  }

  std::vector<cpac::Sample> build(const Globals& g, std::uint64_t window) const {
    if (!sample_file.empty()) return {cpac::read_sample_file(sample_file)};
    return cpac::random_samples(window, count, size, cpac::RandomSeed{g.seed});
  }
};

int report_validation(const Globals& g, const SampleOptions& so, const cpac::ValidationResult& r) {
  emit(g, [&](std::ostream& out) {
    out << "valid," << (r.ok ? "true" : "false") << '\n';
    if (!r.ok) out << "reason," << r.reason << '\n' << "counterexample," << so.counterexample << '\n';
  });
  if (r.ok) return kOk;
  write_file(so.counterexample, [&](std::ostream& out) { cpac::write_sample(out, *r.counterexample); });
  return kVerdictFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpac: computable PAC learning workbench"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--window", g.window, "domain window W");

  std::function<int()> action;

  // vc
  auto* vc = app.add_subcommand("vc", "VC dimension by exhaustive search");
  ClassOptions vc_class;
  std::uint64_t cap = 4;
  vc_class.attach(vc);
  vc->add_option("--cap", cap, "largest set size to try")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{63}));
  vc->callback([&] {
    action = [&] {
      const auto c = vc_class.resolve(g);
      const auto r = cpac::vc_dimension(c, g.window, cap);
      emit(g, [&](std::ostream& out) {
        out << "dimension," << (r.reached_cap ? ">=" : "") << r.dimension << '\n' << "shattered_set,";
        for (std::size_t i = 0; i < r.shattered_set.size(); ++i) out << (i ? " " : "") << r.shattered_set[i].value;
        out << '\n';
      });
      return kOk;
    };
  });

  // witness
  auto* witness = app.add_subcommand("witness", "d-witness certificate over point tuples");
  ClassOptions witness_class;
  std::uint64_t d = 1;
  std::string tuples = "all";
  witness_class.attach(witness);
  witness->add_option("--d", d, "claimed VC bound d");
  witness->add_option("--tuples", tuples, "'all' for every increasing tuple in the window, or a tuple file");
  witness->callback([&] {
    action = [&] {
      const auto c = witness_class.resolve(g);
      std::vector<std::vector<cpac::Point>> us;
      if (tuples == "all") {
        us = cpac::all_tuples(std::min(g.window, cpac::window_of(c)), d + 1);
      } else {
        auto in = cpac::detail::open_input(tuples);
        us = cpac::read_tuples(in);
      }
      try {
        const auto cert = cpac::make_certificate(c, d, us);
        emit(g, [&](std::ostream& out) { cpac::write_certificate(out, cert); });
      } catch (const cpac::NoWitness& e) {
        std::cerr << "no witness: " << e.what() << '\n';
        return kVerdictFalse;
      }
      return kOk;
    };
  });

  // erm
  auto* erm = app.add_subcommand("erm", "run the ERM learner on a sample");
  ClassOptions erm_class;
  std::string erm_sample;
  bool force_tree = false;
  erm_class.attach(erm);
  erm->add_option("--sample", erm_sample, "sample file")->required();
  erm->add_flag("--tree", force_tree, "require a tree class and use tree ERM");
  erm->callback([&] {
    action = [&] {
      const auto c = erm_class.resolve(g);
      if (force_tree && !std::holds_alternative<cpac::TreeClass>(c))
        throw cpac::ParseError("--tree needs a tree class");
      const auto s = cpac::read_sample_file(erm_sample);
      const auto h = cpac::erm(c)(s);
      emit(g, [&](std::ostream& out) {
        out << "hypothesis," << cpac::to_string(h.table()) << '\n'
            << "empirical_risk," << (s.empty() ? "undefined" : cpac::to_fraction_string(cpac::empirical_risk(h, s)))
            << '\n';
      });
      return kOk;
    };
  });

  // validate-erm
  auto* verm = app.add_subcommand("validate-erm", "check a learner against brute-force ERM");
  ClassOptions verm_class;
  SampleOptions verm_samples;
  std::string verm_learner = "erm";
  verm_class.attach(verm);
  verm_samples.attach(verm);
  verm->add_option("--learner", verm_learner, "erm|prefix-m|stage:K|const:I|zero");
  verm->callback([&] {
    action = [&] {
      const auto c = verm_class.resolve(g);
      const auto a = cpac::resolve_learner(verm_learner, c);
      return report_validation(g, verm_samples,
                               cpac::validate_erm(a, c, verm_samples.build(g, cpac::window_of(c))));
    };
  });

  // certify-aerm
  auto* caerm = app.add_subcommand("certify-aerm", "measure an epsilon schedule for a staged ERM");
  ClassOptions caerm_class;
  std::string caerm_learner = "prefix-m";
  std::size_t per_size = 50;
  std::size_t max_size = 16;
  caerm_class.attach(caerm);
  caerm->add_option("--learner", caerm_learner, "prefix-m|stage:K");
  caerm->add_option("--per-size", per_size, "battery samples per sample size");
  caerm->add_option("--max-size", max_size, "largest battery sample size");
  caerm->callback([&] {
    action = [&] {
      const auto c = caerm_class.resolve(g);
      const auto* e = std::get_if<cpac::EnumeratedClass>(&c);
      if (e == nullptr) throw cpac::ParseError("certify-aerm needs an enumerated class");
      cpac::StageSchedule stages;
      if (caerm_learner == "prefix-m") {
        stages = [](std::size_t m) { return std::uint64_t{m}; };
      } else if (caerm_learner.rfind("stage:", 0) == 0) {
        const auto k = cpac::detail::parse_natural(caerm_learner.substr(6));
        stages = [k](std::size_t) { return k; };
      } else {
        throw cpac::ParseError("unknown staged learner '" + caerm_learner + "'");
      }
      std::vector<cpac::Sample> battery;
      for (std::size_t m = 1; m <= max_size; ++m) {
        auto batch = cpac::random_samples(e->window(), per_size, m, cpac::derive_seed(cpac::RandomSeed{g.seed}, m));
        battery.insert(battery.end(), batch.begin(), batch.end());
      }
      const auto result = cpac::asymptotic_erm(*e, stages, std::move(battery));
      emit(g, [&](std::ostream& out) { cpac::write_epsilon_schedule(out, result.epsilon); });
      return kOk;
    };
  });

  // validate-aerm
  auto* vaerm = app.add_subcommand("validate-aerm", "check a learner against an epsilon schedule");
  ClassOptions vaerm_class;
  SampleOptions vaerm_samples;
  std::string vaerm_learner = "prefix-m";
  std::string eps_file;
  vaerm_class.attach(vaerm);
  vaerm_samples.attach(vaerm);
  vaerm->add_option("--learner", vaerm_learner, "erm|prefix-m|stage:K|const:I|zero");
  vaerm->add_option("--eps", eps_file, "epsilon schedule file ('m,p/q' lines)")->required();
  vaerm->callback([&] {
    action = [&] {
      const auto c = vaerm_class.resolve(g);
      const auto a = cpac::resolve_learner(vaerm_learner, c);
      auto in = cpac::detail::open_input(eps_file);
      const auto eps = cpac::read_epsilon_schedule(in);
      return report_validation(
          g, vaerm_samples, cpac::validate_asymptotic_erm(a, c, eps, vaerm_samples.build(g, cpac::window_of(c))));
    };
  });

  // halting-table
  auto* ht = app.add_subcommand("halting-table", "staged halting approximation as CSV");
  std::uint64_t ht_max = 64;
  std::uint64_t ht_budget = 256;
  ht->add_option("--max", ht_max, "programs 0..E-1");
  ht->add_option("--budget", ht_budget, "step budget B");
  ht->callback([&] {
    action = [&] {
      const auto table = cpac::halting_approx(ht_max, ht_budget);
      emit(g, [&](std::ostream& out) {
        out << "e,halt_step\n";
        for (std::uint64_t e = 0; e < ht_max; ++e) {
          out << e << ',';
          if (const auto& s = table.halt_step(e)) out << *s;
          out << '\n';
        }
      });
      return kOk;
    };
  });

  // reduce
  auto* reduce = app.add_subcommand("reduce", "decide K_B through an ERM learner for the point-pair class");
  std::uint64_t red_max = 64;
  std::uint64_t red_budget = 256;
  std::size_t red_m = 1;
  reduce->add_option("--max", red_max, "programs 0..E-1");
  reduce->add_option("--budget", red_budget, "step budget B");
  reduce->add_option("--m", red_m, "sample length")->check(CLI::PositiveNumber);
  reduce->callback([&] {
    action = [&] {
      const auto table = cpac::halting_approx(red_max, red_budget);
      const auto window = std::max(g.window, cpac::counterexample_window(red_max, red_budget));
      const auto learner = cpac::erm_enumerated(cpac::build_counterexample_class(table, window));
      bool all_agree = true;
      emit(g, [&](std::ostream& out) {
        out << "e,learner_says,ground_truth,agree\n";
        for (std::uint64_t e = 0; e < red_max; ++e) {
          const bool says = cpac::decide_via_learner(learner, e, red_m);
          const bool truth = table.in_k(e, red_budget);
          all_agree = all_agree && says == truth;
          out << e << ',' << says << ',' << truth << ',' << (says == truth) << '\n';
        }
      });
      return all_agree ? kOk : kVerdictFalse;
    };
  });

  // pac-run
  auto* pac = app.add_subcommand("pac-run", "Monte-Carlo PAC experiment");
  std::string config_file;
  std::string p_class, p_learner, p_dist, p_eps, p_delta;
  std::uint64_t p_trials = 0, p_m = 0, p_budget = 0, p_max = 0;
  pac->add_option("--config", config_file, "key = value config file");
  pac->add_option("--class,--family", p_class, "class name or file");
  pac->add_option("--learner", p_learner, "erm|prefix-m|stage:K|const:I|zero");
  pac->add_option("--distribution", p_dist, "realizable-threshold:K|uniform-labels|point-mass:X:Y|file");
  pac->add_option("--epsilon", p_eps, "accuracy epsilon in (0,1)");
  pac->add_option("--delta", p_delta, "confidence delta in (0,1)");
  pac->add_option("--trials", p_trials, "number of trials");
  pac->add_option("--m", p_m, "override the sample size");
  pac->add_option("--budget", p_budget, "counterexample budget");
  pac->add_option("--max", p_max, "counterexample program count");
  pac->callback([&] {
    action = [&] {
      cpac::ExperimentConfig cfg = config_file.empty() ? cpac::ExperimentConfig{} : cpac::read_config_file(config_file);
      const auto given = [&](const char* name) { return pac->count(name) > 0; };
      if (given("--class")) cfg.set("class", p_class);
      if (given("--learner")) cfg.set("learner", p_learner);
      if (given("--distribution")) cfg.set("distribution", p_dist);
      if (given("--epsilon")) cfg.set("epsilon", p_eps);
      if (given("--delta")) cfg.set("delta", p_delta);
      if (given("--trials")) cfg.trials = p_trials;
      if (given("--m")) cfg.m_override = p_m;
      if (given("--budget")) cfg.budget = p_budget;
      if (given("--max")) cfg.max_index = p_max;
      if (app.count("--seed") > 0) cfg.seed = cpac::RandomSeed{g.seed};
      if (app.count("--window") > 0) cfg.window = g.window;
      const auto report = cpac::run_pac_experiment(cpac::resolve(cfg));
      emit(g, [&](std::ostream& out) { cpac::emit_report(out, report); });
      if (!g.out.empty())
        std::cout << "m," << report.m << "\nsuccess_rate," << cpac::to_fraction_string(report.success_rate)
                  << "\nverdict," << (report.verdict ? "true" : "false") << '\n';
      return report.verdict ? kOk : kVerdictFalse;
    };
  });

  // enumerate
  auto* en = app.add_subcommand("enumerate", "print a class in its file format");
  ClassOptions en_class;
  en_class.attach(en);
  en->callback([&] {
    action = [&] {
      const auto c = en_class.resolve(g);
      emit(g, [&](std::ostream& out) {
        if (const auto* e = std::get_if<cpac::EnumeratedClass>(&c))
          cpac::write_enumerated(out, *e);
        else
          cpac::write_tree(out, std::get<cpac::TreeClass>(c));
      });
      return kOk;
    };
  });

  // encode / decode
  auto* enc = app.add_subcommand("encode", "program text to its number");
  std::string program_file;
  enc->add_option("--program", program_file, "program text file")->required();
  enc->callback([&] {
    action = [&] {
      auto in = cpac::detail::open_input(program_file);
      const auto p = cpac::read_program(in);
      emit(g, [&](std::ostream& out) { out << cpac::encode(p).str() << '\n'; });
      return kOk;
    };
  });

  auto* dec = app.add_subcommand("decode", "number to program text");
  std::string code;
  dec->add_option("--code", code, "decimal program number")->required();
  dec->callback([&] {
    action = [&] {
      if (code.empty() || code.find_first_not_of("0123456789") != std::string::npos)
        throw cpac::ParseError("program number must be a decimal natural");
      const auto p = cpac::decode(cpac::BigInt(code));
      emit(g, [&](std::ostream& out) { cpac::write_program(out, p); });
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const cpac::InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const cpac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
