/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rosie/runtime.hpp"

namespace rosie::cli {

namespace fs = std::filesystem;

std::string format_ms(double ms) {
  std::ostringstream s;
  if (ms < 1.0)
    s << std::fixed << std::setprecision(1) << ms;
  else
    s << std::llround(ms);
  return s.str();
}

namespace {

struct QueryArgs {
  std::string db;
  std::string file;
  std::string policy = "rosie";
  double tau = kDefaultTau;
  double sigma = kDefaultSigma;
  bool explain = false;
  std::string trace_path;
  long timeout_ms = 0;
};

struct BenchArgs {
  std::string db;
  std::string queries;
  std::string policies = "static,eager,rosie";
  int runs = 11;
  double tau = kDefaultTau;
  double sigma = kDefaultSigma;
  long timeout_ms = 0;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Dataset open_db(const std::string& dir) { return snapshot_load_file((fs::path(dir) / kSnapshotName).string()); }

int cmd_load(const std::string& file, const std::string& db, std::ostream& out, std::ostream& err) {
  try {
    Dataset d = load_ntriples_file(file);
    fs::create_directories(db);
    snapshot_save_file(d, (fs::path(db) / kSnapshotName).string());
    out << "triples=" << d.size() << " terms=" << d.dictionary().size() << '\n';
    return kOk;
  } catch (const ParseError& e) {
    err << "rosie: " << e.what() << '\n';
    return kParseFailure;
  } catch (const fs::filesystem_error& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const IoError& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  }
}

Policy make_policy(const std::string& kind, double tau, double sigma, long timeout_ms) {
  Policy p;
  p.kind = parse_policy(kind);
  p.tau = tau;
  p.sigma = sigma;
  if (timeout_ms > 0) p.timeout = std::chrono::milliseconds(timeout_ms);
  return p;
}

int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
  try {
    Dataset d = open_db(a.db);
    Query q = parse_query(read_file(a.file));
    Policy policy = make_policy(a.policy, a.tau, a.sigma, a.timeout_ms);
    if (a.explain) err << explain(q, d);
    RunResult r = run(q, d, policy, fs::path(a.file).filename().string());
    write_tsv(r.result, d, out);
    if (!a.trace_path.empty()) {
      std::ofstream t(a.trace_path);
      if (!t) throw IoError("cannot write " + a.trace_path);
      emit_trace(r.trace, t);
    }
    return kOk;
  } catch (const SyntaxError& e) {
    err << "rosie: " << e.what() << '\n';
    return kParseFailure;
  } catch (const UnsupportedFeature& e) {
    err << "rosie: " << e.what() << '\n';
    return kUnsupported;
  } catch (const Timeout& e) {
    err << "rosie: " << e.what() << '\n';
    return kTimedOut;
  } catch (const IoError& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const SnapshotFormatError& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Error& e) {
    err << "rosie: " << e.what() << '\n';
    return kParseFailure;
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  Dataset d;
  std::vector<fs::path> files;
  std::vector<Policy> policies;
  try {
    d = open_db(a.db);
    for (const auto& e : fs::directory_iterator(a.queries))
      if (e.is_regular_file() && e.path().extension() == ".rq") files.push_back(e.path());
    for (const auto& name : split_commas(a.policies)) policies.push_back(make_policy(name, a.tau, a.sigma, a.timeout_ms));
  } catch (const fs::filesystem_error& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const IoError& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const SnapshotFormatError& e) {
    err << "rosie: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Error& e) {
    err << "rosie: " << e.what() << '\n';
    return kUsage;
  }
  std::sort(files.begin(), files.end());
  if (a.runs < 2) err << "rosie: warning: runs=" << a.runs << ", warm-up run not dropped\n";

  struct Cell {
    std::string query;
    std::size_t policy;
    std::optional<double> mean;
    std::uint64_t count = 0;
  };
  std::vector<Cell> cells;
  bool any_ok = false;
  for (const auto& f : files) {
    std::optional<Query> q;
    try {
      q = parse_query(read_file(f));
    } catch (const Error& e) {
      err << "rosie: " << f.filename().string() << ": " << e.what() << '\n';
    }
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      Cell c{f.stem().string(), pi, std::nullopt, 0};
      if (q) {
        try {
          std::vector<double> times;
          for (int i = 0; i < a.runs; ++i) {
            RunResult r = run(*q, d, policies[pi], f.filename().string());
            if (r.result.size() != r.trace.result_cardinality) throw Error("result count differs from trace");
            if (i > 0 || a.runs < 2) times.push_back(r.trace.total_ms);
            c.count = r.result.size();
          }
          double sum = 0;
          for (double t : times) sum += t;
          c.mean = sum / static_cast<double>(times.size());
          any_ok = true;
        } catch (const Error& e) {
          err << "rosie: " << f.filename().string() << " [" << policy_name(policies[pi].kind) << "]: " << e.what()
              << '\n';
        }
      }
      cells.push_back(std::move(c));
    }
  }

  // Geometric mean per policy over the queries that succeeded.
  std::vector<std::optional<double>> gmean(policies.size());
  for (std::size_t pi = 0; pi < policies.size(); ++pi) {
    double logs = 0;
    std::size_t n = 0;
    for (const auto& c : cells)
      if (c.policy == pi && c.mean) logs += std::log(std::max(*c.mean, 1e-3)), ++n;
    if (n > 0) gmean[pi] = std::exp(logs / static_cast<double>(n));
  }

  out << "query,policy,mean_ms,gmean_group,result_count\n";
  for (const auto& c : cells) {
    out << c.query << ',' << policy_name(policies[c.policy].kind) << ',';
    out << (c.mean ? format_ms(*c.mean) : "ERROR") << ',';
    out << (gmean[c.policy] ? format_ms(*gmean[c.policy]) : "ERROR") << ',';
    out << (c.mean ? std::to_string(c.count) : "ERROR") << '\n';
  }
  return any_ok ? kOk : kAllFailed;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rosie: SPARQL subset engine with runtime re-optimization"};
  app.require_subcommand(1);

  std::string nt_file, load_db;
  auto* load = app.add_subcommand("load", "Load an N-Triples file into a snapshot");
  load->add_option("file", nt_file, "N-Triples input")->required();
  load->add_option("--db", load_db, "Database directory")->required();

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Run one query and print TSV results");
  query->add_option("--db", qa.db)->required();
  query->add_option("--file", qa.file)->required();
  query->add_option("--policy", qa.policy)->check(CLI::IsMember({"static", "eager", "rosie"}));
  query->add_option("--tau", qa.tau)->check(CLI::Range(1.0, 1e300));
  query->add_option("--sigma", qa.sigma)->check(CLI::Range(1e-300, 1.0));
  query->add_flag("--explain", qa.explain, "Print the query graph and plan to stderr");
  query->add_option("--trace-json", qa.trace_path);
  query->add_option("--timeout-ms", qa.timeout_ms)->check(CLI::NonNegativeNumber);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time every query of a directory under each policy");
  bench->add_option("--db", ba.db)->required();
  bench->add_option("--queries", ba.queries)->required();
  bench->add_option("--policies", ba.policies);
  bench->add_option("--runs", ba.runs)->check(CLI::PositiveNumber);
  bench->add_option("--tau", ba.tau)->check(CLI::Range(1.0, 1e300));
  bench->add_option("--sigma", ba.sigma)->check(CLI::Range(1e-300, 1.0));
  bench->add_option("--timeout-ms", ba.timeout_ms)->check(CLI::NonNegativeNumber);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*load) return cmd_load(nt_file, load_db, out, err);
  if (*query) return cmd_query(qa, out, err);
  return cmd_bench(ba, out, err);
}

}  // namespace rosie::cli
